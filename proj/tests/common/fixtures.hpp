#pragma once

#include "psw/dependence.hpp"
#include "psw/interp.hpp"
#include "psw/parser.hpp"

#include <memory>

namespace psw::fixtures {

// Three nested counted loops around one four-point averaging kernel.
inline const char* kStencilSrc = R"(
schema stencil {
  start t0
  t0: k = one() then t1
  t1: do kbody while le(k, n) then t9
  t9: halt
}
schema kbody {
  start k0
  k0: i = one() then k1
  k1: do ibody while le(i, n) then k2
  k2: k = inc(k) then k9
  k9: halt
}
schema ibody {
  start i0
  i0: j = one() then i1
  i1: do jbody while le(j, n) then i2
  i2: i = inc(i) then i9
  i9: halt
}
schema jbody {
  start j0
  j0: f[id(k), id(i), id(j)] = avg4(f[id(k), dec(i), id(j)], f[id(k), id(i), dec(j)], f[dec(k), inc(i), id(j)], f[dec(k), id(i), inc(j)]) then j1
  j1: j = inc(j) then j9
  j9: halt
}
)";

// Start memory for the stencil schema: bound n plus zero boundary values on
// every plane an interior point can reach.
inline std::shared_ptr<ConcreteInterpretation> stencil_interp(long long n) {
  auto ci = std::make_shared<ConcreteInterpretation>();
  ci->start[Cell::simple("n")] = Value::integer(n);
  auto put = [&](long long k, long long i, long long j) {
    ci->start[Cell{"f", {Value::integer(k), Value::integer(i), Value::integer(j)}}] =
        Value::integer(0);
  };
  for (long long i = 0; i <= n + 1; ++i)
    for (long long j = 0; j <= n + 1; ++j) put(0, i, j);
  for (long long k = 1; k <= n; ++k)
    for (long long t = 0; t <= n + 1; ++t) {
      put(k, 0, t);
      put(k, t, 0);
      put(k, n + 1, t);
      put(k, t, n + 1);
    }
  return ci;
}

// The same nest in predecessor form: reads (k,i-1,j), (k,i,j-1),
// (k-1,i+1,j), (k-1,i,j+1); kernel averages the four inputs.
inline dep::PredecessorProgram stencil_prog(long long n) {
  dep::PredecessorProgram prog;
  prog.domain.dims = {{1, n}, {1, n}, {1, n}};
  prog.reads = {{{0, 1, 0}}, {{0, 0, 1}}, {{1, -1, 0}}, {{1, 0, -1}}};
  prog.kernel = [](const dep::Point&, const std::vector<Value>& in) {
    BigRat s = in[0].as_rat() + in[1].as_rat() + in[2].as_rat() + in[3].as_rat();
    return Value::rational(BigRat(s / 4));
  };
  prog.fill_boundary(Value::integer(0));
  return prog;
}

// Two-dimensional nest whose wavefronts are collinear segments along the
// direction (1,-3): reads (x, y-1) and (x-1, y+2).
inline dep::PredecessorProgram diag_prog(long long n) {
  dep::PredecessorProgram prog;
  prog.domain.dims = {{1, n}, {1, n}};
  prog.reads = {{{0, 1}}, {{1, -2}}};
  prog.kernel = [](const dep::Point&, const std::vector<Value>& in) {
    return Value::integer(BigInt(in[0].as_rat().convert_to<BigInt>() +
                                 in[1].as_rat().convert_to<BigInt>() + 1));
  };
  prog.fill_boundary(Value::integer(0));
  return prog;
}

// Loop fixtures used by the separation and equivalence suites.

inline const char* kCountedLoopSrc = R"(
schema m {
  start a0
  a0: i = zero() then a1
  a1: do lbody while le(i, n) then a9
  a9: halt
}
schema lbody {
  start b0
  b0: i = inc(i) then b1
  b1: a[i] = f(a[i], x) then b2
  b2: halt
}
)";

inline const char* kListLoopSrc = R"(
schema m {
  start a0
  a0: do lbody while ne(cur, stop) then a9
  a9: halt
}
schema lbody {
  start b0
  b0: cur = next[cur] then b1
  b1: sum = add(sum, data[cur]) then b2
  b2: halt
}
)";

inline const char* kUseThenChangeSrc = R"(
schema m {
  start a0
  a0: i = zero() then a1
  a1: do lbody while le(i, n) then a9
  a9: halt
}
schema lbody {
  start b0
  b0: x = f(a[i]) then b1
  b1: i = inc(i) then b2
  b2: halt
}
)";

inline const char* kBranchLoopSrc = R"(
schema m {
  start a0
  a0: do lbody while lt(i, n) then a9
  a9: halt
}
schema lbody {
  start b0
  b0: if p(s) then b1 else b2
  b1: s = f(a[i], s) then b3
  b2: s = g(s) then b3
  b3: i = inc(i) then b4
  b4: halt
}
)";

inline const char* kTwoArraySrc = R"(
schema m {
  start a0
  a0: do lbody while ne(h, stop) then a9
  a9: halt
}
schema lbody {
  start b0
  b0: h = link[h] then b1
  b1: t = tag[h] then b2
  b2: acc = mix(acc, payload[t]) then b3
  b3: halt
}
)";

struct LoopFixture {
  const char* name;
  const char* src;
  const char* loop_label;
};

inline std::vector<LoopFixture> separation_fixtures() {
  return {
      {"counted", kCountedLoopSrc, "a1"},
      {"list", kListLoopSrc, "a0"},
      {"use-then-change", kUseThenChangeSrc, "a1"},
      {"branch", kBranchLoopSrc, "a0"},
      {"two-array", kTwoArraySrc, "a0"},
  };
}

}  // namespace psw::fixtures
