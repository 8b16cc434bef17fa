#include "doctest.h"

#include "fixtures.hpp"
#include "psw/dependence.hpp"
#include "psw/exec.hpp"
#include "psw/parser.hpp"

#include <random>

using namespace psw;
using namespace psw::dep;

namespace {

PredecessorProgram chain_prog(long long n) {
  // a[i] <- a[i-1] + 1 with boundary 0: final values 1..n.
  PredecessorProgram prog;
  prog.domain.dims = {{1, n}};
  prog.reads = {{{1}}};
  prog.kernel = [](const Point&, const std::vector<Value>& in) {
    return in[0] + Value::integer(1);
  };
  prog.fill_boundary(Value::integer(0));
  return prog;
}

ConnectionEquation make_eq_1d(Poly w, Poly r, long long lo, long long hi, long long degree) {
  ConnectionEquation eq;
  eq.array = "a";
  eq.write_label = "w";
  eq.read_label = "r";
  eq.write_index = {std::move(w)};
  eq.read_index = {std::move(r)};
  eq.counters = {"i"};
  eq.bounds.dims = {{lo, hi}};
  eq.degree = degree;
  return eq;
}

}  // namespace

TEST_CASE("connection equations: write a[i], read a[i-1]") {
  auto s = parse_schema(R"(
schema m {
  start a0
  a0: i = zero() then a1
  a1: do lbody while le(i, n) then a9
  a9: halt
}
schema lbody {
  start b0
  b0: i = inc(i) then b1
  b1: a[id(i)] = f(a[dec(i)]) then b2
  b2: halt
}
)");
  Box bounds;
  bounds.dims = {{1, 5}};
  auto eqs = build_connection_equations(*s, bounds);
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].degree == 1);
  CHECK(!eqs[0].opaque);
  auto res = solve_connection(eqs[0]);
  CHECK(res.status == SolveStatus::Exact);
  std::vector<std::pair<Point, Point>> expect = {
      {{1}, {2}}, {{2}, {3}}, {{3}, {4}}, {{4}, {5}}};
  CHECK(res.solutions == expect);
}

TEST_CASE("connection equations: stencil nest yields one equation per kernel read") {
  auto s = parse_schema(fixtures::kStencilSrc);
  Box bounds;
  bounds.dims = {{1, 4}, {1, 4}, {1, 4}};
  auto eqs = build_connection_equations(*s, bounds);
  CHECK(eqs.size() == 4);
  for (const auto& eq : eqs) {
    CHECK(eq.degree == 1);
    CHECK(!eq.opaque);
  }
}

TEST_CASE("connection equations: degree-2 flagged and solved by enumeration") {
  // write a[i^2], read a[2j] over [1,10]^2.
  auto eq = make_eq_1d(Poly::var(0, 1) * Poly::var(0, 1), Poly::constant(2) * Poly::var(0, 1), 1,
                       10, 2);
  auto res = solve_connection(eq);
  CHECK(res.status == SolveStatus::BoundedOnly);
  std::vector<std::pair<Point, Point>> expect = {{{2}, {2}}, {{4}, {8}}};
  CHECK(res.solutions == expect);
}

TEST_CASE("connection equations: opaque index expression is unsolvable") {
  auto s = parse_schema(R"(
schema m {
  start a0
  a0: do lbody while le(i, n) then a9
  a9: halt
}
schema lbody {
  start b0
  b0: i = inc(i) then b1
  b1: a[id(i)] = f(a[mystery(i)]) then b2
  b2: halt
}
)");
  Box bounds;
  bounds.dims = {{1, 5}};
  auto eqs = build_connection_equations(*s, bounds);
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].opaque);
  auto res = solve_connection(eqs[0]);
  CHECK(res.status == SolveStatus::UnsolvableOpaque);
  CHECK(res.solutions.empty());
}

TEST_CASE("solve_connection equals the oracle on random degree-1 instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    long long a = static_cast<long long>(rng() % 5) - 2;
    long long b = static_cast<long long>(rng() % 5) - 2;
    long long cw = static_cast<long long>(rng() % 7) - 3;
    long long cr = static_cast<long long>(rng() % 7) - 3;
    if (a == 0 && b == 0) continue;
    Poly w = Poly::constant(a) * Poly::var(0, 1) + Poly::constant(cw);
    Poly r = Poly::constant(b) * Poly::var(0, 1) + Poly::constant(cr);
    auto eq = make_eq_1d(w, r, 1, 12, 1);
    auto fast = solve_connection(eq);
    auto slow = solve_connection_oracle(eq);
    std::sort(slow.begin(), slow.end());
    CHECK(fast.solutions == slow);
  }
}

TEST_CASE("solve_connection budget") {
  auto eq = make_eq_1d(Poly::var(0, 1) * Poly::var(0, 1), Poly::var(0, 1), 1, 1000, 2);
  CHECK_THROWS_AS(solve_connection(eq, BigInt(1000)), BudgetExceeded);
}

TEST_CASE("ready_wavefronts: 1-D chain gives singleton layers") {
  auto prog = chain_prog(5);
  auto plan = ready_wavefronts(prog);
  REQUIRE(plan.layers.size() == 5);
  for (const auto& layer : plan.layers) CHECK(layer.size() == 1);
  REQUIRE(plan.normal.has_value());
  CHECK(*plan.normal == std::vector<long long>{1});
}

TEST_CASE("ready_wavefronts: stencil first layer is the corner") {
  auto prog = fixtures::stencil_prog(4);
  auto plan = ready_wavefronts(prog);
  REQUIRE(!plan.layers.empty());
  CHECK(plan.layers[0] == std::vector<Point>{{1, 1, 1}});
  // Layers partition the domain.
  size_t total = 0;
  for (const auto& l : plan.layers) total += l.size();
  CHECK(total == 64);
  // Every edge goes from an earlier layer to a later one.
  std::map<Point, size_t> layer_of;
  for (size_t t = 0; t < plan.layers.size(); ++t)
    for (const auto& p : plan.layers[t]) layer_of[p] = t;
  for (const auto& [q, p] : plan.edges) CHECK(layer_of.at(q) < layer_of.at(p));
  // The paper sketches normal (1,1,1), but (1,1,1).(1,-1,0) = 0; the
  // certifier must find a strictly separating normal instead.
  REQUIRE(plan.normal.has_value());
  const auto& n = *plan.normal;
  for (const auto& o : prog.reads) {
    long long dot = 0;
    for (size_t i = 0; i < 3; ++i) dot += n[i] * o.d[i];
    CHECK(dot > 0);
  }
}

TEST_CASE("ready_wavefronts rejects cyclic dependence") {
  PredecessorProgram prog;
  prog.domain.dims = {{1, 3}, {1, 3}};
  prog.reads = {{{0, -1}}};  // reads (x, y+1): not lexicographically earlier
  prog.kernel = [](const Point&, const std::vector<Value>&) { return Value::integer(0); };
  CHECK_THROWS_WITH_AS(ready_wavefronts(prog),
                       doctest::Contains("(0,-1)"), EvalError);
}

TEST_CASE("dependence_cone: corner point is empty, closure is monotone") {
  auto prog = fixtures::stencil_prog(4);
  CHECK(dependence_cone(prog, {1, 1, 1}).empty());
  auto cone222 = dependence_cone(prog, {2, 2, 2});
  CHECK(cone222.count({1, 1, 1}) == 1);
  // p in cone(q) implies cone(p) subset of cone(q), and q not in cone(p).
  ConeCache cache;
  for (const auto& p : cone222) {
    auto sub = dependence_cone(prog, p, &cache);
    for (const auto& x : sub) CHECK(cone222.count(x) == 1);
    CHECK(sub.count({2, 2, 2}) == 0);
  }
  CHECK_THROWS_AS(dependence_cone(prog, {9, 9, 9}), EvalError);
}

TEST_CASE("check_parallel_set: singletons and wavefront layers pass") {
  auto prog = fixtures::stencil_prog(4);
  auto plan = ready_wavefronts(prog);
  ConeCache cache;
  CHECK(check_parallel_set(prog, {{2, 2, 2}}, &cache));
  for (const auto& layer : plan.layers) CHECK(check_parallel_set(prog, layer, &cache));
}

TEST_CASE("execute_wavefront: chain result and order independence") {
  auto prog = chain_prog(5);
  auto vals = execute_wavefront(prog);
  for (long long i = 1; i <= 5; ++i) CHECK(vals.at({i}) == Value::integer(i));
  auto seq = execute_sequential(prog);
  CHECK(vals == seq);
  for (uint64_t seed = 1; seed <= 10; ++seed) CHECK(execute_wavefront(prog, seed) == seq);
}

TEST_CASE("execute_wavefront: missing boundary datum is an error") {
  auto prog = chain_prog(3);
  prog.boundary.clear();
  CHECK_THROWS_WITH_AS(execute_wavefront(prog), doctest::Contains("boundary"), EvalError);
}

TEST_CASE("execute_wavefront equals schema execution on the stencil (dual path)") {
  const long long n = 4;
  auto prog = fixtures::stencil_prog(n);
  auto wave = execute_wavefront(prog);

  auto s = parse_schema(fixtures::kStencilSrc);
  auto ci = fixtures::stencil_interp(n);
  // Make boundaries interesting: k=0 plane rises linearly.
  for (long long i = 0; i <= n + 1; ++i)
    for (long long j = 0; j <= n + 1; ++j) {
      Value v = Value::integer(i + j);
      ci->start[Cell{"f", {Value::integer(0), Value::integer(i), Value::integer(j)}}] = v;
      prog.boundary[{0, i, j}] = v;
    }
  wave = execute_wavefront(prog);
  ExecOptions opt;
  opt.fuel = 1000000;
  auto r = execute(*s, *ci, opt);
  REQUIRE(r.outcome == Outcome::Halted);
  for (long long k = 1; k <= n; ++k)
    for (long long i = 1; i <= n; ++i)
      for (long long j = 1; j <= n; ++j) {
        Cell cell{"f", {Value::integer(k), Value::integer(i), Value::integer(j)}};
        CHECK(r.memory.at(cell) == wave.at({k, i, j}));
      }
}

TEST_CASE("diag fixture: layers are collinear along (1,-3)") {
  auto prog = fixtures::diag_prog(8);
  auto plan = ready_wavefronts(prog);
  for (const auto& layer : plan.layers) {
    for (size_t i = 1; i < layer.size(); ++i) {
      long long dx = layer[i][0] - layer[0][0];
      long long dy = layer[i][1] - layer[0][1];
      CHECK(dy == -3 * dx);
    }
  }
}
