#include "doctest.h"

#include "psw/parser.hpp"
#include "psw/separate.hpp"
#include "psw/validate.hpp"

using namespace psw;

namespace {

// Counted loop already in forward order: the increment precedes the use.
const char* kCountedSrc = R"(
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

// Linked-list traversal: advance the cursor, use the payload.
const char* kListSrc = R"(
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

// Use-then-change pattern: the kernel reads a[i] before i advances.
const char* kUseThenChangeSrc = R"(
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

size_t count_instrs(const Schema& s) {
  size_t n = s.instrs.size();
  for (const auto& [_, sub] : s.subs) n += count_instrs(*sub);
  return n;
}

size_t count_copies(const Schema& s) {
  size_t n = 0;
  for (const auto& i : s.instrs)
    if (i.kind == InstrKind::Copy) ++n;
  for (const auto& [_, sub] : s.subs) n += count_copies(*sub);
  return n;
}

}  // namespace

TEST_CASE("to_forward_oriented: already-forward loop unchanged") {
  auto s = parse_schema(kCountedSrc);
  auto f = to_forward_oriented(*s);
  CHECK(count_copies(*f) == 0);
  CHECK(count_instrs(*f) == count_instrs(*s));
}

TEST_CASE("to_forward_oriented: use-then-change gets one copy") {
  auto s = parse_schema(kUseThenChangeSrc);
  auto f = to_forward_oriented(*s);
  CHECK(count_copies(*f) == 1);
  ConcreteInterpretation ci;
  ci.start[Cell::simple("n")] = Value::integer(3);
  ci.bind_builtin_function("f", "id");
  for (long long k = 0; k <= 4; ++k)
    ci.start[Cell{"a", {Value::integer(k)}}] = Value::integer(10 + k);
  CHECK(runs_equal(*s, *f, ci, 10000) == RunsVerdict::Equal);
}

TEST_CASE("to_forward_oriented: two offending branches get two distinct copies") {
  auto s = parse_schema(R"(
schema m {
  start a0
  a0: do lbody while le(i, n) then a9
  a9: halt
}
schema lbody {
  start b0
  b0: if p(s) then b1 else b2
  b1: u = f(a[i]) then b3
  b2: w = g(b[j]) then b3
  b3: i = inc(i) then b4
  b4: j = inc(j) then b5
  b5: halt
}
)");
  auto f = to_forward_oriented(*s);
  CHECK(count_copies(*f) == 2);
  std::set<std::string> targets;
  for (const auto& [_, sub] : f->subs)
    for (const auto& ins : sub->instrs)
      if (ins.kind == InstrKind::Copy) targets.insert(ins.target.name);
  CHECK(targets.size() == 2);
}

TEST_CASE("to_forward_oriented rejects non-L-schema") {
  auto s = parse_schema(
      "schema m { start a0\n a0: x = o() then a1\n a1: if p(x) then a0 else a2\n a2: halt }");
  CHECK_THROWS_AS(to_forward_oriented(*s), SchemaError);
}

TEST_CASE("separate_loop: counted loop yields one controller plus kernel") {
  auto s = parse_schema(kCountedSrc);
  auto f = to_forward_oriented(*s);
  auto sep = separate_loop(*f, "a1");
  CHECK(sep.controllers() == 1);
  CHECK(!sep.kernel_only);
  CHECK(check_separated(sep) != Separation::Not);
  // The controller is the increment.
  REQUIRE(sep.parts.size() == 2);
  bool has_inc = false;
  for (const auto& ins : sep.parts[0]->instrs)
    if (ins.kind == InstrKind::Assign && ins.fn == "inc") has_inc = true;
  CHECK(has_inc);
}

TEST_CASE("separate_loop: list loop yields two controllers") {
  auto s = parse_schema(kListSrc);
  auto f = to_forward_oriented(*s);
  auto sep = separate_loop(*f, "a0");
  CHECK(sep.controllers() == 2);
  CHECK(check_separated(sep) != Separation::Not);
}

TEST_CASE("separate_loop: kernel-only loop reported") {
  auto s = parse_schema(R"(
schema m {
  start a0
  a0: do lbody while le(x, n) then a9
  a9: halt
}
schema lbody {
  start b0
  b0: x = f(x) then b1
  b1: halt
}
)");
  auto sep = separate_loop(*s, "a0");
  CHECK(sep.kernel_only);
  CHECK(sep.controllers() == 0);
}

TEST_CASE("separated loop is t-equal to the original on seeded total interpretations") {
  for (const char* src : {kCountedSrc, kListSrc, kUseThenChangeSrc}) {
    auto s = parse_schema(src);
    auto f = to_forward_oriented(*s);
    Label loop_label = s->find("a1") ? "a1" : "a0";
    auto sep = separate_loop(*f, loop_label);
    int mismatches = 0;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
      auto si = random_standard_interpretation(*s, seed, true);
      if (runs_equal(*s, *sep.root, *si, 20000) == RunsVerdict::Different) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("controller_depth_witness matches controller count minus one") {
  auto counted = parse_schema(kCountedSrc);
  auto sep1 = separate_loop(*to_forward_oriented(*counted), "a1");
  REQUIRE(sep1.controllers() == 1);
  CHECK(controller_depth_witness(sep1, 3) == 0);

  auto list = parse_schema(kListSrc);
  auto sep2 = separate_loop(*to_forward_oriented(*list), "a0");
  REQUIRE(sep2.controllers() == 2);
  CHECK(controller_depth_witness(sep2, 3) == 1);
}

TEST_CASE("re-separation is idempotent") {
  auto list = parse_schema(kListSrc);
  auto sep = separate_loop(*to_forward_oriented(*list), "a0");
  auto sep2 = separate_loop(*sep.root, "a0");
  CHECK(sep2.controllers() == sep.controllers());
  CHECK(controller_depth_witness(sep2, 3) == controller_depth_witness(sep, 3));
}

TEST_CASE("check_separated: kernel writing a controller's index variable") {
  auto ctrl = parse_schema("schema c { start c0\n c0: node = list[p] then c1\n c1: halt }");
  auto bad_kernel = parse_schema(
      "schema k { start k0\n k0: s = add(s, data[node]) then k1\n k1: p = g(p) then k2\n k2: halt }");
  CHECK(check_separated({ctrl.get(), bad_kernel.get()}) == Separation::Not);
}

TEST_CASE("check_separated: separated but not strictly") {
  // The kernel writes w, which the controller reads (not as an index).
  auto ctrl = parse_schema(
      "schema c { start c0\n c0: node = list[p] then c1\n c1: t = h(w) then c2\n c2: halt }");
  auto kernel = parse_schema(
      "schema k { start k0\n k0: s = add(s, data[node]) then k1\n k1: w = h(w) then k2\n k2: halt }");
  CHECK(check_separated({ctrl.get(), kernel.get()}) == Separation::Separated);

  // Without the w coupling the pair is strictly separated.
  auto ctrl2 = parse_schema("schema c { start c0\n c0: node = list[p] then c1\n c1: halt }");
  auto kernel2 = parse_schema(
      "schema k { start k0\n k0: s = add(s, data[node]) then k1\n k1: halt }");
  CHECK(check_separated({ctrl2.get(), kernel2.get()}) == Separation::StrictlySeparated);
}
