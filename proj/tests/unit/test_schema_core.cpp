#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "psw/exec.hpp"
#include "psw/interp.hpp"
#include "psw/iosets.hpp"
#include "psw/parser.hpp"
#include "psw/validate.hpp"

using namespace psw;

#include "fixtures.hpp"

using psw::fixtures::kStencilSrc;
using psw::fixtures::stencil_interp;

TEST_CASE("parse: empty schema") {
  auto s = parse_schema("start m0: halt");
  CHECK(s->instrs.size() == 0);
  CHECK(s->start == "m0");
  CHECK(s->final_labels() == std::set<Label>{"m0"});
}

TEST_CASE("parse: stencil nest has loop depth 3") {
  auto s = parse_schema(kStencilSrc);
  CHECK(s->loop_depth() == 3);
  CHECK(s->instrs.size() == 2);
}

TEST_CASE("parse: nested indexed variable rejected") {
  bool threw = false;
  try {
    parse_schema("schema m { start a0\n a0: x = g(a[b[x]]) then a1\n a1: halt }");
  } catch (const ParseError& e) {
    threw = true;
    CHECK(std::string(e.what()).find("nested indexed variable") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("parse: duplicate input label rejected") {
  CHECK_THROWS_AS(
      parse_schema("schema m { start a0\n a0: x = o() then a1\n a0: y = o() then a1\n a1: halt }"),
      ParseError);
}

TEST_CASE("parse/print round trip") {
  auto s = parse_schema(kStencilSrc);
  std::string p1 = print_schema(*s);
  auto s2 = parse_schema(p1);
  std::string p2 = print_schema(*s2);
  CHECK(p1 == p2);
}

TEST_CASE("validate: straight-line schema is an L-schema") {
  auto s = parse_schema("schema m { start a0\n a0: x = o() then a1\n a1: y = o() then a2\n a2: halt }");
  auto rep = validate_L(*s);
  CHECK(rep.is_l_schema);
}

TEST_CASE("validate: recursive procedure rejected") {
  // A sub-schema that calls itself.
  auto s = parse_schema(R"(
schema m {
  start a0
  a0: do p then a1
  a1: halt
}
schema p {
  start b0
  b0: do p then b1
  b1: halt
}
)");
  auto rep = validate_L(*s);
  CHECK(!rep.is_l_schema);
  CHECK(rep.failed("recursion") != nullptr);
  CHECK(rep.summary().find("recursive procedure") != std::string::npos);
}

TEST_CASE("validate: back-edge label outside any loop body rejected") {
  auto s = parse_schema("schema m { start a0\n a0: x = o() then a1\n a1: if p(x) then a0 else a2\n a2: halt }");
  auto rep = validate_L(*s);
  CHECK(!rep.is_l_schema);
  CHECK(rep.failed("label-order") != nullptr);
}

TEST_CASE("io_sets: assignment case") {
  auto s = parse_schema("schema m { start a0\n a0: x0 = g(x1, a[k(z)]) then a1\n a1: halt }");
  auto io = io_sets(*s, "a0");
  CHECK(io.ind.simple == std::set<std::string>{"z"});
  CHECK(io.arg.simple == std::set<std::string>{"x1", "z"});
  CHECK(io.arg.arrays == std::set<std::string>{"a"});
  CHECK(io.val.simple == std::set<std::string>{"x0"});
  CHECK(io.val.arrays.empty());
}

TEST_CASE("io_sets: conditional has empty Val") {
  auto s = parse_schema("schema m { start a0\n a0: if p(x1) then a1 else a1\n a1: halt }");
  auto io = io_sets(*s, "a0");
  CHECK(io.val.empty());
  CHECK(io.arg.simple == std::set<std::string>{"x1"});
}

TEST_CASE("io_sets: loop case unions over body and includes counter") {
  auto s = parse_schema(R"(
schema m {
  start a0
  a0: do body while le(i, n) then a1
  a1: halt
}
schema body {
  start b0
  b0: a[k(i)] = f(a[k(i)]) then b1
  b1: i = inc(i) then b2
  b2: halt
}
)");
  auto io = io_sets(*s, "a0");
  CHECK(io.ind.contains_simple("i"));
  CHECK(io.val.contains_simple("i"));
  CHECK(io.val.arrays == std::set<std::string>{"a"});
  CHECK(io.ind.simple == std::set<std::string>{"i"});
  auto unknown = [&] { io_sets(*s, "zz"); };
  CHECK_THROWS_AS(unknown(), SchemaError);
}

TEST_CASE("execute: trivial assign and halt") {
  auto s = parse_schema("schema m { start a0\n a0: x = zero() then a1\n a1: halt }");
  ConcreteInterpretation ci;
  auto r = execute(*s, ci);
  CHECK(r.outcome == Outcome::Halted);
  CHECK(r.memory.at(Cell::simple("x")) == Value::integer(0));
}

TEST_CASE("execute: empty-cell read is a failure under a concrete interpretation") {
  auto s = parse_schema("schema m { start a0\n a0: x = id(y) then a1\n a1: halt }");
  ConcreteInterpretation ci;
  auto r = execute(*s, ci);
  CHECK(r.outcome == Outcome::UndefinedValue);
  CHECK(r.stopped_at == "a0");
}

TEST_CASE("execute: stencil at N=2 runs 8 kernel steps in lexicographic order") {
  auto s = parse_schema(kStencilSrc);
  auto rep = validate_L(*s);
  REQUIRE(rep.is_l_schema);
  auto ci = stencil_interp(2);
  ExecOptions opt;
  opt.record_trace = true;
  opt.fuel = 100000;
  auto r = execute(*s, *ci, opt);
  REQUIRE(r.outcome == Outcome::Halted);
  std::vector<std::vector<long long>> kernel_iters;
  for (const auto& st : r.trace)
    if (st.label == "j0") kernel_iters.push_back(st.iteration);
  CHECK(kernel_iters.size() == 8);
  for (size_t i = 1; i < kernel_iters.size(); ++i) CHECK(kernel_iters[i - 1] < kernel_iters[i]);
  // Boundaries are all 0, so the whole field stays 0; exact rationals.
  CHECK(r.memory.at(Cell{"f", {Value::integer(2), Value::integer(2), Value::integer(2)}}) ==
        Value::integer(0));
}

TEST_CASE("execute: fuel-exhausted distinguished and fuel monotone") {
  // Loop whose predicate is always true runs forever.
  auto s = parse_schema(R"(
schema m {
  start a0
  a0: x = one() then a1
  a1: do body while le(x, x) then a2
  a2: halt
}
schema body {
  start b0
  b0: x = inc(x) then b1
  b1: halt
}
)");
  ConcreteInterpretation ci;
  ExecOptions opt;
  opt.fuel = 50;
  auto r = execute(*s, ci, opt);
  CHECK(r.outcome == Outcome::FuelExhausted);

  // A halting run halts identically with any larger fuel.
  auto s2 = parse_schema("schema m { start a0\n a0: x = one() then a1\n a1: halt }");
  ExecOptions o1;
  o1.fuel = 1;
  auto r1 = execute(*s2, ci, o1);
  REQUIRE(r1.outcome == Outcome::Halted);
  ExecOptions o2;
  o2.fuel = 1000;
  auto r2 = execute(*s2, ci, o2);
  CHECK(r1.memory == r2.memory);
}

TEST_CASE("standard interpretation: term values are calculation paths") {
  auto s = parse_schema(R"(
schema m {
  start a0
  a0: x = f(x) then a1
  a1: x = f(x) then a2
  a2: halt
}
)");
  StandardInterpretation si;
  si.start[Cell::simple("x")] = Value::term("q1");
  auto r = execute(*s, si);
  REQUIRE(r.outcome == Outcome::Halted);
  CHECK(r.memory.at(Cell::simple("x")) == Value::term("f(f(q1))"));
}

TEST_CASE("standard interpretation: empty diagram is void on first predicate") {
  auto s = parse_schema("schema m { start a0\n a0: if p(x) then a1 else a1\n a1: halt }");
  StandardInterpretation si;
  si.start[Cell::simple("x")] = Value::term("q1");
  auto r = execute(*s, si);
  CHECK(r.outcome == Outcome::UndefinedValue);

  si.mode = DiagramMode::ClosedWorld;
  auto r2 = execute(*s, si);
  CHECK(r2.outcome == Outcome::Halted);
}

TEST_CASE("random standard interpretation: deterministic and total") {
  auto s = parse_schema(R"(
schema m {
  start a0
  a0: x = f(x) then a1
  a1: if p(x) then a2 else a3
  a2: y = g(x) then a3
  a3: halt
}
)");
  auto i1 = random_standard_interpretation(*s, 42, true);
  auto i2 = random_standard_interpretation(*s, 42, true);
  CHECK(i1->diagram == i2->diagram);
  CHECK(i1->start == i2->start);
  auto r1 = execute(*s, *i1);
  auto r2 = execute(*s, *i2);
  CHECK(r1.outcome == Outcome::Halted);
  CHECK(r1.memory == r2.memory);

  // Totality: execution never returns undefined-value (predicates coined).
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto it = random_standard_interpretation(*s, seed, true);
    auto rr = execute(*s, *it);
    CHECK(rr.outcome == Outcome::Halted);
  }
}

TEST_CASE("runs_equal: schema vs itself, and vs a variant with an extra write") {
  auto s = parse_schema("schema m { start a0\n a0: x = one() then a1\n a1: halt }");
  auto s2 = parse_schema(
      "schema m { start a0\n a0: x = one() then a1\n a1: extra = one() then a2\n a2: halt }");
  ConcreteInterpretation ci;
  CHECK(runs_equal(*s, *s, ci, 1000) == RunsVerdict::Equal);
  // The extra write hits a variable only s2 has, so it is outside the
  // shared footprint; make the difference visible on a shared name.
  auto s3 = parse_schema("schema m { start a0\n a0: x = two() then a1\n a1: halt }");
  CHECK(runs_equal(*s, *s3, ci, 1000) == RunsVerdict::Different);
  CHECK(runs_equal(*s, *s2, ci, 1000) == RunsVerdict::Equal);
}

TEST_CASE("interpretation file loader") {
  auto interp = load_interpretation(R"(
mode closed-world
[start]
x = 3
a[1,2] = 3/4
[functions]
g = add
[predicates]
p = lt
)");
  CHECK(interp->start.at(Cell::simple("x")) == Value::integer(3));
  CHECK(interp->start.at(Cell{"a", {Value::integer(1), Value::integer(2)}}) ==
        Value::rational(3, 4));
  CHECK(*interp->call_function("g", {Value::integer(1), Value::integer(2)}) == Value::integer(3));
  CHECK(interp->call_predicate("p", {Value::integer(1), Value::integer(2)}) == Tri::True);

  auto si = load_interpretation(R"(
[bearer]
q1 q2
[diagram]
p(q1,q1) !p(q1,q2)
)");
  CHECK(si->term_model());
  CHECK(si->call_predicate("p", {Value::term("q1"), Value::term("q1")}) == Tri::True);
  CHECK(si->call_predicate("p", {Value::term("q1"), Value::term("q2")}) == Tri::False);
  CHECK(si->call_predicate("p", {Value::term("q2"), Value::term("q2")}) == Tri::Void);
}

TEST_CASE("value: parse and arithmetic") {
  CHECK(parse_value("-3/4") == Value::rational(-3, 4));
  CHECK(parse_value("12") == Value::integer(12));
  CHECK(parse_value("'q1") == Value::term("q1"));
  CHECK(parse_value("@m3") == Value::label("m3"));
  CHECK((Value::rational(1, 2) + Value::rational(1, 2)) == Value::integer(1));
  CHECK_THROWS_AS(parse_value("x+y"), EvalError);
}
