#pragma once

#include "psw/interp.hpp"
#include "psw/schema.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace psw {

enum class Outcome { Halted, UndefinedValue, FuelExhausted };

const char* to_string(Outcome o);

struct TraceStep {
  Label label;
  std::vector<long long> iteration;  // loop counters, outermost first
};

struct ExecutionResult {
  Outcome outcome = Outcome::Halted;
  Memory memory;
  std::vector<TraceStep> trace;
  Label stopped_at;
  long long steps = 0;
};

/// Execution hooks; used by instrumented runs (bracket-depth witness).
struct ExecHooks {
  /// Called at the start of each body pass of a loop instruction.
  std::function<void(const Label&, long long, Memory&)> on_loop_iteration;
  /// Called with every computed array index value (reads and writes).
  std::function<void(const Value&)> on_index_value;
  /// Loop labels forced to run an exact number of body passes (the
  /// repetition predicate is not consulted).
  std::map<Label, long long> forced_iterations;
};

struct ExecOptions {
  long long fuel = 100000;
  bool record_trace = false;
  const ExecHooks* hooks = nullptr;
};

/// Runs the schema from its start label under the interpretation.
/// Loop semantics are body-first (do/while). Undefined function or
/// predicate values and empty-cell reads end the run without result;
/// under a term model, empty cells read as their own address terms.
ExecutionResult execute(const Schema& s, const Interpretation& interp,
                        const ExecOptions& opt = {});

enum class RunsVerdict { Equal, Different, Indeterminate };

const char* to_string(RunsVerdict v);

/// Compares two runs under one interpretation. Memory comparison is
/// restricted to cells over variable names the two schemas share, so
/// auxiliary variables introduced by transforms never count.
RunsVerdict runs_equal(const Schema& a, const Schema& b, const Interpretation& interp,
                       long long fuel);

}  // namespace psw
