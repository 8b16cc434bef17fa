#pragma once

#include "psw/value.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace psw::ring {

struct PriorityList {
  std::string name;
  int priority = 1;  // 1 = outermost scan
  std::vector<Value> elems;
};

/// Nested lookups over ranked lists driven by a lexicographically advancing
/// vector-pointer: one loop level per priority, the kernel at the innermost
/// point. Kernel emissions are keyed by the pointer at emission time, so
/// outputs compare order-free.
struct PriorityLoop {
  std::vector<PriorityList> inputs;                   // one list per priority 1..R
  std::vector<std::pair<std::string, int>> outputs;   // name, priority
  // args: current element per level (index = priority-1); emit(name, value).
  std::function<void(const std::vector<Value>&,
                     std::vector<std::pair<std::string, Value>>&)> kernel;
  std::vector<std::string> kernel_reads;   // list names in Arg(B)
  std::vector<std::string> kernel_writes;  // list names in Val(B)

  int max_priority() const;
  const PriorityList* level(int priority) const;
};

/// The greatest r such that every list both read and written by the kernel
/// has priority > r; nullopt when such a list has priority 1. S empty means
/// every level is independent.
std::optional<int> independence_level(const PriorityLoop& pl);

using Keyed = std::vector<std::pair<std::vector<long long>, Value>>;

struct LoopOutputs {
  std::map<std::string, Keyed> lists;  // keyed by vector-pointer, sorted
  bool operator==(const LoopOutputs&) const = default;
};

struct ParallelMode {
  int level = 1;
  int workers = 4;
  uint64_t seed = 0;  // worker scheduling shuffle; result-invariant
};

LoopOutputs run_priority_loop(const PriorityLoop& pl);
/// Partitions the given level's index range across workers; requires the
/// level to be at most independence_level.
LoopOutputs run_priority_loop(const PriorityLoop& pl, const ParallelMode& mode);

struct DiagramCell {
  long long a = 0;
  long long b = 0;
  int fragment = 0;   // rotating case: held fragment number
  bool idle = false;  // rotating case: waiting, holding `fragment`
  std::vector<std::string> with;  // whole lists processed alongside
};

struct ExecutionDiagram {
  std::vector<std::string> row_names;               // modules
  std::vector<std::vector<DiagramCell>> rows;       // [module][time]
  std::string render() const;                       // aligned-column text
};

/// Shared-memory schedule: the priority-2 list is block-distributed over the
/// workers; cell (M_w, t) names the level-1/level-2 pair processed with the
/// remaining lists. The level-2 list size must divide evenly.
ExecutionDiagram diagram_shared(const PriorityLoop& pl, int workers);

/// Fragment-rotation schedule: the priority-3 list is cut into one fragment
/// per worker; fragments rotate one module up each step, and module w idles
/// w-1 steps before its first fragment arrives. Completion takes
/// |A| * workers + workers - 1 steps.
ExecutionDiagram diagram_rotating(const PriorityLoop& pl, int workers);

}  // namespace psw::ring
