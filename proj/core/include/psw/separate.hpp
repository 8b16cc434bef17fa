#pragma once

#include "psw/exec.hpp"
#include "psw/iosets.hpp"
#include "psw/schema.hpp"

#include <memory>
#include <string>
#include <vector>

namespace psw {

/// A loop rewritten into controller/kernel form. The loop instruction's body
/// is a chain of do-calls P_1 ... P_k; the last part is the kernel. Parts
/// past the first start with a dispatch chain keyed on the dispatch variable,
/// and non-kernel parts capture their exit label into it.
struct SeparatedLoop {
  std::shared_ptr<Schema> root;            // rewritten schema
  Label loop_label;                        // the separated loop instruction
  std::vector<std::shared_ptr<Schema>> parts;  // P_1 .. P_k (P_k = kernel)
  std::string dispatch_var;
  bool kernel_only = false;                // empty Ind: loop kept as pure kernel
  std::vector<IoSets> part_io;             // per-part certificates

  int controllers() const { return static_cast<int>(parts.size()) - 1; }
};

enum class Separation { Not, Separated, StrictlySeparated };

const char* to_string(Separation s);

/// Rewrites every loop body so no branch changes an index variable at a
/// label greater than a use of that index: offending uses read a fresh copy
/// taken just before them. Throws SchemaError if the input fails validate_L.
std::shared_ptr<Schema> to_forward_oriented(const Schema& s);

/// Runs the branch-walking separation on the loop with the given input
/// label (searched at any level). Requires a forward-oriented loop; a loop
/// whose index set is empty comes back as a single kernel part, flagged.
SeparatedLoop separate_loop(const Schema& root, const Label& loop_label);

/// Classifies a part list by the two set conditions: every part's index
/// variables are untouched by later (and its own) parts and fed by the part
/// just before it; strictness further forbids the kernel from writing
/// anything a controller reads.
Separation check_separated(const std::vector<const Schema*>& parts);
Separation check_separated(const SeparatedLoop& sep);

/// Runs the separated loop for the given number of body passes under a
/// total standard interpretation and reports the maximum bracket nesting
/// depth over every index value used. Simple variables are re-atomized at
/// each pass of the separated loop, so the depth measures how many
/// selection stages a value crossed within one pass.
int controller_depth_witness(const SeparatedLoop& sep, long long iterations, uint64_t seed = 1);

}  // namespace psw
