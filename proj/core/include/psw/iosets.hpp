#pragma once

#include "psw/schema.hpp"

#include <set>
#include <string>

namespace psw {

/// Variable set used by the Ind/Arg/Val computations. Simple variables
/// compare by name; indexed variables compare by array name (conservative:
/// any two accesses of one array are treated as overlapping).
struct VarSet {
  std::set<std::string> simple;
  std::set<std::string> arrays;

  void add(const Variable& v) {
    if (v.simple())
      simple.insert(v.name);
    else
      arrays.insert(v.name);
  }
  void add_simple(const std::string& n) { simple.insert(n); }
  void merge(const VarSet& o) {
    simple.insert(o.simple.begin(), o.simple.end());
    arrays.insert(o.arrays.begin(), o.arrays.end());
  }
  bool contains_simple(const std::string& n) const { return simple.count(n) > 0; }
  bool empty() const { return simple.empty() && arrays.empty(); }

  bool intersects(const VarSet& o) const {
    for (const auto& n : simple)
      if (o.simple.count(n)) return true;
    for (const auto& n : arrays)
      if (o.arrays.count(n)) return true;
    return false;
  }
  VarSet intersect(const VarSet& o) const {
    VarSet out;
    for (const auto& n : simple)
      if (o.simple.count(n)) out.simple.insert(n);
    for (const auto& n : arrays)
      if (o.arrays.count(n)) out.arrays.insert(n);
    return out;
  }
  std::string to_string() const;
};

struct IoSets {
  VarSet ind;  // index variables
  VarSet arg;  // argument variables (includes ind)
  VarSet val;  // output variables
};

/// The three sets for the instruction with the given input label, with the
/// loop/call cases unioning over all labels of the referenced sub-schema.
/// Throws SchemaError for an unknown label.
IoSets io_sets(const Schema& s, const Label& label);

/// The aggregate sets for a whole schema (union over its labels).
IoSets io_sets(const Schema& s);

/// Sets for a single instruction (loop/call recurse into the body).
IoSets io_sets_instr(const Schema& owner, const Instruction& ins);

}  // namespace psw
