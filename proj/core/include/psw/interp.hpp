#pragma once

#include "psw/value.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace psw {

/// Memory cell: a simple name, or an array name with concrete index values.
struct Cell {
  std::string base;
  std::vector<Value> indexes;

  bool operator==(const Cell& o) const { return base == o.base && indexes == o.indexes; }
  bool operator<(const Cell& o) const {
    if (base != o.base) return base < o.base;
    if (indexes.size() != o.indexes.size()) return indexes.size() < o.indexes.size();
    for (size_t i = 0; i < indexes.size(); ++i) {
      if (indexes[i] < o.indexes[i]) return true;
      if (o.indexes[i] < indexes[i]) return false;
    }
    return false;
  }
  std::string to_string() const;

  static Cell simple(std::string n) { return Cell{std::move(n), {}}; }
};

/// Each cell holds at most one value; absent entries are empty.
using Memory = std::map<Cell, Value>;

std::string memory_to_string(const Memory& m);

class Interpretation {
 public:
  virtual ~Interpretation() = default;

  /// nullopt = the function is undefined on these arguments.
  virtual std::optional<Value> call_function(const std::string& sym,
                                             const std::vector<Value>& args) const = 0;
  virtual Tri call_predicate(const std::string& sym, const std::vector<Value>& args) const = 0;

  /// True for term-model interpretations (empty-cell reads yield address terms).
  virtual bool term_model() const { return false; }

  Memory start;
};

using FnImpl = std::function<std::optional<Value>(const std::vector<Value>&)>;
using PredImpl = std::function<Tri(const std::vector<Value>&)>;

/// Interpretation over concrete values: named builtins plus explicit tables.
/// Unknown symbols are undefined (execution ends without result).
class ConcreteInterpretation : public Interpretation {
 public:
  ConcreteInterpretation();

  void bind_function(const std::string& sym, FnImpl fn) { fns_[sym] = std::move(fn); }
  void bind_predicate(const std::string& sym, PredImpl p) { preds_[sym] = std::move(p); }

  /// Binds `sym` to a library builtin (add, inc, dec, one, le, lt, ...).
  /// Throws EvalError for an unknown builtin name.
  void bind_builtin_function(const std::string& sym, const std::string& builtin);
  void bind_builtin_predicate(const std::string& sym, const std::string& builtin);

  void table_function(const std::string& sym, std::map<std::vector<Value>, Value> rows);
  void table_predicate(const std::string& sym, std::map<std::vector<Value>, bool> rows);

  std::optional<Value> call_function(const std::string& sym,
                                     const std::vector<Value>& args) const override;
  Tri call_predicate(const std::string& sym, const std::vector<Value>& args) const override;

  static const std::map<std::string, FnImpl>& builtin_functions();
  static const std::map<std::string, PredImpl>& builtin_predicates();

 private:
  std::map<std::string, FnImpl> fns_;
  std::map<std::string, PredImpl> preds_;
};

enum class DiagramMode { Strict, ClosedWorld };

/// Term-model interpretation: a function value is the string of its own
/// application; predicates are answered by a finite signed diagram. In
/// totality mode unanswered queries are resolved by a seeded coin keyed on
/// the query string (deterministic, consistent across runs).
class StandardInterpretation : public Interpretation {
 public:
  std::vector<std::string> bearer;               // atoms q1, q2, ...
  std::map<std::string, bool> diagram;           // atom string -> sign
  DiagramMode mode = DiagramMode::Strict;
  bool totality = false;
  uint64_t seed = 0;

  void add_atom(const std::string& atom, bool positive);

  std::optional<Value> call_function(const std::string& sym,
                                     const std::vector<Value>& args) const override;
  Tri call_predicate(const std::string& sym, const std::vector<Value>& args) const override;
  bool term_model() const override { return true; }

  static std::string make_atom(const std::string& sym, const std::vector<Value>& args);
};

class Schema;

/// Deterministic per seed. Assigns every simple variable of the schema a
/// bearer atom as start value. With totality set, every predicate query is
/// answered (seeded coin); otherwise the diagram covers only bearer-atom
/// tuples and deeper queries are void.
std::shared_ptr<StandardInterpretation> random_standard_interpretation(const Schema& s,
                                                                       uint64_t seed,
                                                                       bool totality);

/// Loads an interpretation file (sections: start, functions, predicates,
/// bearer, diagram, mode). Returns a StandardInterpretation when a bearer or
/// diagram section is present, otherwise a ConcreteInterpretation.
std::shared_ptr<Interpretation> load_interpretation(const std::string& text);

/// Splitmix-based deterministic hash utilities (stable across platforms).
uint64_t mix64(uint64_t x);
uint64_t hash_string(uint64_t seed, const std::string& s);

}  // namespace psw
