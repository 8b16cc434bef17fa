#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace psw {

using Label = std::string;

/// One index position of an indexed variable: either a bare simple variable
/// (used as the index value directly) or an index-function symbol applied to
/// simple variables.
struct IndexExpr {
  std::string fn;                    // empty = bare variable
  std::vector<std::string> args;     // simple variable names

  std::vector<std::string> vars() const { return args; }
  bool operator==(const IndexExpr&) const = default;
  bool operator<(const IndexExpr& o) const {
    if (fn != o.fn) return fn < o.fn;
    return args < o.args;
  }
  std::string to_string() const;

  static IndexExpr bare(std::string v) { return IndexExpr{"", {std::move(v)}}; }
};

/// Program variable: simple name, or array name with index expressions.
/// Index expressions contain only simple variables.
struct Variable {
  std::string name;
  std::vector<IndexExpr> indexes;  // empty = simple variable

  bool simple() const { return indexes.empty(); }
  bool operator==(const Variable&) const = default;
  bool operator<(const Variable& o) const {
    if (name != o.name) return name < o.name;
    return indexes < o.indexes;
  }
  std::string to_string() const;

  static Variable simple_var(std::string n) { return Variable{std::move(n), {}}; }
};

enum class InstrKind {
  Assign,      // x0 = g(x1,...,xn)
  Copy,        // x0 = x1
  LitAssign,   // x0 := 'label'        (interpreted; used by loop separation)
  Cond,        // if p(x1,...,xn) then l2 else l3
  CondLabelEq, // ifleb v == 'label' then l2 else l3   (interpreted)
  Loop,        // do P while p(...) then l2
  Call,        // do P then l2
};

struct Instruction {
  Label in;
  InstrKind kind = InstrKind::Assign;

  // Assign / Copy / LitAssign
  Variable target;
  std::string fn;               // Assign: function symbol
  std::vector<Variable> args;   // Assign: arguments; Copy: single source
  std::string lit_label;        // LitAssign / CondLabelEq literal

  // Cond / CondLabelEq / Loop
  std::string pred;             // predicate symbol
  std::vector<Variable> pargs;  // predicate arguments; CondLabelEq: single var
  Label then_label;             // Cond/CondLabelEq
  Label else_label;             // Cond/CondLabelEq

  // Loop / Call
  std::string sub;              // sub-schema name

  Label next;                   // Assign/Copy/LitAssign/Loop/Call successor

  std::vector<Label> out_labels() const;
};

/// Program schema: instruction set, symbol alphabets, named sub-schemas.
struct Schema {
  std::string name = "main";
  Label start;
  std::optional<Label> declared_final;
  std::vector<Instruction> instrs;                       // declaration order
  std::map<std::string, std::shared_ptr<Schema>> subs;   // sub-schemas by name

  // Alphabets collected while parsing or building.
  std::set<std::string> var_x;   // simple variable names
  std::set<std::string> var_a;   // array names
  std::set<std::string> fns;     // function + index-function symbols
  std::set<std::string> preds;   // predicate symbols

  const Instruction* find(const Label& l) const;
  Instruction* find(const Label& l);

  /// Output labels that are not input labels, at this level.
  std::set<Label> final_labels() const;

  /// All labels at this level (inputs and outputs).
  std::set<Label> labels() const;

  /// Collects this schema plus all (transitive) sub-schemas.
  std::vector<const Schema*> all_schemas() const;

  /// Deep copy (sub-schemas cloned).
  std::shared_ptr<Schema> clone() const;

  /// Maximum loop nesting depth across this schema and its sub-schemas.
  int loop_depth() const;

  void note_variable(const Variable& v);
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace psw
