#pragma once

#include "psw/value.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace psw::setdef {

using Atom = std::string;
using ElemSet = std::set<Atom>;

/// Concrete set name: a type plus evaluated parameter values.
struct SetName {
  std::string type;
  std::vector<Atom> params;

  auto operator<=>(const SetName&) const = default;
  std::string to_string() const;
};

struct NamedFamily {
  std::map<SetName, ElemSet> sets;

  bool operator==(const NamedFamily&) const = default;
  const ElemSet* find(const SetName& n) const;
  std::string to_string() const;
};

/// First-order term over variables, constants and function symbols.
struct Term {
  enum Kind { Var, Const, App } kind = Var;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string n) { return Term{Var, std::move(n), {}}; }
  static Term cnst(std::string n) { return Term{Const, std::move(n), {}}; }
  std::string to_string() const;
};

/// Name term: set type with term parameters (evaluated per binding).
struct NameTerm {
  std::string type;
  std::vector<Term> params;
  std::string to_string() const;
};

/// Secondary predicate: boolean combination of predicate atoms.
struct PredExpr {
  enum Kind { PAtom, Not, And, Or, Implies } kind = PAtom;
  std::string pred;
  std::vector<Term> args;
  std::vector<PredExpr> kids;

  static PredExpr atom(std::string p, std::vector<Term> a) {
    PredExpr e;
    e.pred = std::move(p);
    e.args = std::move(a);
    return e;
  }
};

enum class Quant { All, Exists };

struct Binder {
  Quant q = Quant::All;
  std::string var;
  NameTerm domain;
};

struct QuantClause {
  std::vector<Binder> prefix;
  PredExpr matrix;
};

enum class FormKind { Alpha, Beta, Gamma, Delta };

/// One set-definition form. The selector (closed hierarchy) for the left
/// side's parameter variables is `param_selector`; every form kind carries
/// its own payload.
struct Form {
  FormKind kind = FormKind::Beta;
  NameTerm lhs;
  std::vector<Binder> param_selector;

  std::vector<Atom> alpha_elems;

  std::vector<QuantClause> clauses;  // beta: conjunction of clauses

  NameTerm gamma_base;
  std::string gamma_cand;    // the element joining the set
  std::string gamma_member;  // an element already established
  std::vector<Binder> gamma_prefix;
  PredExpr gamma_pred;

  Term delta_gen;
  std::vector<Binder> delta_selector;
};

struct FormSystem {
  std::vector<Form> forms;

  const Form* defining(const std::string& type) const;
};

enum class EvalMode { Strict, ClosedWorld };

/// Start data, secondary data and the base interpretation: a signed
/// diagram over atom strings plus interpreted functions; numeric
/// comparison predicates are interpreted when the arguments are numerals.
struct Universe {
  std::set<Atom> omega;
  std::set<Atom> omega_lambda;
  std::map<std::string, Atom> consts;
  std::map<std::string, bool> diagram;
  EvalMode mode = EvalMode::ClosedWorld;
  std::map<std::string, std::function<std::optional<Atom>(const std::vector<Atom>&)>> fns;

  std::vector<Atom> all_atoms() const;
  bool has_atom(const Atom& a) const { return omega.count(a) || omega_lambda.count(a); }
  Tri pred(const std::string& name, const std::vector<Atom>& args) const;
  std::optional<Atom> fn(const std::string& name, const std::vector<Atom>& args) const;

  static std::string atom_string(const std::string& pred, const std::vector<Atom>& args);
};

using Binding = std::map<std::string, Atom>;

struct UnresolvedName : EvalError {
  using EvalError::EvalError;
};

std::optional<Atom> eval_term(const Term& t, const Binding& b, const Universe& u);
SetName eval_name(const NameTerm& nt, const Binding& b, const Universe& u);

/// Def-4.4.2 style evaluation: quantifiers expand over the named sets
/// (absent names read as empty), universal over empty is true, existential
/// false. In strict mode any void atom poisons the result to void; in
/// closed-world mode void atoms read as false.
Tri eval_formula(const QuantClause& clause, const NamedFamily& family, const Universe& u,
                 const Binding& outer = {});
Tri eval_clauses(const std::vector<QuantClause>& clauses, const NamedFamily& family,
                 const Universe& u, const Binding& outer = {});

/// All acceptable bindings of a binder chain (outer binders first; later
/// domains may mention earlier variables).
std::vector<Binding> selector_bindings(const std::vector<Binder>& sel, const NamedFamily& family,
                                       const Universe& u, const Binding& outer = {});

struct FormReport {
  std::string lhs;
  bool ok = true;
  std::string detail;
};

struct AgreedReport {
  bool agreed = true;
  std::vector<FormReport> forms;
  std::string to_string() const;
};

/// Evaluates the four kind-specific agreement clauses, including
/// gamma-minimality (least fixpoint equality) and delta-image equality.
AgreedReport check_agreed(const NamedFamily& family, const FormSystem& sys, const Universe& u);

/// Computes the least fixpoint of a gamma form instance.
ElemSet gamma_fixpoint(const Form& f, const NamedFamily& family, const Universe& u,
                       const Binding& params);

/// Computes the image set of a delta form instance.
ElemSet delta_image(const Form& f, const NamedFamily& family, const Universe& u,
                    const Binding& params);

/// True iff the family is agreed and no single-element extension of any one
/// set (over the universe atoms) remains agreed. The witness extension is
/// reported when one exists.
struct SelectedReport {
  bool selected = false;
  std::string witness;  // first extension that stays agreed, if any
};
SelectedReport check_selected(const NamedFamily& family, const FormSystem& sys, const Universe& u);

/// Exhaustive oracle: enumerates families over the system's concrete names
/// and keeps the selected ones. Alpha contents are fixed, everything else
/// ranges over subsets of the universe atoms. Throws EvalError when the
/// enumeration exceeds `cap_bits` indicator bits.
std::vector<NamedFamily> brute_force_variants(const FormSystem& sys, const Universe& u,
                                              int cap_bits = 20);

// ---------------------------------------------------------------------------
// Selection algorithms for single-form systems.

/// Shape of a single 2-quantifier self-referential form.
enum class Kind120 { ForallForall = 1, ForallExists = 2, ExistsForall = 3, ExistsExists = 4 };

struct SolveOut {
  NamedFamily family;
  std::string algorithm;
};

/// Polynomial selection for class (1,2,0): kind 1 greedy seed-and-grow,
/// kind 2 iterated removal of supporterless elements (the unique maximum
/// variant), kind 3 anchored growth, kind 4 whole-universe-or-empty.
/// Throws EvalError when the form is not in the class.
SolveOut solve_120(const FormSystem& sys, const Universe& u);

/// Strategy pipeline for class (1,3,.): unique-witness growth, stricter
/// all-z reduction, separable split, factorized universe, approximation
/// shrink, then brute force under the cap. The report names what applied.
struct Solve130Out {
  std::optional<NamedFamily> family;
  std::string strategy;  // "unique-witness", "all-z", "separable-and", ...
  bool applicable = false;
};
struct Solve130Hints {
  std::vector<std::vector<Atom>> factor_classes;  // optional factorization
  int fallback_cap_bits = 20;
};
Solve130Out solve_130(const FormSystem& sys, const Universe& u, const Solve130Hints& hints = {});

}  // namespace psw::setdef
