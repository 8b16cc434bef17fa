#include "psw/interp.hpp"

#include "psw/schema.hpp"

#include <sstream>

namespace psw {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t hash_string(uint64_t seed, const std::string& s) {
  uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return mix64(h);
}

std::string Cell::to_string() const {
  if (indexes.empty()) return base;
  std::ostringstream os;
  os << base << "[";
  for (size_t i = 0; i < indexes.size(); ++i) {
    if (i) os << ",";
    os << indexes[i].to_string();
  }
  os << "]";
  return os.str();
}

std::string memory_to_string(const Memory& m) {
  std::ostringstream os;
  for (const auto& [cell, value] : m) os << cell.to_string() << " = " << value.to_string() << "\n";
  return os.str();
}

namespace {

std::optional<Value> need_numeric(const std::vector<Value>& args) {
  for (const auto& a : args)
    if (!a.is_numeric()) return std::nullopt;
  return Value::integer(0);
}

Tri tri_of(bool b) { return b ? Tri::True : Tri::False; }

std::map<std::string, FnImpl> make_builtin_functions() {
  std::map<std::string, FnImpl> m;
  m["id"] = [](const std::vector<Value>& a) -> std::optional<Value> {
    if (a.size() != 1) return std::nullopt;
    return a[0];
  };
  m["zero"] = [](const std::vector<Value>&) -> std::optional<Value> { return Value::integer(0); };
  m["one"] = [](const std::vector<Value>&) -> std::optional<Value> { return Value::integer(1); };
  m["two"] = [](const std::vector<Value>&) -> std::optional<Value> { return Value::integer(2); };
  m["inc"] = [](const std::vector<Value>& a) -> std::optional<Value> {
    if (a.size() != 1 || !need_numeric(a)) return std::nullopt;
    return a[0] + Value::integer(1);
  };
  m["dec"] = [](const std::vector<Value>& a) -> std::optional<Value> {
    if (a.size() != 1 || !need_numeric(a)) return std::nullopt;
    return a[0] - Value::integer(1);
  };
  m["add"] = [](const std::vector<Value>& a) -> std::optional<Value> {
    if (a.size() != 2 || !need_numeric(a)) return std::nullopt;
    return a[0] + a[1];
  };
  m["sub"] = [](const std::vector<Value>& a) -> std::optional<Value> {
    if (a.size() != 2 || !need_numeric(a)) return std::nullopt;
    return a[0] - a[1];
  };
  m["mul"] = [](const std::vector<Value>& a) -> std::optional<Value> {
    if (a.size() != 2 || !need_numeric(a)) return std::nullopt;
    return a[0] * a[1];
  };
  m["rdiv"] = [](const std::vector<Value>& a) -> std::optional<Value> {
    if (a.size() != 2 || !need_numeric(a)) return std::nullopt;
    BigRat d = a[1].as_rat();
    if (d == 0) return std::nullopt;
    return Value::rational(BigRat(a[0].as_rat() / d));
  };
  m["avg4"] = [](const std::vector<Value>& a) -> std::optional<Value> {
    if (a.size() != 4 || !need_numeric(a)) return std::nullopt;
    BigRat s = a[0].as_rat() + a[1].as_rat() + a[2].as_rat() + a[3].as_rat();
    return Value::rational(BigRat(s / 4));
  };
  return m;
}

std::map<std::string, PredImpl> make_builtin_predicates() {
  std::map<std::string, PredImpl> m;
  auto cmp2 = [](const std::vector<Value>& a) -> std::optional<int> {
    if (a.size() != 2 || !a[0].is_numeric() || !a[1].is_numeric()) return std::nullopt;
    BigRat x = a[0].as_rat(), y = a[1].as_rat();
    if (x < y) return -1;
    if (x == y) return 0;
    return 1;
  };
  m["lt"] = [cmp2](const std::vector<Value>& a) {
    auto c = cmp2(a);
    return c ? tri_of(*c < 0) : Tri::Void;
  };
  m["le"] = [cmp2](const std::vector<Value>& a) {
    auto c = cmp2(a);
    return c ? tri_of(*c <= 0) : Tri::Void;
  };
  m["gt"] = [cmp2](const std::vector<Value>& a) {
    auto c = cmp2(a);
    return c ? tri_of(*c > 0) : Tri::Void;
  };
  m["ge"] = [cmp2](const std::vector<Value>& a) {
    auto c = cmp2(a);
    return c ? tri_of(*c >= 0) : Tri::Void;
  };
  m["eq"] = [](const std::vector<Value>& a) {
    if (a.size() != 2) return Tri::Void;
    return tri_of(a[0] == a[1]);
  };
  m["ne"] = [](const std::vector<Value>& a) {
    if (a.size() != 2) return Tri::Void;
    return tri_of(!(a[0] == a[1]));
  };
  m["is_zero"] = [](const std::vector<Value>& a) {
    if (a.size() != 1 || !a[0].is_numeric()) return Tri::Void;
    return tri_of(a[0].as_rat() == 0);
  };
  return m;
}

}  // namespace

const std::map<std::string, FnImpl>& ConcreteInterpretation::builtin_functions() {
  static const auto m = make_builtin_functions();
  return m;
}

const std::map<std::string, PredImpl>& ConcreteInterpretation::builtin_predicates() {
  static const auto m = make_builtin_predicates();
  return m;
}

ConcreteInterpretation::ConcreteInterpretation() = default;

void ConcreteInterpretation::bind_builtin_function(const std::string& sym,
                                                   const std::string& builtin) {
  auto it = builtin_functions().find(builtin);
  if (it == builtin_functions().end()) throw EvalError("unknown builtin function " + builtin);
  fns_[sym] = it->second;
}

void ConcreteInterpretation::bind_builtin_predicate(const std::string& sym,
                                                    const std::string& builtin) {
  auto it = builtin_predicates().find(builtin);
  if (it == builtin_predicates().end()) throw EvalError("unknown builtin predicate " + builtin);
  preds_[sym] = it->second;
}

void ConcreteInterpretation::table_function(const std::string& sym,
                                            std::map<std::vector<Value>, Value> rows) {
  fns_[sym] = [rows = std::move(rows)](const std::vector<Value>& args) -> std::optional<Value> {
    auto it = rows.find(args);
    if (it == rows.end()) return std::nullopt;
    return it->second;
  };
}

void ConcreteInterpretation::table_predicate(const std::string& sym,
                                             std::map<std::vector<Value>, bool> rows) {
  preds_[sym] = [rows = std::move(rows)](const std::vector<Value>& args) -> Tri {
    auto it = rows.find(args);
    if (it == rows.end()) return Tri::Void;
    return it->second ? Tri::True : Tri::False;
  };
}

std::optional<Value> ConcreteInterpretation::call_function(const std::string& sym,
                                                           const std::vector<Value>& args) const {
  auto it = fns_.find(sym);
  if (it == fns_.end()) {
    auto bit = builtin_functions().find(sym);
    if (bit == builtin_functions().end()) return std::nullopt;
    return bit->second(args);
  }
  return it->second(args);
}

Tri ConcreteInterpretation::call_predicate(const std::string& sym,
                                           const std::vector<Value>& args) const {
  auto it = preds_.find(sym);
  if (it == preds_.end()) {
    auto bit = builtin_predicates().find(sym);
    if (bit == builtin_predicates().end()) return Tri::Void;
    return bit->second(args);
  }
  return it->second(args);
}

void StandardInterpretation::add_atom(const std::string& atom, bool positive) {
  auto [it, fresh] = diagram.emplace(atom, positive);
  if (!fresh && it->second != positive)
    throw EvalError("diagram holds both signs of " + atom);
}

std::string StandardInterpretation::make_atom(const std::string& sym,
                                              const std::vector<Value>& args) {
  std::ostringstream os;
  os << sym << "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) os << ",";
    os << args[i].to_string();
  }
  os << ")";
  return os.str();
}

std::optional<Value> StandardInterpretation::call_function(const std::string& sym,
                                                           const std::vector<Value>& args) const {
  return Value::term(make_atom(sym, args));
}

Tri StandardInterpretation::call_predicate(const std::string& sym,
                                           const std::vector<Value>& args) const {
  std::string atom = make_atom(sym, args);
  auto it = diagram.find(atom);
  if (it != diagram.end()) return it->second ? Tri::True : Tri::False;
  if (totality) return (hash_string(seed, atom) & 1) ? Tri::True : Tri::False;
  return mode == DiagramMode::ClosedWorld ? Tri::False : Tri::Void;
}

std::shared_ptr<StandardInterpretation> random_standard_interpretation(const Schema& s,
                                                                       uint64_t seed,
                                                                       bool totality) {
  auto si = std::make_shared<StandardInterpretation>();
  si->seed = seed;
  si->totality = totality;
  size_t n_atoms = std::max<size_t>(3, std::min<size_t>(s.var_x.size(), 6));
  for (size_t i = 1; i <= n_atoms; ++i) si->bearer.push_back("q" + std::to_string(i));

  size_t k = 0;
  for (const auto& x : s.var_x) {
    uint64_t h = hash_string(seed, "start:" + x);
    si->start[Cell::simple(x)] = Value::term(si->bearer[h % si->bearer.size()]);
    ++k;
  }

  if (!totality) {
    // A finite diagram over bearer-atom tuples; deeper queries stay void.
    for (const auto& p : s.preds) {
      for (size_t ar = 1; ar <= 2; ++ar) {
        std::vector<size_t> idx(ar, 0);
        while (true) {
          std::vector<Value> args;
          for (size_t i = 0; i < ar; ++i) args.push_back(Value::term(si->bearer[idx[i]]));
          std::string atom = StandardInterpretation::make_atom(p, args);
          si->add_atom(atom, (hash_string(seed, atom) & 1) != 0);
          size_t d = 0;
          while (d < ar && ++idx[d] == si->bearer.size()) idx[d++] = 0;
          if (d == ar) break;
        }
      }
    }
  }
  return si;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

// "f(a,b)" -> cell or value-args split for table rows.
std::vector<Value> parse_value_list(const std::string& text) {
  std::vector<Value> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == ',' && depth == 0) {
      out.push_back(parse_value(cur));
      cur.clear();
      continue;
    }
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    cur += c;
  }
  if (!cur.empty()) out.push_back(parse_value(cur));
  return out;
}

Cell parse_cell(const std::string& text) {
  auto lb = text.find('[');
  if (lb == std::string::npos) return Cell::simple(text);
  if (text.back() != ']') throw EvalError("bad cell: " + text);
  Cell c;
  c.base = text.substr(0, lb);
  c.indexes = parse_value_list(text.substr(lb + 1, text.size() - lb - 2));
  return c;
}

}  // namespace

std::shared_ptr<Interpretation> load_interpretation(const std::string& text) {
  Memory start;
  DiagramMode mode = DiagramMode::Strict;
  bool totality = false;
  uint64_t seed = 0;
  std::vector<std::string> bearer;
  std::map<std::string, bool> diagram;
  bool standard = false;

  struct TableFn {
    std::map<std::vector<Value>, Value> rows;
  };
  std::map<std::string, std::string> fn_builtins, pred_builtins;
  std::map<std::string, TableFn> fn_tables;
  std::map<std::string, std::map<std::vector<Value>, bool>> pred_tables;

  std::string section;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    auto cut = raw.find("//");
    if (cut != std::string::npos) raw = raw.substr(0, cut);
    std::string line = raw;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (section == "bearer" || section == "diagram") standard = true;
      continue;
    }
    auto words = split_ws(line);
    if (section.empty()) {
      if (words.size() == 2 && words[0] == "mode") {
        if (words[1] == "closed-world")
          mode = DiagramMode::ClosedWorld;
        else if (words[1] == "strict")
          mode = DiagramMode::Strict;
        else
          throw EvalError("unknown mode " + words[1]);
      } else if (words.size() == 2 && words[0] == "seed") {
        seed = std::stoull(words[1]);
      } else if (words.size() == 1 && words[0] == "totality") {
        totality = true;
        standard = true;
      } else {
        throw EvalError("unexpected line outside sections: " + line);
      }
      continue;
    }
    if (section == "start") {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw EvalError("bad start line: " + line);
      std::string lhs = line.substr(0, eq);
      std::string rhs = line.substr(eq + 1);
      auto trim = [](std::string s) {
        auto b2 = s.find_first_not_of(" \t");
        auto e2 = s.find_last_not_of(" \t");
        return b2 == std::string::npos ? std::string() : s.substr(b2, e2 - b2 + 1);
      };
      start[parse_cell(trim(lhs))] = parse_value(trim(rhs));
    } else if (section == "functions" || section == "predicates") {
      bool is_fn = section == "functions";
      if (words.size() >= 3 && words[1] == "=") {
        (is_fn ? fn_builtins : pred_builtins)[words[0]] = words[2];
      } else if (words.size() >= 4 && words[1] == "->") {
        // "sym a,b -> v" table row form: sym args -> result
        throw EvalError("table row before table header: " + line);
      } else if (words.size() >= 2 && words[0] == "row") {
        // row sym arg,arg -> value|true|false
        if (words.size() < 4 || words[3] != "->")
          if (words.size() < 4) throw EvalError("bad table row: " + line);
        std::string sym = words[1];
        std::vector<Value> args = parse_value_list(words[2]);
        std::string rhs = words.back();
        if (is_fn)
          fn_tables[sym].rows[args] = parse_value(rhs);
        else
          pred_tables[sym][args] = (rhs == "true");
      } else {
        throw EvalError("bad " + section + " line: " + line);
      }
    } else if (section == "bearer") {
      for (const auto& w : words) bearer.push_back(w);
    } else if (section == "diagram") {
      for (const auto& w : words) {
        bool pos = w.front() != '!';
        std::string atom = pos ? w : w.substr(1);
        auto [it, fresh] = diagram.emplace(atom, pos);
        if (!fresh && it->second != pos) throw EvalError("diagram holds both signs of " + atom);
      }
    } else {
      throw EvalError("unknown section [" + section + "]");
    }
  }

  if (standard) {
    auto si = std::make_shared<StandardInterpretation>();
    si->start = std::move(start);
    si->bearer = std::move(bearer);
    si->diagram = std::move(diagram);
    si->mode = mode;
    si->totality = totality;
    si->seed = seed;
    return si;
  }
  auto ci = std::make_shared<ConcreteInterpretation>();
  ci->start = std::move(start);
  for (const auto& [sym, b] : fn_builtins) ci->bind_builtin_function(sym, b);
  for (const auto& [sym, b] : pred_builtins) ci->bind_builtin_predicate(sym, b);
  for (auto& [sym, t] : fn_tables) ci->table_function(sym, std::move(t.rows));
  for (auto& [sym, t] : pred_tables) ci->table_predicate(sym, std::move(t));
  return ci;
}

}  // namespace psw
