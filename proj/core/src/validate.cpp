#include "psw/validate.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace psw {

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (is_l_schema ? "L-schema: yes" : "L-schema: no");
  for (const auto& c : checks)
    if (!c.ok) os << "; " << c.name << ": " << c.detail;
  return os.str();
}

namespace {

void check_level(const Schema& s, ValidationReport& rep) {
  // Referenced labels exist (as instruction inputs or as the final label).
  std::set<Label> ins_labels;
  for (const auto& i : s.instrs) ins_labels.insert(i.in);

  auto fin = s.final_labels();
  if (s.declared_final && !s.instrs.empty() && !fin.count(*s.declared_final)) {
    rep.checks.push_back({"final-label", false,
                          "declared final " + *s.declared_final + " is not a final label of " +
                              s.name});
    rep.is_l_schema = false;
  }
  if (fin.size() != 1) {
    std::ostringstream os;
    os << s.name << " has " << fin.size() << " final labels:";
    for (const auto& l : fin) os << " " << l;
    rep.checks.push_back({"final-label", false, os.str()});
    rep.is_l_schema = false;
  }
  if (!s.instrs.empty() && !ins_labels.count(s.start)) {
    rep.checks.push_back({"start-label", false, "start " + s.start + " labels no instruction"});
    rep.is_l_schema = false;
  }

  // "input label is less than output labels" must be a partial order:
  // the edge relation input -> outputs at this level must be acyclic.
  std::map<Label, int> state;  // 0 unseen, 1 on stack, 2 done
  bool cyclic = false;
  Label witness;
  std::function<void(const Label&)> dfs = [&](const Label& l) {
    if (cyclic) return;
    auto& st = state[l];
    if (st == 1) {
      cyclic = true;
      witness = l;
      return;
    }
    if (st == 2) return;
    st = 1;
    const Instruction* i = s.find(l);
    if (i)
      for (const auto& o : i->out_labels()) dfs(o);
    state[l] = 2;
  };
  for (const auto& i : s.instrs) dfs(i.in);
  if (cyclic) {
    rep.checks.push_back({"label-order", false,
                          "label order violated in " + s.name + " (cycle through " + witness + ")"});
    rep.is_l_schema = false;
  }
}

}  // namespace

ValidationReport validate_L(const Schema& root) {
  ValidationReport rep;

  // Recursion test on the sub-schema reference graph.
  std::map<const Schema*, int> state;
  bool recursive = false;
  std::string rec_name;
  std::function<void(const Schema&)> dfs = [&](const Schema& s) {
    if (recursive) return;
    auto& st = state[&s];
    if (st == 1) {
      recursive = true;
      rec_name = s.name;
      return;
    }
    if (st == 2) return;
    st = 1;
    for (const auto& [_, sub] : s.subs) dfs(*sub);
    state[&s] = 2;
  };
  dfs(root);
  if (recursive) {
    rep.checks.push_back({"recursion", false, "recursive procedure " + rec_name});
    rep.is_l_schema = false;
  }

  // Per-level checks (guard against revisiting in the cyclic case).
  std::set<const Schema*> seen;
  std::function<void(const Schema&)> walk = [&](const Schema& s) {
    if (!seen.insert(&s).second) return;
    check_level(s, rep);
    for (const auto& [_, sub] : s.subs) walk(*sub);
  };
  walk(root);

  // Label sets of distinct levels must be pairwise disjoint. A schema
  // attached under two parents would share its whole label set, so count
  // attachments directly as well.
  std::map<Label, std::string> owner;
  for (const Schema* s : seen) {
    for (const auto& l : s->labels()) {
      auto [it, fresh] = owner.emplace(l, s->name);
      if (!fresh && it->second != s->name) {
        rep.checks.push_back(
            {"label-disjoint", false,
             "label " + l + " appears in both " + it->second + " and " + s->name});
        rep.is_l_schema = false;
      }
    }
  }
  std::map<const Schema*, int> attached;
  for (const Schema* s : seen)
    for (const auto& [_, sub] : s->subs) ++attached[sub.get()];
  for (const auto& [sub, n] : attached)
    if (n > 1 && !recursive) {
      rep.checks.push_back({"label-disjoint", false,
                            "sub-schema " + sub->name + " is attached " + std::to_string(n) +
                                " times; label sets must be disjoint"});
      rep.is_l_schema = false;
    }

  if (rep.is_l_schema) rep.checks.push_back({"l-schema", true, "all checks passed"});
  return rep;
}

}  // namespace psw
