#include "psw/schema.hpp"

#include <sstream>

namespace psw {

std::string IndexExpr::to_string() const {
  if (fn.empty()) return args.front();
  std::ostringstream os;
  os << fn << "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) os << ",";
    os << args[i];
  }
  os << ")";
  return os.str();
}

std::string Variable::to_string() const {
  if (simple()) return name;
  std::ostringstream os;
  os << name << "[";
  for (size_t i = 0; i < indexes.size(); ++i) {
    if (i) os << ",";
    os << indexes[i].to_string();
  }
  os << "]";
  return os.str();
}

std::vector<Label> Instruction::out_labels() const {
  switch (kind) {
    case InstrKind::Cond:
    case InstrKind::CondLabelEq:
      return {then_label, else_label};
    default:
      return {next};
  }
}

const Instruction* Schema::find(const Label& l) const {
  for (const auto& i : instrs)
    if (i.in == l) return &i;
  return nullptr;
}

Instruction* Schema::find(const Label& l) {
  for (auto& i : instrs)
    if (i.in == l) return &i;
  return nullptr;
}

std::set<Label> Schema::labels() const {
  std::set<Label> out;
  out.insert(start);
  for (const auto& i : instrs) {
    out.insert(i.in);
    for (const auto& l : i.out_labels()) out.insert(l);
  }
  return out;
}

std::set<Label> Schema::final_labels() const {
  std::set<Label> ins;
  for (const auto& i : instrs) ins.insert(i.in);
  std::set<Label> fin;
  if (instrs.empty()) {
    fin.insert(start);
    return fin;
  }
  for (const auto& i : instrs)
    for (const auto& l : i.out_labels())
      if (!ins.count(l)) fin.insert(l);
  return fin;
}

std::vector<const Schema*> Schema::all_schemas() const {
  std::vector<const Schema*> out{this};
  for (const auto& [_, sub] : subs) {
    auto rec = sub->all_schemas();
    out.insert(out.end(), rec.begin(), rec.end());
  }
  return out;
}

std::shared_ptr<Schema> Schema::clone() const {
  auto c = std::make_shared<Schema>(*this);
  for (auto& [name, sub] : c->subs) sub = sub->clone();
  return c;
}

int Schema::loop_depth() const {
  int best = 0;
  for (const auto& i : instrs) {
    if (i.kind == InstrKind::Loop || i.kind == InstrKind::Call) {
      auto it = subs.find(i.sub);
      if (it == subs.end()) continue;
      int d = it->second->loop_depth() + (i.kind == InstrKind::Loop ? 1 : 0);
      best = std::max(best, d);
    }
  }
  return best;
}

void Schema::note_variable(const Variable& v) {
  if (v.simple()) {
    var_x.insert(v.name);
  } else {
    var_a.insert(v.name);
    for (const auto& ix : v.indexes) {
      if (!ix.fn.empty()) fns.insert(ix.fn);
      for (const auto& a : ix.args) var_x.insert(a);
    }
  }
}

}  // namespace psw
