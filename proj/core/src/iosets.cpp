#include "psw/iosets.hpp"

#include <sstream>

namespace psw {

std::string VarSet::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& n : simple) {
    if (!first) os << ", ";
    os << n;
    first = false;
  }
  for (const auto& n : arrays) {
    if (!first) os << ", ";
    os << n << "[]";
    first = false;
  }
  os << "}";
  return os.str();
}

namespace {

void add_index_vars(VarSet& out, const Variable& v) {
  for (const auto& ix : v.indexes)
    for (const auto& z : ix.args) out.add_simple(z);
}

}  // namespace

IoSets io_sets_instr(const Schema& owner, const Instruction& ins) {
  IoSets r;
  switch (ins.kind) {
    case InstrKind::Assign:
    case InstrKind::Copy: {
      add_index_vars(r.ind, ins.target);
      for (const auto& a : ins.args) add_index_vars(r.ind, a);
      for (const auto& a : ins.args) r.arg.add(a);
      r.arg.merge(r.ind);
      r.val.add(ins.target);
      break;
    }
    case InstrKind::LitAssign: {
      r.val.add(ins.target);
      break;
    }
    case InstrKind::Cond: {
      for (const auto& a : ins.pargs) add_index_vars(r.ind, a);
      for (const auto& a : ins.pargs) r.arg.add(a);
      r.arg.merge(r.ind);
      break;
    }
    case InstrKind::CondLabelEq: {
      for (const auto& a : ins.pargs) r.arg.add(a);
      break;
    }
    case InstrKind::Loop:
    case InstrKind::Call: {
      auto it = owner.subs.find(ins.sub);
      if (it != owner.subs.end()) {
        IoSets body = io_sets(*it->second);
        r.ind.merge(body.ind);
        r.arg.merge(body.arg);
        r.val.merge(body.val);
      }
      if (ins.kind == InstrKind::Loop) {
        for (const auto& a : ins.pargs) add_index_vars(r.ind, a);
        for (const auto& a : ins.pargs) r.arg.add(a);
        r.arg.merge(r.ind);
      }
      break;
    }
  }
  return r;
}

IoSets io_sets(const Schema& s, const Label& label) {
  const Instruction* ins = s.find(label);
  if (!ins) throw SchemaError("unknown label " + label + " in schema " + s.name);
  return io_sets_instr(s, *ins);
}

IoSets io_sets(const Schema& s) {
  IoSets r;
  for (const auto& ins : s.instrs) {
    IoSets one = io_sets_instr(s, ins);
    r.ind.merge(one.ind);
    r.arg.merge(one.arg);
    r.val.merge(one.val);
  }
  r.arg.merge(r.ind);
  return r;
}

}  // namespace psw
