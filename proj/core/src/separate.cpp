#include "psw/separate.hpp"

#include "psw/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace psw {

const char* to_string(Separation s) {
  switch (s) {
    case Separation::Not: return "not";
    case Separation::Separated: return "separated";
    default: return "strictly separated";
  }
}

namespace {

// Reachability (one or more edges) between instruction labels of one level.
std::map<Label, std::set<Label>> level_reach(const Schema& s) {
  std::map<Label, std::set<Label>> succ;
  for (const auto& i : s.instrs)
    for (const auto& o : i.out_labels()) succ[i.in].insert(o);
  std::map<Label, std::set<Label>> reach;
  std::function<const std::set<Label>&(const Label&)> go =
      [&](const Label& l) -> const std::set<Label>& {
    auto it = reach.find(l);
    if (it != reach.end()) return it->second;
    std::set<Label> mine;
    for (const auto& n : succ[l]) {
      mine.insert(n);
      if (s.find(n)) {
        const auto& deeper = go(n);
        mine.insert(deeper.begin(), deeper.end());
      }
    }
    return reach[l] = std::move(mine);
  };
  for (const auto& i : s.instrs) go(i.in);
  return reach;
}

// Topological positions of instruction labels (ties by label order).
std::map<Label, int> topo_order(const Schema& s) {
  std::map<Label, std::vector<Label>> succ;
  std::map<Label, int> indeg;
  for (const auto& i : s.instrs) indeg[i.in] = 0;
  for (const auto& i : s.instrs)
    for (const auto& o : i.out_labels())
      if (s.find(o)) {
        succ[i.in].push_back(o);
        ++indeg[o];
      }
  std::set<Label> ready;
  for (const auto& [l, d] : indeg)
    if (d == 0) ready.insert(l);
  std::map<Label, int> pos;
  int k = 0;
  while (!ready.empty()) {
    Label l = *ready.begin();
    ready.erase(ready.begin());
    pos[l] = k++;
    for (const auto& n : succ[l])
      if (--indeg[n] == 0) ready.insert(n);
  }
  return pos;
}

void rename_index_var(Instruction& ins, Schema& owner, const std::string& from,
                      const std::string& to);

void rename_index_var_schema(Schema& s, const std::string& from, const std::string& to) {
  for (auto& ins : s.instrs) rename_index_var(ins, s, from, to);
}

void rename_index_var(Instruction& ins, Schema& owner, const std::string& from,
                      const std::string& to) {
  auto fix = [&](Variable& v) {
    for (auto& ix : v.indexes)
      for (auto& a : ix.args)
        if (a == from) a = to;
  };
  fix(ins.target);
  for (auto& v : ins.args) fix(v);
  for (auto& v : ins.pargs) fix(v);
  if (ins.kind == InstrKind::Loop || ins.kind == InstrKind::Call) {
    auto it = owner.subs.find(ins.sub);
    if (it != owner.subs.end()) rename_index_var_schema(*it->second, from, to);
  }
}

struct FreshNames {
  std::set<std::string> taken;
  int counter = 0;
  std::string var(const std::string& base) {
    std::string n = "new" + base;
    while (taken.count(n)) n = "new" + base + std::to_string(++counter);
    taken.insert(n);
    return n;
  }
  std::string label(const std::string& base) {
    std::string n = base;
    while (taken.count(n)) n = base + std::to_string(++counter);
    taken.insert(n);
    return n;
  }
};

void collect_names(const Schema& s, std::set<std::string>& out, std::set<const Schema*>& seen) {
  if (!seen.insert(&s).second) return;
  out.insert(s.var_x.begin(), s.var_x.end());
  out.insert(s.var_a.begin(), s.var_a.end());
  for (const auto& l : s.labels()) out.insert(l);
  out.insert(s.name);
  for (const auto& [_, sub] : s.subs) collect_names(*sub, out, seen);
}

// Inserts "fresh = var" immediately before the instruction at `at`, then
// renames `var` to `fresh` in that instruction's index positions.
void insert_copy_before(Schema& level, const Label& at, const std::string& var,
                        const std::string& fresh, FreshNames& names) {
  Label aux = names.label("fo_" + at);
  for (auto& ins : level.instrs) {
    if (ins.kind == InstrKind::Cond || ins.kind == InstrKind::CondLabelEq) {
      if (ins.then_label == at) ins.then_label = aux;
      if (ins.else_label == at) ins.else_label = aux;
    } else {
      if (ins.next == at) ins.next = aux;
    }
  }
  if (level.start == at) level.start = aux;
  Instruction copy;
  copy.in = aux;
  copy.kind = InstrKind::Copy;
  copy.target = Variable::simple_var(fresh);
  copy.args = {Variable::simple_var(var)};
  copy.next = at;
  level.instrs.push_back(std::move(copy));
  Instruction* target = level.find(at);
  rename_index_var(*target, level, var, fresh);
  level.var_x.insert(fresh);
}

// One loop body (or a procedure called from one): repeatedly remove
// use-then-change index patterns.
void forward_orient_level(Schema& level, FreshNames& names) {
  std::set<std::pair<Label, std::string>> skipped;
  while (true) {
    auto reach = level_reach(level);
    std::optional<std::pair<Label, std::string>> offense;
    for (const auto& g : level.instrs) {
      IoSets gio = io_sets_instr(level, g);
      if (gio.ind.simple.empty()) continue;
      for (const auto& e : gio.ind.simple) {
        if (skipped.count({g.in, e})) continue;
        bool hit = false;
        // Self case: a plain instruction using e as an index and writing e.
        if (g.kind != InstrKind::Loop && g.kind != InstrKind::Call &&
            gio.val.contains_simple(e))
          hit = true;
        if (!hit) {
          for (const auto& w : level.instrs) {
            if (w.in == g.in) continue;
            if (!reach[g.in].count(w.in)) continue;
            if (io_sets_instr(level, w).val.contains_simple(e)) {
              hit = true;
              break;
            }
          }
        }
        if (!hit) continue;
        // Renaming inside a loop/call that itself changes e would detach
        // the index from its in-body updates; leave such pairs alone.
        bool unsafe = (g.kind == InstrKind::Loop || g.kind == InstrKind::Call) &&
                      gio.val.contains_simple(e);
        if (unsafe) {
          skipped.insert({g.in, e});
          continue;
        }
        if (!offense || std::make_pair(g.in, e) < *offense) offense = {g.in, e};
      }
    }
    if (!offense) return;
    insert_copy_before(level, offense->first, offense->second, names.var(offense->second), names);
  }
}

// Schemas that are loop bodies, or procedures reachable from one.
void collect_loop_levels(const Schema& s, bool inside_loop, std::set<Schema*>& out,
                         std::set<const Schema*>& seen) {
  if (!seen.insert(&s).second) return;
  for (const auto& ins : s.instrs) {
    if (ins.kind != InstrKind::Loop && ins.kind != InstrKind::Call) continue;
    auto it = s.subs.find(ins.sub);
    if (it == s.subs.end()) continue;
    bool in_loop = ins.kind == InstrKind::Loop || inside_loop;
    if (in_loop) out.insert(it->second.get());
    collect_loop_levels(*it->second, in_loop, out, seen);
  }
}

int bracket_depth(const std::string& s) {
  int depth = 0, best = 0;
  for (char c : s) {
    if (c == '[') best = std::max(best, ++depth);
    if (c == ']') --depth;
  }
  return best;
}

}  // namespace

std::shared_ptr<Schema> to_forward_oriented(const Schema& s) {
  auto rep = validate_L(s);
  if (!rep.is_l_schema) throw SchemaError("not an L-schema: " + rep.summary());
  auto out = s.clone();
  FreshNames names;
  std::set<const Schema*> seen;
  collect_names(*out, names.taken, seen);
  std::set<Schema*> levels;
  std::set<const Schema*> seen2;
  collect_loop_levels(*out, false, levels, seen2);
  for (Schema* level : levels) forward_orient_level(*level, names);
  // Copies introduce fresh simple variables; refresh the root alphabet.
  std::set<const Schema*> seen3;
  std::function<void(const Schema&)> merge = [&](const Schema& x) {
    if (!seen3.insert(&x).second) return;
    out->var_x.insert(x.var_x.begin(), x.var_x.end());
    for (const auto& [_, sub] : x.subs) merge(*sub);
  };
  merge(*out);
  return out;
}

namespace {

Schema* find_loop_owner(Schema& s, const Label& loop_label, Instruction** out_ins) {
  if (Instruction* i = s.find(loop_label)) {
    if (i->kind != InstrKind::Loop) throw SchemaError(loop_label + " is not a loop instruction");
    *out_ins = i;
    return &s;
  }
  for (auto& [_, sub] : s.subs)
    if (Schema* r = find_loop_owner(*sub, loop_label, out_ins)) return r;
  return nullptr;
}

}  // namespace

SeparatedLoop separate_loop(const Schema& root_in, const Label& loop_label) {
  SeparatedLoop out;
  out.root = root_in.clone();
  out.loop_label = loop_label;

  Instruction* loop = nullptr;
  Schema* owner = find_loop_owner(*out.root, loop_label, &loop);
  if (!owner) throw SchemaError("no loop instruction labeled " + loop_label);
  std::shared_ptr<Schema> body = owner->subs.at(loop->sub);

  FreshNames names;
  std::set<const Schema*> seen;
  collect_names(*out.root, names.taken, seen);

  IoSets loop_io = io_sets_instr(*owner, *loop);
  if (loop_io.ind.simple.empty() || body->instrs.empty()) {
    out.kernel_only = true;
    out.parts = {body};
    out.part_io = {io_sets(*body)};
    return out;
  }

  out.dispatch_var = names.label("vLeb1");

  // Partition the body's top-level instructions. Walk from the entry
  // labels in topological order, accumulating Val/Ind of the collected
  // set; an instruction touching those index variables is "limited" and
  // seeds the next part. Everything a limited instruction can reach must
  // come later too, or control leaving the limited instruction would fall
  // back into an already-run part.
  std::vector<std::vector<Label>> part_labels;
  std::vector<std::vector<Label>> part_entries;  // dispatch keys (empty for part 1)
  {
    std::set<Label> remaining;
    std::map<Label, std::vector<Label>> succs;
    for (const auto& i : body->instrs) {
      remaining.insert(i.in);
      for (const auto& o : i.out_labels())
        if (body->find(o)) succs[i.in].push_back(o);
    }
    auto topo = topo_order(*body);
    auto cmp = [&topo](const Label& a, const Label& b) {
      auto ita = topo.find(a), itb = topo.find(b);
      int pa = ita == topo.end() ? -1 : ita->second;
      int pb = itb == topo.end() ? -1 : itb->second;
      return std::make_pair(pa, a) < std::make_pair(pb, b);
    };
    std::set<Label> pending{body->start};  // capture targets not yet placed
    bool first_part = true;
    while (!remaining.empty()) {
      VarSet val_g, ind_g;
      std::set<Label> collected;
      std::set<Label> limited;
      std::set<Label, decltype(cmp)> frontier(cmp);
      std::set<Label> enqueued;
      for (const auto& e : pending)
        if (remaining.count(e) && enqueued.insert(e).second) frontier.insert(e);
      while (!frontier.empty()) {
        Label l = *frontier.begin();
        frontier.erase(frontier.begin());
        const Instruction* ins = body->find(l);
        IoSets io = io_sets_instr(*body, *ins);
        if (io.ind.intersects(val_g) || io.val.intersects(ind_g)) {
          limited.insert(l);
          continue;
        }
        collected.insert(l);
        val_g.merge(io.val);
        ind_g.merge(io.ind);
        for (const auto& o : ins->out_labels())
          if (remaining.count(o) && enqueued.insert(o).second) frontier.insert(o);
      }
      // Taint: the forward closure of the limited set stays behind.
      std::vector<Label> stack(limited.begin(), limited.end());
      std::set<Label> tainted(limited.begin(), limited.end());
      while (!stack.empty()) {
        Label l = stack.back();
        stack.pop_back();
        for (const auto& o : succs[l])
          if (remaining.count(o) && tainted.insert(o).second) stack.push_back(o);
      }
      std::vector<Label> part;
      for (const auto& l : collected)
        if (!tainted.count(l)) part.push_back(l);
      std::sort(part.begin(), part.end(), cmp);
      if (part.empty()) throw SchemaError("separation made no progress in " + body->name);
      std::vector<Label> keys;
      if (!first_part)
        for (const auto& l : part)
          if (pending.count(l)) keys.push_back(l);
      part_labels.push_back(part);
      part_entries.push_back(first_part ? std::vector<Label>{} : keys);
      for (const auto& l : part) {
        remaining.erase(l);
        pending.erase(l);
      }
      // New capture targets: labels outside the part that it branches to.
      std::set<Label> mine(part.begin(), part.end());
      for (const auto& l : part)
        for (const auto& o : succs[l])
          if (!mine.count(o) && remaining.count(o)) pending.insert(o);
      first_part = false;
    }
  }

  Label body_final = *body->final_labels().begin();
  size_t nparts = part_labels.size();
  std::vector<std::shared_ptr<Schema>> parts;
  for (size_t pi = 0; pi < nparts; ++pi) {
    auto part = std::make_shared<Schema>();
    part->name = names.label(body->name + "_p" + std::to_string(pi + 1));
    std::set<Label> mine(part_labels[pi].begin(), part_labels[pi].end());
    Label part_final = names.label(part->name + "_fin");
    bool last = pi + 1 == nparts;

    for (const auto& l : part_labels[pi]) {
      Instruction ins = *body->find(l);
      if (ins.kind == InstrKind::Loop || ins.kind == InstrKind::Call)
        part->subs[ins.sub] = body->subs.at(ins.sub);
      part->instrs.push_back(std::move(ins));
    }

    if (!last) {
      // Exits leave through capture instructions that record the exit label.
      std::map<Label, Label> capture_of;
      size_t fixed_count = part->instrs.size();
      auto redirect = [&](Label& target) {
        if (mine.count(target)) return;
        auto [it, fresh] = capture_of.emplace(target, Label());
        if (fresh) it->second = names.label(part->name + "_cap");
        target = it->second;
      };
      for (size_t k = 0; k < fixed_count; ++k) {
        Instruction& ins = part->instrs[k];
        if (ins.kind == InstrKind::Cond || ins.kind == InstrKind::CondLabelEq) {
          redirect(ins.then_label);
          redirect(ins.else_label);
        } else {
          redirect(ins.next);
        }
      }
      for (const auto& [exit_label, cap_label] : capture_of) {
        Instruction cap;
        cap.in = cap_label;
        cap.kind = InstrKind::LitAssign;
        cap.target = Variable::simple_var(out.dispatch_var);
        cap.lit_label = exit_label;
        cap.next = part_final;
        part->instrs.push_back(std::move(cap));
      }
    }

    if (part_entries[pi].empty()) {
      part->start = pi == 0 ? body->start : part_labels[pi].front();
    } else {
      // Dispatch chain: jump to the recorded entry if it lives here,
      // otherwise fall through to this part's final label.
      const auto& keys = part_entries[pi];
      Label fallthrough = last ? body_final : part_final;
      Label next_link = fallthrough;
      std::vector<Instruction> chain;
      for (size_t k = keys.size(); k-- > 0;) {
        Instruction d;
        d.in = names.label(part->name + "_d");
        d.kind = InstrKind::CondLabelEq;
        d.pargs = {Variable::simple_var(out.dispatch_var)};
        d.lit_label = keys[k];
        d.then_label = mine.count(keys[k]) ? keys[k] : fallthrough;
        d.else_label = next_link;
        next_link = d.in;
        chain.push_back(std::move(d));
      }
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) part->instrs.push_back(*it);
      part->start = next_link;
    }

    part->declared_final = last ? body_final : part_final;
    for (const auto& ins : part->instrs) {
      part->note_variable(ins.target);
      for (const auto& v : ins.args) part->note_variable(v);
      for (const auto& v : ins.pargs) part->note_variable(v);
      if (!ins.fn.empty()) part->fns.insert(ins.fn);
      if (!ins.pred.empty()) part->preds.insert(ins.pred);
    }
    parts.push_back(std::move(part));
  }

  // The rewritten loop body is a plain chain of do-calls.
  auto chain = std::make_shared<Schema>();
  chain->name = names.label(body->name + "_sep");
  Label prev = names.label(chain->name + "_c");
  chain->start = prev;
  for (size_t pi = 0; pi < nparts; ++pi) {
    Instruction call;
    call.in = prev;
    call.kind = InstrKind::Call;
    call.sub = parts[pi]->name;
    prev = names.label(chain->name + "_c");
    call.next = prev;
    chain->subs[parts[pi]->name] = parts[pi];
    chain->instrs.push_back(std::move(call));
  }
  chain->declared_final = prev;

  owner->subs.erase(loop->sub);
  loop->sub = chain->name;
  owner->subs[chain->name] = chain;
  out.root->var_x.insert(out.dispatch_var);

  out.parts = parts;
  out.kernel_only = nparts == 1;
  for (const auto& p : parts) out.part_io.push_back(io_sets(*p));
  return out;
}

Separation check_separated(const std::vector<const Schema*>& parts) {
  if (parts.empty()) return Separation::Not;
  std::vector<IoSets> io;
  for (const Schema* p : parts) io.push_back(io_sets(*p));
  size_t k = parts.size();
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i; j < k; ++j)
      if (io[i].ind.intersects(io[j].val)) return Separation::Not;
  for (size_t i = 1; i < k; ++i)
    if (!io[i].ind.intersects(io[i - 1].val)) return Separation::Not;
  bool strict = true;
  for (size_t i = 0; i + 1 < k; ++i) {
    VarSet used = io[i].arg;
    used.merge(io[i].ind);
    if (io[k - 1].val.intersects(used)) {
      strict = false;
      break;
    }
  }
  return strict ? Separation::StrictlySeparated : Separation::Separated;
}

Separation check_separated(const SeparatedLoop& sep) {
  std::vector<const Schema*> ps;
  for (const auto& p : sep.parts) ps.push_back(p.get());
  return check_separated(ps);
}

int controller_depth_witness(const SeparatedLoop& sep, long long iterations, uint64_t seed) {
  auto si = random_standard_interpretation(*sep.root, seed, true);
  int max_depth = 0;
  long long atom_counter = 0;
  ExecHooks hooks;
  hooks.forced_iterations[sep.loop_label] = iterations;
  const std::set<std::string>& vars = sep.root->var_x;
  hooks.on_loop_iteration = [&](const Label& l, long long, Memory& mem) {
    if (l != sep.loop_label) return;
    ++atom_counter;
    for (const auto& x : vars)
      mem[Cell::simple(x)] = Value::term("w" + std::to_string(atom_counter) + "_" + x);
  };
  hooks.on_index_value = [&](const Value& v) {
    if (v.is_term()) max_depth = std::max(max_depth, bracket_depth(v.as_term()));
  };
  ExecOptions opt;
  opt.fuel = 1000000;
  opt.hooks = &hooks;
  auto r = execute(*sep.root, *si, opt);
  if (r.outcome == Outcome::FuelExhausted) throw EvalError("depth witness exhausted its fuel");
  return max_depth;
}

}  // namespace psw
