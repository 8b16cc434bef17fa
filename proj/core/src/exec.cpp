#include "psw/exec.hpp"

#include <sstream>

namespace psw {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Halted: return "halted";
    case Outcome::UndefinedValue: return "undefined-value";
    default: return "fuel-exhausted";
  }
}

const char* to_string(RunsVerdict v) {
  switch (v) {
    case RunsVerdict::Equal: return "equal";
    case RunsVerdict::Different: return "different";
    default: return "indeterminate";
  }
}

namespace {

class Executor {
 public:
  Executor(const Interpretation& interp, const ExecOptions& opt) : interp_(interp), opt_(opt) {
    res_.memory = interp.start;
  }

  ExecutionResult run(const Schema& s) {
    res_.outcome = run_schema(s);
    return std::move(res_);
  }

 private:
  std::optional<Value> read_var(const Variable& v) {
    Cell cell;
    cell.base = v.name;
    for (const auto& ix : v.indexes) {
      auto val = eval_index(ix);
      if (!val) return std::nullopt;
      if (opt_.hooks && opt_.hooks->on_index_value) opt_.hooks->on_index_value(*val);
      cell.indexes.push_back(std::move(*val));
    }
    auto it = res_.memory.find(cell);
    if (it != res_.memory.end()) return it->second;
    if (interp_.term_model()) return Value::term(cell.to_string());
    return std::nullopt;
  }

  std::optional<Value> eval_index(const IndexExpr& ix) {
    if (ix.fn.empty()) return read_var(Variable::simple_var(ix.args.front()));
    std::vector<Value> args;
    for (const auto& a : ix.args) {
      auto v = read_var(Variable::simple_var(a));
      if (!v) return std::nullopt;
      args.push_back(std::move(*v));
    }
    return interp_.call_function(ix.fn, args);
  }

  bool write_var(const Variable& v, Value val) {
    Cell cell;
    cell.base = v.name;
    for (const auto& ix : v.indexes) {
      auto ival = eval_index(ix);
      if (!ival) return false;
      if (opt_.hooks && opt_.hooks->on_index_value) opt_.hooks->on_index_value(*ival);
      cell.indexes.push_back(std::move(*ival));
    }
    res_.memory[cell] = std::move(val);
    return true;
  }

  bool spend(const Label& at) {
    if (res_.steps >= opt_.fuel) {
      res_.stopped_at = at;
      return false;
    }
    ++res_.steps;
    if (opt_.record_trace) res_.trace.push_back({at, iter_stack_});
    return true;
  }

  Outcome fail(const Label& at) {
    res_.stopped_at = at;
    return Outcome::UndefinedValue;
  }

  Outcome run_schema(const Schema& s) {
    std::set<Label> inputs;
    for (const auto& i : s.instrs) inputs.insert(i.in);
    Label at = s.start;
    while (true) {
      if (!inputs.count(at)) {
        res_.stopped_at = at;
        return Outcome::Halted;  // final label of this level
      }
      const Instruction* ins = s.find(at);
      if (!spend(at)) return Outcome::FuelExhausted;
      switch (ins->kind) {
        case InstrKind::Assign: {
          std::vector<Value> args;
          for (const auto& a : ins->args) {
            auto v = read_var(a);
            if (!v) return fail(at);
            args.push_back(std::move(*v));
          }
          auto out = interp_.call_function(ins->fn, args);
          if (!out) return fail(at);
          if (!write_var(ins->target, std::move(*out))) return fail(at);
          at = ins->next;
          break;
        }
        case InstrKind::Copy: {
          auto v = read_var(ins->args.front());
          if (!v) return fail(at);
          if (!write_var(ins->target, std::move(*v))) return fail(at);
          at = ins->next;
          break;
        }
        case InstrKind::LitAssign: {
          if (!write_var(ins->target, Value::label(ins->lit_label))) return fail(at);
          at = ins->next;
          break;
        }
        case InstrKind::Cond: {
          std::vector<Value> args;
          for (const auto& a : ins->pargs) {
            auto v = read_var(a);
            if (!v) return fail(at);
            args.push_back(std::move(*v));
          }
          Tri t = interp_.call_predicate(ins->pred, args);
          if (t == Tri::Void) return fail(at);
          at = (t == Tri::True) ? ins->then_label : ins->else_label;
          break;
        }
        case InstrKind::CondLabelEq: {
          auto v = read_var(ins->pargs.front());
          if (!v) return fail(at);
          bool eq = (*v == Value::label(ins->lit_label));
          at = eq ? ins->then_label : ins->else_label;
          break;
        }
        case InstrKind::Loop: {
          auto it = s.subs.find(ins->sub);
          if (it == s.subs.end()) throw SchemaError("missing sub-schema " + ins->sub);
          const Schema& body = *it->second;
          long long forced = -1;
          if (opt_.hooks) {
            auto fit = opt_.hooks->forced_iterations.find(ins->in);
            if (fit != opt_.hooks->forced_iterations.end()) forced = fit->second;
          }
          iter_stack_.push_back(0);
          Outcome out = Outcome::Halted;
          while (true) {
            ++iter_stack_.back();
            if (opt_.hooks && opt_.hooks->on_loop_iteration)
              opt_.hooks->on_loop_iteration(ins->in, iter_stack_.back(), res_.memory);
            out = run_schema(body);
            if (out != Outcome::Halted) break;
            if (forced >= 0) {
              if (iter_stack_.back() >= forced) break;
              continue;
            }
            if (!spend(ins->in)) {
              out = Outcome::FuelExhausted;
              break;
            }
            std::vector<Value> args;
            bool bad = false;
            for (const auto& a : ins->pargs) {
              auto v = read_var(a);
              if (!v) {
                bad = true;
                break;
              }
              args.push_back(std::move(*v));
            }
            if (bad) {
              out = fail(ins->in);
              break;
            }
            Tri t = interp_.call_predicate(ins->pred, args);
            if (t == Tri::Void) {
              out = fail(ins->in);
              break;
            }
            if (t == Tri::False) break;
          }
          iter_stack_.pop_back();
          if (out != Outcome::Halted) return out;
          at = ins->next;
          break;
        }
        case InstrKind::Call: {
          auto it = s.subs.find(ins->sub);
          if (it == s.subs.end()) throw SchemaError("missing sub-schema " + ins->sub);
          Outcome out = run_schema(*it->second);
          if (out != Outcome::Halted) return out;
          at = ins->next;
          break;
        }
      }
    }
  }

  const Interpretation& interp_;
  const ExecOptions& opt_;
  ExecutionResult res_;
  std::vector<long long> iter_stack_;
};

}  // namespace

ExecutionResult execute(const Schema& s, const Interpretation& interp, const ExecOptions& opt) {
  Executor ex(interp, opt);
  return ex.run(s);
}

RunsVerdict runs_equal(const Schema& a, const Schema& b, const Interpretation& interp,
                       long long fuel) {
  ExecOptions opt;
  opt.fuel = fuel;
  ExecutionResult ra = execute(a, interp, opt);
  ExecutionResult rb = execute(b, interp, opt);
  if (ra.outcome == Outcome::FuelExhausted || rb.outcome == Outcome::FuelExhausted)
    return RunsVerdict::Indeterminate;
  if (ra.outcome != rb.outcome) return RunsVerdict::Different;
  if (ra.outcome == Outcome::UndefinedValue) return RunsVerdict::Equal;

  std::set<std::string> shared;
  for (const auto& n : a.var_x)
    if (b.var_x.count(n)) shared.insert(n);
  for (const auto& n : a.var_a)
    if (b.var_a.count(n)) shared.insert(n);

  auto restrict_mem = [&shared](const Memory& m) {
    Memory out;
    for (const auto& [cell, value] : m)
      if (shared.count(cell.base)) out.emplace(cell, value);
    return out;
  };
  return restrict_mem(ra.memory) == restrict_mem(rb.memory) ? RunsVerdict::Equal
                                                            : RunsVerdict::Different;
}

}  // namespace psw
