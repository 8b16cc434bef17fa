#include "psw/dependence.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

namespace psw::dep {

std::string point_to_string(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) os << ",";
    os << p[i];
  }
  os << ")";
  return os.str();
}

bool Box::contains(const Point& p) const {
  if (p.size() != dims.size()) return false;
  for (size_t i = 0; i < dims.size(); ++i)
    if (p[i] < dims[i].first || p[i] > dims[i].second) return false;
  return true;
}

BigInt Box::volume() const {
  BigInt v = 1;
  for (const auto& [lo, hi] : dims) v *= (hi >= lo) ? BigInt(hi - lo + 1) : BigInt(0);
  return v;
}

std::vector<Point> Box::points() const {
  std::vector<Point> out;
  if (dims.empty()) return out;
  Point p;
  for (const auto& [lo, _] : dims) p.push_back(lo);
  while (true) {
    out.push_back(p);
    size_t d = dims.size();
    while (d-- > 0) {
      if (++p[d] <= dims[d].second) break;
      p[d] = dims[d].first;
      if (d == 0) return out;
    }
  }
}

std::string ConnectionEquation::to_string() const {
  std::ostringstream os;
  std::vector<std::string> wn, rn;
  for (const auto& c : counters) wn.push_back(c + "'");
  for (const auto& c : counters) rn.push_back(c + "\"");
  os << array << ": ";
  for (size_t d = 0; d < write_index.size(); ++d) {
    if (d) os << ", ";
    os << write_index[d].to_string(wn) << " = " << read_index[d].to_string(rn);
  }
  os << "  [degree " << degree << (opaque ? ", opaque" : "") << "]";
  return os.str();
}

namespace {

// Index-function registry: symbol -> polynomial in one variable.
std::optional<Poly> index_fn_poly(const std::string& fn, const Poly& x) {
  if (fn.empty() || fn == "id") return x;
  if (fn == "inc") return x + Poly::constant(1);
  if (fn == "dec") return x - Poly::constant(1);
  if (fn == "sq") return x * x;
  if (fn == "dbl") return Poly::constant(2) * x;
  return std::nullopt;
}

struct NestInfo {
  std::vector<std::string> counters;  // outermost first
  std::vector<const Instruction*> assigns;
  std::vector<const Schema*> owners;
};

void scan_nest(const Schema& s, NestInfo& info) {
  for (const auto& ins : s.instrs) {
    if (ins.kind == InstrKind::Assign || ins.kind == InstrKind::Copy) {
      bool indexed = !ins.target.indexes.empty();
      for (const auto& a : ins.args)
        if (!a.indexes.empty()) indexed = true;
      bool is_counter = ins.kind == InstrKind::Assign && ins.fn == "inc" &&
                        ins.target.simple() && ins.args.size() == 1 &&
                        ins.args[0] == ins.target;
      if (indexed && !is_counter) {
        info.assigns.push_back(&ins);
        info.owners.push_back(&s);
      }
    }
  }
  for (const auto& ins : s.instrs) {
    if (ins.kind != InstrKind::Loop) continue;
    auto it = s.subs.find(ins.sub);
    if (it == s.subs.end()) continue;
    const Schema& body = *it->second;
    for (const auto& b : body.instrs)
      if (b.kind == InstrKind::Assign && b.fn == "inc" && b.target.simple() &&
          b.args.size() == 1 && b.args[0] == b.target) {
        info.counters.push_back(b.target.name);
        break;
      }
    scan_nest(body, info);
  }
}

// nullopt = opaque (unregistered function or non-counter variable).
std::optional<Poly> index_to_poly(const IndexExpr& ix, const std::vector<std::string>& counters) {
  if (ix.args.size() != 1) return std::nullopt;
  auto pos = std::find(counters.begin(), counters.end(), ix.args[0]);
  if (pos == counters.end()) return std::nullopt;
  Poly x = Poly::var(static_cast<size_t>(pos - counters.begin()), counters.size());
  return index_fn_poly(ix.fn, x);
}

}  // namespace

std::vector<ConnectionEquation> build_connection_equations(const Schema& nest, const Box& bounds) {
  NestInfo info;
  scan_nest(nest, info);
  if (bounds.rank() != info.counters.size())
    throw EvalError("bounds rank " + std::to_string(bounds.rank()) + " does not match " +
                    std::to_string(info.counters.size()) + " nest counters");

  struct Site {
    const Instruction* ins;
    const Variable* var;
    bool write;
  };
  std::vector<Site> sites;
  for (const auto* ins : info.assigns) {
    if (!ins->target.indexes.empty()) sites.push_back({ins, &ins->target, true});
    for (const auto& a : ins->args)
      if (!a.indexes.empty()) sites.push_back({ins, &a, false});
  }

  std::vector<ConnectionEquation> out;
  for (const auto& w : sites) {
    if (!w.write) continue;
    for (const auto& r : sites) {
      if (r.write) continue;
      if (w.var->name != r.var->name) continue;
      ConnectionEquation eq;
      eq.array = w.var->name;
      eq.write_label = w.ins->in;
      eq.read_label = r.ins->in;
      eq.counters = info.counters;
      eq.bounds = bounds;
      long long deg = 0;
      for (size_t d = 0; d < w.var->indexes.size(); ++d) {
        auto wp = index_to_poly(w.var->indexes[d], info.counters);
        auto rp = index_to_poly(r.var->indexes[d], info.counters);
        if (!wp || !rp) {
          eq.opaque = true;
          eq.write_index.clear();
          eq.read_index.clear();
          break;
        }
        deg = std::max({deg, wp->degree(), rp->degree()});
        eq.write_index.push_back(std::move(*wp));
        eq.read_index.push_back(std::move(*rp));
      }
      eq.degree = eq.opaque ? 0 : deg;
      out.push_back(std::move(eq));
    }
  }
  return out;
}

std::vector<std::pair<Point, Point>> solve_connection_oracle(const ConnectionEquation& eq) {
  std::vector<std::pair<Point, Point>> out;
  if (eq.opaque) return out;
  auto pts = eq.bounds.points();
  for (const auto& w : pts) {
    std::vector<BigInt> wb(w.begin(), w.end());
    for (const auto& r : pts) {
      std::vector<BigInt> rb(r.begin(), r.end());
      bool ok = true;
      for (size_t d = 0; d < eq.write_index.size() && ok; ++d)
        ok = eq.write_index[d].eval(wb) == eq.read_index[d].eval(rb);
      if (ok) out.emplace_back(w, r);
    }
  }
  return out;
}

SolveResult solve_connection(const ConnectionEquation& eq, BigInt budget) {
  SolveResult res;
  if (eq.opaque) {
    res.status = SolveStatus::UnsolvableOpaque;
    return res;
  }
  size_t n = eq.counters.size();
  size_t total_vars = 2 * n;  // writer vars then reader vars

  // Combined equations over (writer, reader) space.
  std::vector<size_t> wpos(n), rpos(n);
  for (size_t i = 0; i < n; ++i) {
    wpos[i] = i;
    rpos[i] = n + i;
  }
  std::vector<Poly> eqs;
  for (size_t d = 0; d < eq.write_index.size(); ++d)
    eqs.push_back(eq.write_index[d].embed(wpos, total_vars) -
                  eq.read_index[d].embed(rpos, total_vars));

  auto bound_of = [&](size_t v) { return eq.bounds.dims[v % n]; };

  if (eq.degree <= 1) {
    // Pick a pivot with nonzero coefficient in the first equation; solve it
    // exactly while enumerating the remaining variables.
    size_t pivot = total_vars;
    for (size_t v = total_vars; v-- > 0;)
      if (eqs[0].linear_coeff(v) != 0) {
        pivot = v;
        break;
      }
    if (pivot == total_vars) {
      // Degenerate: no variables in the first equation; fall through to
      // plain enumeration of all variables.
    } else {
      std::vector<size_t> free_vars;
      for (size_t v = 0; v < total_vars; ++v)
        if (v != pivot) free_vars.push_back(v);
      BigInt a = eqs[0].linear_coeff(pivot);
      std::vector<BigInt> point(total_vars, 0);
      std::function<void(size_t)> rec = [&](size_t i) {
        if (i == free_vars.size()) {
          // c + a * pivot = 0 with the free variables fixed.
          std::vector<BigInt> probe = point;
          probe[pivot] = 0;
          BigInt c = eqs[0].eval(probe);
          if (c % a != 0) return;
          BigInt pv = -c / a;
          auto [lo, hi] = bound_of(pivot);
          if (pv < lo || pv > hi) return;
          probe[pivot] = pv;
          for (size_t e = 1; e < eqs.size(); ++e)
            if (eqs[e].eval(probe) != 0) return;
          Point w(n), r(n);
          for (size_t d = 0; d < n; ++d) {
            w[d] = probe[d].convert_to<long long>();
            r[d] = probe[n + d].convert_to<long long>();
          }
          res.solutions.emplace_back(std::move(w), std::move(r));
          return;
        }
        auto [lo, hi] = bound_of(free_vars[i]);
        for (long long x = lo; x <= hi; ++x) {
          point[free_vars[i]] = x;
          rec(i + 1);
        }
      };
      rec(0);
      std::sort(res.solutions.begin(), res.solutions.end());
      res.status = SolveStatus::Exact;
      return res;
    }
  }

  BigInt pairs = eq.bounds.volume() * eq.bounds.volume();
  if (pairs > budget)
    throw BudgetExceeded("enumeration budget exceeded: " + pairs.str() + " pairs");
  res.solutions = solve_connection_oracle(eq);
  res.status = eq.degree <= 1 ? SolveStatus::Exact : SolveStatus::BoundedOnly;
  return res;
}

bool Offset::lex_positive() const {
  for (long long x : d) {
    if (x > 0) return true;
    if (x < 0) return false;
  }
  return false;
}

std::string Offset::to_string() const { return point_to_string(d); }

namespace {

Point minus(const Point& p, const Offset& o) {
  Point r = p;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= o.d[i];
  return r;
}

void check_offsets(const PredecessorProgram& prog) {
  for (const auto& o : prog.reads) {
    if (o.d.size() != prog.domain.rank())
      throw EvalError("offset rank mismatch: " + o.to_string());
    if (!o.lex_positive())
      throw EvalError("cyclic dependence: read offset " + o.to_string() +
                      " is not lexicographically positive");
  }
}

}  // namespace

std::set<Point> PredecessorProgram::boundary_reads() const {
  std::set<Point> out;
  for (const auto& p : domain.points())
    for (const auto& o : reads) {
      Point q = minus(p, o);
      if (!domain.contains(q)) out.insert(q);
    }
  return out;
}

void PredecessorProgram::fill_boundary(const Value& v) {
  for (const auto& p : boundary_reads()) boundary[p] = v;
}

DependencePlan ready_wavefronts(const PredecessorProgram& prog) {
  check_offsets(prog);
  DependencePlan plan;
  std::map<Point, long long> layer_of;
  // Lexicographic order visits every predecessor before its consumer.
  for (const auto& p : prog.domain.points()) {
    long long layer = 0;
    for (const auto& o : prog.reads) {
      Point q = minus(p, o);
      if (!prog.domain.contains(q)) continue;
      plan.edges.emplace_back(q, p);
      layer = std::max(layer, layer_of.at(q) + 1);
    }
    layer_of[p] = layer;
    if (static_cast<size_t>(layer) >= plan.layers.size()) plan.layers.resize(layer + 1);
    plan.layers[layer].push_back(p);
  }

  // Affine certificate: smallest integer normal with n.d > 0 for all reads.
  size_t rank = prog.domain.rank();
  if (!prog.reads.empty()) {
    for (long long radius = 1; radius <= 4 && !plan.normal; ++radius) {
      std::vector<long long> n(rank, -radius);
      while (true) {
        bool all_pos = true;
        for (const auto& o : prog.reads) {
          long long dot = 0;
          for (size_t i = 0; i < rank; ++i) dot += n[i] * o.d[i];
          if (dot <= 0) {
            all_pos = false;
            break;
          }
        }
        long long g = 0;
        for (long long x : n) g = std::gcd(g, std::abs(x));
        bool max_is_radius = false;
        for (long long x : n)
          if (std::abs(x) == radius) max_is_radius = true;
        if (all_pos && max_is_radius && g == 1) {
          plan.normal = n;
          break;
        }
        size_t d = rank;
        while (d-- > 0) {
          if (++n[d] <= radius) break;
          n[d] = -radius;
          if (d == 0) goto next_radius;
        }
      }
    next_radius:;
    }
  }
  return plan;
}

std::set<Point> dependence_cone(const PredecessorProgram& prog, const Point& p, ConeCache* cache) {
  if (!prog.domain.contains(p)) throw EvalError("point out of bounds: " + point_to_string(p));
  if (cache) {
    auto it = cache->find(p);
    if (it != cache->end()) return it->second;
  }
  std::set<Point> cone;
  std::vector<Point> stack{p};
  while (!stack.empty()) {
    Point cur = stack.back();
    stack.pop_back();
    for (const auto& o : prog.reads) {
      Point q = minus(cur, o);
      if (!prog.domain.contains(q)) continue;
      if (cone.insert(q).second) {
        if (cache) {
          auto it = cache->find(q);
          if (it != cache->end()) {
            cone.insert(it->second.begin(), it->second.end());
            continue;
          }
        }
        stack.push_back(q);
      }
    }
  }
  if (cache) (*cache)[p] = cone;
  return cone;
}

bool check_parallel_set(const PredecessorProgram& prog, const std::vector<Point>& points,
                        ConeCache* cache) {
  ConeCache local;
  if (!cache) cache = &local;
  std::set<Point> set(points.begin(), points.end());
  for (const auto& p : points) {
    auto cone = dependence_cone(prog, p, cache);
    for (const auto& q : points) {
      if (q == p) continue;
      if (cone.count(q)) return false;
    }
  }
  (void)set;
  return true;
}

namespace {

Value read_input(const PredecessorProgram& prog, const std::map<Point, Value>& values,
                 const Point& q) {
  if (prog.domain.contains(q)) return values.at(q);
  auto it = prog.boundary.find(q);
  if (it == prog.boundary.end())
    throw EvalError("missing boundary datum at " + point_to_string(q));
  return it->second;
}

Value eval_point(const PredecessorProgram& prog, const std::map<Point, Value>& values,
                 const Point& p) {
  std::vector<Value> args;
  args.reserve(prog.reads.size());
  for (const auto& o : prog.reads) args.push_back(read_input(prog, values, minus(p, o)));
  return prog.kernel(p, args);
}

}  // namespace

std::map<Point, Value> execute_wavefront(const PredecessorProgram& prog, uint64_t shuffle_seed) {
  DependencePlan plan = ready_wavefronts(prog);
  std::map<Point, Value> values;
  std::mt19937_64 rng(shuffle_seed);
  for (auto layer : plan.layers) {
    if (shuffle_seed) std::shuffle(layer.begin(), layer.end(), rng);
    // Points of one layer never read each other, so evaluating against the
    // previous layers' snapshot in any order gives the same result.
    std::vector<std::pair<Point, Value>> batch;
    for (const auto& p : layer) batch.emplace_back(p, eval_point(prog, values, p));
    for (auto& [p, v] : batch) values.emplace(std::move(p), std::move(v));
  }
  return values;
}

std::map<Point, Value> execute_sequential(const PredecessorProgram& prog) {
  check_offsets(prog);
  std::map<Point, Value> values;
  for (const auto& p : prog.domain.points()) values.emplace(p, eval_point(prog, values, p));
  return values;
}

}  // namespace psw::dep
