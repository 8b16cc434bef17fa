#include "psw/priority.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace psw::ring {

int PriorityLoop::max_priority() const {
  int r = 0;
  for (const auto& l : inputs) r = std::max(r, l.priority);
  return r;
}

const PriorityList* PriorityLoop::level(int priority) const {
  for (const auto& l : inputs)
    if (l.priority == priority) return &l;
  return nullptr;
}

namespace {

void validate(const PriorityLoop& pl) {
  int r = pl.max_priority();
  std::set<int> seen;
  for (const auto& l : pl.inputs) {
    if (l.priority < 1) throw std::invalid_argument("priorities are positive integers");
    if (!seen.insert(l.priority).second)
      throw std::invalid_argument("one input list per priority level");
  }
  for (int p = 1; p <= r; ++p)
    if (!seen.count(p)) throw std::invalid_argument("missing input list for priority " +
                                                     std::to_string(p));
}

std::optional<int> priority_of(const PriorityLoop& pl, const std::string& name) {
  std::optional<int> best;
  for (const auto& l : pl.inputs)
    if (l.name == name && (!best || l.priority < *best)) best = l.priority;
  for (const auto& [n, p] : pl.outputs)
    if (n == name && (!best || p < *best)) best = p;
  return best;
}

void run_range(const PriorityLoop& pl, int level, std::vector<Value>& point,
               std::vector<long long>& key, long long lo, long long hi, int split_level,
               LoopOutputs& out) {
  const PriorityList* list = pl.level(level);
  long long from = level == split_level ? lo : 0;
  long long to = level == split_level ? hi : static_cast<long long>(list->elems.size());
  for (long long idx = from; idx < to; ++idx) {
    point[level - 1] = list->elems[idx];
    key[level - 1] = idx + 1;
    if (level == pl.max_priority()) {
      std::vector<std::pair<std::string, Value>> emitted;
      pl.kernel(point, emitted);
      for (auto& [name, v] : emitted) out.lists[name].emplace_back(key, std::move(v));
    } else {
      run_range(pl, level + 1, point, key, lo, hi, split_level, out);
    }
  }
}

void normalize(LoopOutputs& out) {
  for (auto& [_, keyed] : out.lists) std::sort(keyed.begin(), keyed.end());
}

}  // namespace

std::optional<int> independence_level(const PriorityLoop& pl) {
  validate(pl);
  std::set<std::string> writes(pl.kernel_writes.begin(), pl.kernel_writes.end());
  std::optional<int> min_s;
  for (const auto& name : pl.kernel_reads) {
    if (!writes.count(name)) continue;
    auto p = priority_of(pl, name);
    if (p && (!min_s || *p < *min_s)) min_s = p;
  }
  if (!min_s) return pl.max_priority();  // S empty: fully independent
  if (*min_s <= 1) return std::nullopt;
  return *min_s - 1;
}

LoopOutputs run_priority_loop(const PriorityLoop& pl) {
  validate(pl);
  LoopOutputs out;
  if (pl.max_priority() == 0) return out;
  std::vector<Value> point(pl.max_priority());
  std::vector<long long> key(pl.max_priority());
  run_range(pl, 1, point, key, 0, 0, /*split_level=*/0, out);
  normalize(out);
  return out;
}

LoopOutputs run_priority_loop(const PriorityLoop& pl, const ParallelMode& mode) {
  validate(pl);
  auto cert = independence_level(pl);
  if (!cert || mode.level > *cert)
    throw std::invalid_argument("requested parallel level exceeds the certified level");
  const PriorityList* list = pl.level(mode.level);
  long long n = static_cast<long long>(list->elems.size());
  long long workers = std::max(1, mode.workers);

  struct Chunk {
    long long lo, hi;
  };
  std::vector<Chunk> chunks;
  for (long long w = 0; w < workers; ++w) {
    long long lo = w * n / workers, hi = (w + 1) * n / workers;
    if (lo < hi) chunks.push_back({lo, hi});
  }
  std::mt19937_64 rng(mode.seed);
  if (mode.seed) std::shuffle(chunks.begin(), chunks.end(), rng);

  LoopOutputs merged;
  for (const auto& c : chunks) {
    LoopOutputs part;
    std::vector<Value> point(pl.max_priority());
    std::vector<long long> key(pl.max_priority());
    run_range(pl, 1, point, key, c.lo, c.hi, mode.level, part);
    for (auto& [name, keyed] : part.lists) {
      auto& dst = merged.lists[name];
      dst.insert(dst.end(), keyed.begin(), keyed.end());
    }
  }
  normalize(merged);
  return merged;
}

std::string ExecutionDiagram::render() const {
  size_t cols = 0;
  for (const auto& r : rows) cols = std::max(cols, r.size());
  std::vector<std::vector<std::string>> text(rows.size());
  std::vector<size_t> width(cols + 1, 0);
  width[0] = 4;  // header column
  for (size_t m = 0; m < rows.size(); ++m) {
    width[0] = std::max(width[0], row_names[m].size());
    for (size_t t = 0; t < rows[m].size(); ++t) {
      const DiagramCell& c = rows[m][t];
      std::ostringstream os;
      if (c.idle) {
        os << "(C" << c.fragment << ")";
      } else {
        os << c.a;
        if (c.b) os << "," << c.b;
        if (c.fragment) os << ",C" << c.fragment;
        for (const auto& w : c.with) os << "," << w;
      }
      text[m].push_back(os.str());
      width[t + 1] = std::max(width[t + 1], text[m].back().size());
    }
  }
  std::ostringstream os;
  os << std::string(width[0], ' ');
  for (size_t t = 0; t < cols; ++t) {
    os << "  t" << t + 1;
    size_t used = 1 + std::to_string(t + 1).size();
    if (width[t + 1] > used) os << std::string(width[t + 1] - used, ' ');
  }
  os << "\n";
  for (size_t m = 0; m < rows.size(); ++m) {
    os << row_names[m] << std::string(width[0] - row_names[m].size(), ' ');
    for (size_t t = 0; t < text[m].size(); ++t)
      os << "  " << text[m][t] << std::string(width[t + 1] - text[m][t].size(), ' ');
    os << "\n";
  }
  return os.str();
}

ExecutionDiagram diagram_shared(const PriorityLoop& pl, int workers) {
  validate(pl);
  const PriorityList* a = pl.level(1);
  const PriorityList* b = pl.level(2);
  if (!a || !b) throw std::invalid_argument("shared diagram needs priority-1 and -2 lists");
  long long asz = static_cast<long long>(a->elems.size());
  long long bsz = static_cast<long long>(b->elems.size());
  if (workers <= 0 || bsz % workers != 0)
    throw std::invalid_argument("level-2 list size must divide evenly across workers");
  long long block = bsz / workers;
  std::vector<std::string> with;
  for (const auto& l : pl.inputs)
    if (l.priority >= 3) with.push_back(l.name);

  ExecutionDiagram d;
  for (int w = 0; w < workers; ++w) {
    d.row_names.push_back("M" + std::to_string(w + 1));
    std::vector<DiagramCell> row;
    for (long long ai = 1; ai <= asz; ++ai)
      for (long long bi = w * block + 1; bi <= (w + 1) * block; ++bi) {
        DiagramCell c;
        c.a = ai;
        c.b = bi;
        c.with = with;
        row.push_back(std::move(c));
      }
    d.rows.push_back(std::move(row));
  }
  return d;
}

ExecutionDiagram diagram_rotating(const PriorityLoop& pl, int workers) {
  validate(pl);
  const PriorityList* a = pl.level(1);
  if (!a) throw std::invalid_argument("rotating diagram needs a priority-1 list");
  long long asz = static_cast<long long>(a->elems.size());
  if (workers <= 0) throw std::invalid_argument("need at least one worker");
  long long w = workers;
  long long total = asz * w + (w - 1);

  ExecutionDiagram d;
  for (long long m = 1; m <= w; ++m) {
    d.row_names.push_back("M" + std::to_string(m));
    std::vector<DiagramCell> row;
    for (long long t = 1; t <= total; ++t) {
      DiagramCell c;
      long long frag = ((m - t) % w + w) % w + 1;  // fragment held at step t
      c.fragment = static_cast<int>(frag);
      if (t < m || t >= m + asz * w) {
        c.idle = true;
      } else {
        c.a = (t - m) / w + 1;
      }
      row.push_back(std::move(c));
    }
    d.rows.push_back(std::move(row));
  }
  return d;
}

}  // namespace psw::ring
