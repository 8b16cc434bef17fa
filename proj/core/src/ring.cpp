#include "psw/ring.hpp"

#include "psw/interp.hpp"  // mix64

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace psw::ring {

namespace {

// 0-based pairs for a phase. 'A' = (0,1),(2,3),...; 'B' = (n-1,0),(1,2),...
// The bool marks pairs whose "left" is the second element (wraparound).
std::vector<std::pair<int, int>> phase_pairs(int n, char pairing) {
  std::vector<std::pair<int, int>> out;
  if (pairing == 'A') {
    for (int i = 0; i + 1 < n; i += 2) out.emplace_back(i, i + 1);
  } else {
    out.emplace_back(n - 1, 0);  // left = module n
    for (int i = 1; i + 1 < n; i += 2) out.emplace_back(i, i + 1);
  }
  return out;
}

long long spread_of(const std::vector<long long>& v) {
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

EqualizeTrace equalize(std::vector<long long> loads, int max_phases) {
  if (loads.empty() || loads.size() % 2 != 0)
    throw std::invalid_argument("equalize needs an even, nonzero module count");
  int n = static_cast<int>(loads.size());
  if (max_phases < 0) max_phases = 4 * n + 8;

  EqualizeTrace tr;
  tr.initial = loads;
  tr.sum = std::accumulate(loads.begin(), loads.end(), 0ll);
  if (spread_of(loads) <= 1) {
    tr.converged = true;
    return tr;
  }
  char pairing = 'A';
  for (int k = 1; k <= max_phases; ++k) {
    bool changed = false;
    for (auto [left, right] : phase_pairs(n, pairing)) {
      long long joint = loads[left] + loads[right];
      long long l = (joint + 1) / 2;  // odd joint: bigger to left
      long long r = joint - l;
      if (loads[left] != l || loads[right] != r) changed = true;
      loads[left] = l;
      loads[right] = r;
    }
    EqualizePhase ph;
    ph.index = k;
    ph.pairing = pairing;
    ph.loads = loads;
    ph.changed = changed;
    ph.sum = std::accumulate(loads.begin(), loads.end(), 0ll);
    ph.spread = spread_of(loads);
    tr.phases.push_back(std::move(ph));
    if (spread_of(loads) <= 1) {
      tr.converged = true;
      break;
    }
    if (!changed) break;
    pairing = pairing == 'A' ? 'B' : 'A';
  }
  return tr;
}

namespace {

bool concat_sorted(const std::vector<std::vector<long long>>& frags) {
  long long prev = std::numeric_limits<long long>::min();
  for (const auto& f : frags)
    for (long long x : f) {
      if (x < prev) return false;
      prev = x;
    }
  return true;
}

}  // namespace

SortTrace ring_sort(std::vector<std::vector<long long>> fragments, int max_phases) {
  int n = static_cast<int>(fragments.size());
  if (n == 0) throw std::invalid_argument("ring_sort needs at least one module");
  if (max_phases < 0) max_phases = 2 * n + 2;
  SortTrace tr;
  for (auto& f : fragments) std::sort(f.begin(), f.end());

  char pairing = 'A';
  for (int k = 1; k <= max_phases; ++k) {
    bool exchanged = false;
    // Sort pairings never wrap: module order is the list order.
    for (int i = (pairing == 'A' ? 0 : 1); i + 1 < n; i += 2) {
      auto& l = fragments[i];
      auto& r = fragments[i + 1];
      std::vector<long long> merged;
      merged.reserve(l.size() + r.size());
      std::merge(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(merged));
      std::vector<long long> nl(merged.begin(), merged.begin() + l.size());
      std::vector<long long> nr(merged.begin() + l.size(), merged.end());
      if (nl != l || nr != r) exchanged = true;
      l = std::move(nl);
      r = std::move(nr);
    }
    tr.phases.push_back({k, pairing, exchanged});
    if (concat_sorted(fragments)) {
      tr.sorted = true;
      break;
    }
    pairing = pairing == 'A' ? 'B' : 'A';
  }
  tr.fragments = std::move(fragments);
  if (tr.phases.empty() && concat_sorted(tr.fragments)) tr.sorted = true;
  return tr;
}

// ---------------------------------------------------------------------------

const std::vector<AutomatonCommand>& handshake_automaton_table() {
  static const std::vector<AutomatonCommand> table = {
      {'p', 'K', "-", "accept package; switch side", 'q'},
      {'q', 'K', "-", "deliver package; switch side", 'p'},
      {'q', 'F', "-", "enter flag wait", 'r'},
      {'r', 'F', "id=own", "consume flag; get package from right", 'p'},
      {'r', 'F', "id!=own", "keep waiting for own flag", 'r'},
      {'f', '-', "own", "emit flag with right neighbor id", 'r'},
  };
  return table;
}

std::pair<std::string, char> automaton_step(char state, char symbol, int own_id, int flag_id) {
  if (state == 'p' && symbol == 'K') return {"accept package; switch side", 'q'};
  if (state == 'q' && symbol == 'K') return {"deliver package; switch side", 'p'};
  if (state == 'q' && symbol == 'F') return {"enter flag wait", 'r'};
  if (state == 'r' && symbol == 'F') {
    if (flag_id == own_id) return {"consume flag; get package from right", 'p'};
    return {"keep waiting for own flag", 'r'};
  }
  if (state == 'f') return {"emit flag with right neighbor id", 'r'};
  return {"ignore", state};
}

namespace {

int partner_of(int j, long long round, int n) {
  // Odd rounds pair (0,1),(2,3),...; even rounds pair (n-1,0),(1,2),...
  bool a = (round % 2) == 1;
  if (a) return (j % 2 == 0) ? j + 1 : j - 1;
  return (j % 2 == 0) ? (j + n - 1) % n : (j + 1) % n;
}

HandshakeReport simulate_alternating(const HandshakeConfig& cfg, const FaultScript& fault,
                                     FaultReport* fr) {
  int n = cfg.modules;
  HandshakeReport rep;
  rep.total_wait.assign(n, 0);
  std::vector<long long> done(n, 0);       // completion time of previous round
  std::vector<long long> maxdur(n, 1);     // largest phase duration seen per module
  std::vector<long long> frozen(n, -1);    // round from which a module is silent
  if (fault.kind == FaultScript::Silent) frozen[fault.module] = fault.at_phase;

  for (long long k = 1; k <= cfg.phases; ++k) {
    std::vector<long long> next = done;
    for (int j = 0; j < n; ++j) {
      int q = partner_of(j, k, n);
      if (q < j) continue;  // handle each pair once
      bool j_dead = frozen[j] >= 0 && k >= frozen[j];
      bool q_dead = frozen[q] >= 0 && k >= frozen[q];
      long long aj = done[j] + cfg.costs[j];
      long long aq = done[q] + cfg.costs[q];
      if (j_dead || q_dead) {
        int live = j_dead ? q : j;
        int dead = j_dead ? j : q;
        long long avail = j_dead ? aq : aj;
        if (fr && !fr->flagged) {
          long long watchdog = 2 * (maxdur[live] + cfg.costs[live]);
          fr->flagged = true;
          fr->detected_by = live;
          fr->against = dead;
          fr->phase = k;
          fr->reason = "silent neighbor: no handshake within watchdog " +
                       std::to_string(watchdog) + " at t=" + std::to_string(avail);
        }
        next[live] = avail;  // gives up on this round's rendezvous
        continue;
      }
      long long t = std::max(aj, aq);
      rep.total_wait[j] += t - aj;
      rep.total_wait[q] += t - aq;
      rep.max_wait = std::max({rep.max_wait, t - aj, t - aq});
      maxdur[j] = std::max(maxdur[j], t - done[j]);
      maxdur[q] = std::max(maxdur[q], t - done[q]);
      next[j] = t;
      next[q] = t;
      if (fr && fault.kind == FaultScript::WrongState && !fr->flagged) {
        // States alternate p/q with pairing parity; an ill-phased module
        // reports the wrong one and its partner compares.
        if (j == fault.module && k >= fault.at_phase) {
          fr->flagged = true;
          fr->detected_by = q;
          fr->against = j;
          fr->phase = k;
          fr->reason = "state comparison mismatch";
        } else if (q == fault.module && k >= fault.at_phase) {
          fr->flagged = true;
          fr->detected_by = j;
          fr->against = q;
          fr->phase = k;
          fr->reason = "state comparison mismatch";
        }
      }
    }
    done = std::move(next);

    if (cfg.flag_period > 0 && k % cfg.flag_period == 0 && fault.kind == FaultScript::None) {
      // Flag round: a flag with the next module's id circulates once and
      // every module resumes when it returns, erasing accumulated drift.
      long long t = done[0];
      for (int j = 0; j < n; ++j) t = std::max(t, done[j]) + 1;
      for (int j = 0; j < n; ++j) {
        rep.total_wait[j] += t - done[j];
        done[j] = t;
      }
      rep.events.push_back("flag round after phase " + std::to_string(k) + " at t=" +
                           std::to_string(t));
    }
  }
  rep.makespan = *std::max_element(done.begin(), done.end());
  rep.max_phase_skew = 0;  // strict alternation keeps neighbors within one phase
  return rep;
}

HandshakeReport simulate_free(const HandshakeConfig& cfg) {
  int n = cfg.modules;
  HandshakeReport rep;
  rep.total_wait.assign(n, 0);
  std::vector<long long> phase(n, 0);
  std::vector<long long> ready_at(n, 0);
  // Event loop: repeatedly pick the earliest-ready unengaged module and let
  // it pair with an adjacent ready module, preferring the longer-waiting
  // one; ties break by seeded hash. Fast segments may pair among
  // themselves repeatedly and run ahead of a slow module.
  long long total_rounds = cfg.phases * n / 2;
  for (long long step = 0; step < total_rounds; ++step) {
    // Find the pair (i, i+1) whose handshake can complete earliest.
    long long best_t = std::numeric_limits<long long>::max();
    int best_i = -1;
    for (int i = 0; i < n; ++i) {
      int j = (i + 1) % n;
      long long t = std::max(ready_at[i] + cfg.costs[i], ready_at[j] + cfg.costs[j]);
      uint64_t tie = psw::mix64(cfg.seed ^ (static_cast<uint64_t>(step) << 20) ^ i);
      if (t < best_t || (t == best_t && (tie & 1))) {
        best_t = t;
        best_i = i;
      }
    }
    int i = best_i, j = (best_i + 1) % n;
    long long ai = ready_at[i] + cfg.costs[i];
    long long aj = ready_at[j] + cfg.costs[j];
    long long t = std::max(ai, aj);
    rep.total_wait[i] += t - ai;
    rep.total_wait[j] += t - aj;
    rep.max_wait = std::max({rep.max_wait, t - ai, t - aj});
    ready_at[i] = ready_at[j] = t;
    ++phase[i];
    ++phase[j];
    for (int m = 0; m < n; ++m) {
      long long skew = std::abs(phase[m] - phase[(m + 1) % n]);
      rep.max_phase_skew = std::max(rep.max_phase_skew, skew);
    }
  }
  rep.makespan = *std::max_element(ready_at.begin(), ready_at.end());
  return rep;
}

}  // namespace

HandshakeReport run_handshake(const HandshakeConfig& cfg_in) {
  HandshakeConfig cfg = cfg_in;
  if (cfg.modules <= 0 || cfg.modules % 2 != 0)
    throw std::invalid_argument("handshake ring needs an even module count");
  if (cfg.costs.empty()) cfg.costs.assign(cfg.modules, 1);
  if (static_cast<int>(cfg.costs.size()) != cfg.modules)
    throw std::invalid_argument("costs size must match module count");
  if (cfg.flag_automaton) return simulate_alternating(cfg, FaultScript{}, nullptr);
  return simulate_free(cfg);
}

FaultReport detect_fault(const HandshakeConfig& cfg_in, const FaultScript& fault) {
  HandshakeConfig cfg = cfg_in;
  if (cfg.costs.empty()) cfg.costs.assign(cfg.modules, 1);
  FaultReport fr;
  simulate_alternating(cfg, fault, &fr);
  if (fault.kind != FaultScript::None && fr.flagged)
    fr.phase = fr.phase - fault.at_phase;  // phases until detection
  return fr;
}

}  // namespace psw::ring
