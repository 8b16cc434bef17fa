#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace psw::ring {

/// Ring of 2n modules; neighbors pair alternately as (1,2),(3,4),... and
/// (2n,1),(2,3),(4,5),.... Within a pair "left" is the lower index, except
/// the wraparound pair where left is module 2n.

struct EqualizePhase {
  int index = 0;
  char pairing = 'A';
  std::vector<long long> loads;
  bool changed = false;
  long long sum = 0;
  long long spread = 0;  // max - min
};

struct EqualizeTrace {
  std::vector<long long> initial;
  std::vector<EqualizePhase> phases;
  bool converged = false;  // spread <= 1
  long long sum = 0;
};

/// Pairwise balancing: each pair splits its joint count evenly, the odd
/// element going left. Runs until the spread is at most one element or a
/// full phase changes nothing. Module count must be even.
EqualizeTrace equalize(std::vector<long long> loads, int max_phases = -1);

struct SortPhase {
  int index = 0;
  char pairing = 'A';  // A = (1,2),(3,4),...; B = (2,3),(4,5),... (no wrap)
  bool exchanged = false;
};

struct SortTrace {
  std::vector<std::vector<long long>> fragments;  // final state
  std::vector<SortPhase> phases;
  bool sorted = false;
};

/// Block odd-even transposition: pairs merge their fragments and split,
/// left keeping the smaller half. Fragments are locally sorted first.
/// Runs until the concatenation by module index is nondecreasing.
SortTrace ring_sort(std::vector<std::vector<long long>> fragments, int max_phases = -1);

// ---------------------------------------------------------------------------
// Handshake simulation.

/// Reconstructed control automaton. States: p await package, q send
/// package, r await flag, f emit flag. Symbols: K package, F flag bearing a
/// module id. A mismatched flag id in state r keeps the module waiting.
struct AutomatonCommand {
  char state_in;
  char symbol;      // 'K', 'F', '-' (internal)
  const char* memory;
  const char* action;
  char state_out;
};

const std::vector<AutomatonCommand>& handshake_automaton_table();

/// Pure transition step; flag_id < 0 means no flag attached.
std::pair<std::string, char> automaton_step(char state, char symbol, int own_id, int flag_id);

struct HandshakeConfig {
  int modules = 10;
  std::vector<long long> costs;  // per-module per-phase cost (default 1)
  long long phases = 100;
  bool flag_automaton = true;    // strict alternation with periodic flag rounds
  long long flag_period = 16;
  uint64_t seed = 1;             // tie-break for the free-running baseline
};

struct HandshakeReport {
  std::vector<long long> total_wait;    // accumulated idle per module
  long long max_wait = 0;               // largest single-rendezvous wait
  long long max_phase_skew = 0;         // largest phase-count gap between neighbors
  long long makespan = 0;
  bool deadlock = false;
  std::vector<std::string> events;      // flag rounds and anomalies
};

/// flag_automaton=true: strict side alternation with flag resynchronization
/// rounds. flag_automaton=false: free-running baseline, each module pairs
/// with whichever neighbor is available first; fast segments drift ahead.
HandshakeReport run_handshake(const HandshakeConfig& cfg);

struct FaultScript {
  int module = -1;
  long long at_phase = 0;
  enum Kind { None, Silent, WrongState } kind = None;
};

struct FaultReport {
  bool flagged = false;
  int detected_by = -1;
  int against = -1;
  long long phase = 0;
  std::string reason;
};

/// Runs the alternating handshake with one scripted fault; a neighbor flags
/// a silent or ill-phased module by watchdog or state comparison.
FaultReport detect_fault(const HandshakeConfig& cfg, const FaultScript& fault);

}  // namespace psw::ring
