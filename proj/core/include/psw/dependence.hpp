#pragma once

#include "psw/polynomial.hpp"
#include "psw/schema.hpp"
#include "psw/value.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace psw::dep {

using Point = std::vector<long long>;

std::string point_to_string(const Point& p);

/// Inclusive per-dimension bounds of an iteration box.
struct Box {
  std::vector<std::pair<long long, long long>> dims;

  size_t rank() const { return dims.size(); }
  bool contains(const Point& p) const;
  BigInt volume() const;
  std::vector<Point> points() const;  // lexicographic order
};

struct ConnectionEquation {
  std::string array;
  Label write_label;
  Label read_label;
  std::vector<Poly> write_index;      // per array dimension, over nest counters
  std::vector<Poly> read_index;
  std::vector<std::string> counters;  // outermost first
  Box bounds;
  long long degree = 0;
  bool opaque = false;

  std::string to_string() const;
};

/// One equation per (write site, read site) pair on a common array. Index
/// expressions are mapped to polynomials through the index-function registry
/// (id, inc, dec, sq, dbl); anything else marks the equation opaque.
/// Counters are recognized structurally: the unique `v = inc(v)` in each
/// loop body, outermost loop first; bounds are supplied alongside.
std::vector<ConnectionEquation> build_connection_equations(const Schema& nest, const Box& bounds);

enum class SolveStatus { Exact, BoundedOnly, UnsolvableOpaque };

struct SolveResult {
  SolveStatus status = SolveStatus::Exact;
  std::vector<std::pair<Point, Point>> solutions;  // (writer iteration, reader iteration)
};

struct BudgetExceeded : EvalError {
  using EvalError::EvalError;
};

/// Degree-1 equations: all but one unknown are enumerated and the pivot is
/// solved exactly (divisibility and range checked). Higher degrees fall back
/// to exhaustive enumeration within the bounds, reported as bounded-only.
SolveResult solve_connection(const ConnectionEquation& eq, BigInt budget = BigInt(10000000));

/// Brute-force oracle: enumerates every (writer, reader) pair in bounds.
std::vector<std::pair<Point, Point>> solve_connection_oracle(const ConnectionEquation& eq);

struct Offset {
  std::vector<long long> d;  // a point reads point - d
  bool lex_positive() const;
  std::string to_string() const;
};

using WaveKernel = std::function<Value(const Point&, const std::vector<Value>&)>;

/// Loop nest in predecessor form: each read names the iteration point whose
/// result it consumes, via a constant offset. Out-of-domain reads resolve
/// through the boundary map; a missing entry is an error.
struct PredecessorProgram {
  Box domain;
  std::vector<Offset> reads;
  WaveKernel kernel;
  std::map<Point, Value> boundary;

  /// Every out-of-domain point some iteration reads.
  std::set<Point> boundary_reads() const;
  /// Fills the boundary map with a constant for all boundary reads.
  void fill_boundary(const Value& v);
};

struct DependencePlan {
  std::vector<std::vector<Point>> layers;          // wavefronts, in execution order
  std::vector<std::pair<Point, Point>> edges;      // (predecessor, consumer)
  std::optional<std::vector<long long>> normal;    // affine certificate, if any
};

/// Layer t holds the points whose in-domain predecessors all lie in layers
/// < t. Rejects a program with a non-lex-positive read offset. The normal
/// is reported only when an integer vector n with n.d > 0 for every offset
/// exists (searched over small coefficients).
DependencePlan ready_wavefronts(const PredecessorProgram& prog);

using ConeCache = std::map<Point, std::set<Point>>;

/// Transitive closure of in-domain immediate predecessors.
std::set<Point> dependence_cone(const PredecessorProgram& prog, const Point& p,
                                ConeCache* cache = nullptr);

/// True iff no point of the set lies in another's dependence cone.
bool check_parallel_set(const PredecessorProgram& prog, const std::vector<Point>& points,
                        ConeCache* cache = nullptr);

/// Evaluates layers in order; within a layer the order is shuffled by the
/// seed (0 = natural order). The result is exact and equals sequential
/// execution. Throws EvalError on a missing boundary datum.
std::map<Point, Value> execute_wavefront(const PredecessorProgram& prog, uint64_t shuffle_seed = 0);

/// Lexicographic reference execution.
std::map<Point, Value> execute_sequential(const PredecessorProgram& prog);

}  // namespace psw::dep
