#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ilppw/arith.hpp"
#include "ilppw/instance.hpp"
#include "ilppw/solution_graph.hpp"

namespace ilppw {

// ---------------------------------------------------------------------------
// INCREASE / REDUCE schedule
// ---------------------------------------------------------------------------

struct ScheduleEvent {
  enum class Kind { kIncrease, kReduce };
  Kind kind = Kind::kReduce;
  std::size_t label = 0;  // meaningful for kIncrease only

  static ScheduleEvent increase(std::size_t label) { return {Kind::kIncrease, label}; }
  static ScheduleEvent reduce() { return {Kind::kReduce, 0}; }
  bool is_increase() const { return kind == Kind::kIncrease; }

  friend bool operator==(const ScheduleEvent&, const ScheduleEvent&) = default;
};

// Counter run driving the block order. Counters are indexed by label: entry 0
// is the b column, which takes part (with s_0 = 1 and coefficients -b_j) only
// when b is non-zero; otherwise it stays at 0.
struct ScheduleTrace {
  std::size_t num_vars = 0;
  Int largest = 0;            // s_l
  bool includes_rhs = false;  // label 0 is scheduled
  std::vector<Int> multiplicity;  // s_i per label, s_0 = 1 when includes_rhs
  std::vector<ScheduleEvent> steps;
  std::vector<std::vector<Int>> c_history;  // after each step, size n+1
  std::vector<std::vector<Int>> r_history;  // after each step, size m

  std::size_t num_reduces() const;
  // c and r right after the k-th reduce (k is 1-based).
  const std::vector<Int>& c_after_reduce(std::size_t k) const;
  const std::vector<Int>& r_after_reduce(std::size_t k) const;
  // Labels increased between the (k-1)-th and k-th reduce, ascending.
  std::vector<std::size_t> increased_in_round(std::size_t k) const;
};

// Runs the counters: increase the lowest label with c_i < s_i until none is
// left, then reduce; stops after exactly s_l reduces. The zero solution of a
// homogeneous system yields an empty trace.
ScheduleTrace schedule(const IlpInstance& inst, const Solution& s);

struct CounterCheck {
  bool ok = true;
  std::string detail;
};

// Re-derives the counter invariants on a trace: 0 <= c_i < 2 s_l, c_i <= s_l
// after each reduce, r_j s_l = sum_i c_i a_{j,i} at every step, |r_j| below
// 2 * (#columns) * max |coefficient| and everything zero at the end.
CounterCheck check_counter_invariants(const IlpInstance& inst, const Solution& s,
                                      const ScheduleTrace& trace);

// ---------------------------------------------------------------------------
// Special form
// ---------------------------------------------------------------------------

// Per-block tables are indexed [k-1][j][label] with label in 0..n.
using BlockTable = std::vector<std::vector<std::vector<Int>>>;

struct SpecialFormGraph {
  SolutionGraph graph;
  bool rhs_in_every_bag = false;
  std::vector<std::vector<VertexId>> vertex_blocks;   // V^1..V^t
  std::vector<std::vector<std::size_t>> edge_blocks;  // E^1..E^t, indices into graph.edges
  BlockTable targets;    // c^k_{j,i}, signed like a_{j,i}
  BlockTable pre_open;   // d^{k-1}_{j,i}, open stubs before E^k is added, signed
  BlockTable open;       // open_{j,i}(V^1..V^k) after E^k, signed
  std::vector<std::vector<Fraction>> r_pos;  // [k-1][j]
  std::vector<std::vector<Fraction>> r_neg;
  // Block index k (1-based) after which the vertex is fully matched.
  std::vector<std::size_t> matched_after;
  std::vector<std::size_t> block_of;  // 1-based block of each vertex
};

SpecialFormGraph build_special_form(const IlpInstance& inst, const Solution& s,
                                    const ScheduleTrace& trace);

// Picks c^k_{j,i} for every block and row. Exposed for testing; throws if no
// choice satisfies the rounding and monotonicity conditions.
BlockTable choose_open_targets(const IlpInstance& inst, const ScheduleTrace& trace);

// ---------------------------------------------------------------------------
// Path decompositions
// ---------------------------------------------------------------------------

struct PathDecomposition {
  std::vector<std::vector<VertexId>> bags;  // each sorted ascending
  std::size_t width() const;
};

PathDecomposition decompose(const SpecialFormGraph& sf);

struct DecompositionVerdict {
  bool valid = true;
  int failed_condition = 0;  // 1 vertex coverage, 2 edge coverage, 3 contiguity, 0 if valid
  std::string detail;
  std::size_t width = 0;
};

DecompositionVerdict validate_decomposition(const SolutionGraph& g, const PathDecomposition& pd);

// Largest number of vertices sharing one variable label (1..n) in any bag.
std::size_t max_label_occupancy(const SolutionGraph& g, const PathDecomposition& pd);

std::string decomposition_to_json(const PathDecomposition& pd);
std::string decomposition_to_text(const PathDecomposition& pd);
PathDecomposition decomposition_from_json(const std::string& text);

std::string trace_to_text(const IlpInstance& inst, const ScheduleTrace& trace);

}  // namespace ilppw
