#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ilppw/automaton.hpp"
#include "ilppw/instance.hpp"
#include "ilppw/oracle.hpp"

namespace ilppw {

struct VerifyOptions {
  Int box = 10;
  Int multiplier = kDefaultMultiplier;
  std::size_t max_states = kDefaultMaxStates;
  std::size_t max_oracle_nodes = kDefaultOracleNodes;
};

// Outcome of the cross-check over one instance. Every entry of `breaches`
// names the failing check and the solution it was found on.
struct VerifyReport {
  std::size_t solutions = 0;
  bool oracle_partial = false;
  bool oracle_feasible = false;
  Verdict automaton = Verdict::kInconclusive;
  Verdict boolean_program = Verdict::kInconclusive;
  std::size_t automaton_states = 0;
  std::size_t graphs_checked = 0;
  std::size_t decompositions_checked = 0;
  std::size_t words_checked = 0;
  std::size_t max_width = 0;
  std::size_t width_limit = 0;
  std::size_t max_occupancy = 0;
  std::vector<std::string> breaches;

  bool ok() const { return breaches.empty(); }
};

// Allowed width: 2n, or 2n - 1 for homogeneous systems.
std::size_t width_limit(const IlpInstance& inst);

// Checks a single solution: graph membership and round trip, counter
// invariants, special form, decomposition validity/width/occupancy, and the
// word built from the schedule. Appends to `report`.
void verify_solution(const IlpInstance& inst, const Solution& s, const VerifyOptions& opts,
                     VerifyReport& report);

// Oracle solutions within the box through every check above, then automaton
// versus oracle, witness soundness, and Boolean program versus automaton.
VerifyReport verify_instance(const IlpInstance& inst, const VerifyOptions& opts = {});

}  // namespace ilppw
