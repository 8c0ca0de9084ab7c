#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ilppw/instance.hpp"

namespace ilppw {

// Exhaustive search over the box [0, upper_i] for each variable. Results are
// only ever "within the box"; the automaton gives the unconditional answer.
struct SolutionSet {
  std::vector<Int> box;
  std::vector<Solution> solutions;  // lexicographic
  bool partial = false;             // node budget ran out
  std::size_t nodes = 0;
};

inline constexpr std::size_t kDefaultOracleNodes = 200'000'000;

// threads > 1 splits the range of the first variable; the result is identical
// to the sequential one apart from where a budget cut falls.
SolutionSet enumerate_solutions(const IlpInstance& inst, const std::vector<Int>& box,
                                std::size_t max_nodes = kDefaultOracleNodes, unsigned threads = 1);
SolutionSet enumerate_solutions(const IlpInstance& inst, Int box,
                                std::size_t max_nodes = kDefaultOracleNodes, unsigned threads = 1);

struct OracleVerdict {
  bool feasible = false;  // a solution exists inside the box
  bool partial = false;
  std::optional<Solution> first;
};

OracleVerdict brute_force_feasible(const IlpInstance& inst, Int box,
                                   std::size_t max_nodes = kDefaultOracleNodes);

std::string solutions_to_csv(const IlpInstance& inst, const SolutionSet& set);

// Random instances for property suites: entries uniform in [-max_coeff,
// max_coeff]; with probability `planted_ratio` b is A s for a random s in
// [0, planted_max]^n (resampled until |b_j| <= max_rhs), otherwise uniform in
// [-max_rhs, max_rhs].
struct RandomInstanceOptions {
  std::size_t max_vars = 4;
  std::size_t max_constraints = 3;
  Int max_coeff = 3;
  Int max_rhs = 5;
  double planted_ratio = 0.5;
  Int planted_max = 3;
};

IlpInstance random_instance(std::mt19937_64& rng, const RandomInstanceOptions& opts = {});

}  // namespace ilppw
