#include <doctest.h>

#include <random>

#include "ilppw/pipeline.hpp"

using namespace ilppw;

TEST_SUITE("pipeline") {
  TEST_CASE("worked example passes every check") {
    const IlpInstance inst = IlpInstance::from_rows({{-2, 3, 1}, {1, -2, 1}}, {0, 0});
    VerifyOptions opts;
    opts.box = 6;
    const VerifyReport r = verify_instance(inst, opts);
    CHECK(r.ok());
    CHECK(r.solutions == 2);
    CHECK(r.graphs_checked == 2);
    CHECK(r.decompositions_checked == 2);
    CHECK(r.words_checked == 2);
    CHECK(r.automaton == Verdict::kFeasible);
    CHECK(r.boolean_program == Verdict::kFeasible);
    CHECK(r.width_limit == 5);
    CHECK(r.max_width <= 5);
  }

  TEST_CASE("parity reports no solutions and agreeing verdicts") {
    const VerifyReport r = verify_instance(IlpInstance::from_rows({{2}}, {1}));
    CHECK(r.ok());
    CHECK(r.solutions == 0);
    CHECK_FALSE(r.oracle_feasible);
    CHECK(r.automaton == Verdict::kInfeasible);
    CHECK(r.boolean_program == Verdict::kInfeasible);
  }

  TEST_CASE("width limits") {
    CHECK(width_limit(IlpInstance::from_rows({{1, -1}}, {0})) == 3);
    CHECK(width_limit(IlpInstance::from_rows({{1, -1}}, {1})) == 4);
  }

  TEST_CASE("a non-solution is reported, not thrown") {
    const IlpInstance inst = IlpInstance::from_rows({{1, -1}}, {0});
    VerifyReport r;
    verify_solution(inst, Solution(std::vector<Int>{1, 2}), {}, r);
    CHECK_FALSE(r.ok());
  }

  TEST_CASE("random corpus") {
    std::mt19937_64 rng(77);
    VerifyOptions opts;
    opts.box = 5;
    for (int trial = 0; trial < 60; ++trial) {
      const VerifyReport r = verify_instance(random_instance(rng), opts);
      CHECK_MESSAGE(r.ok(), (r.breaches.empty() ? "" : r.breaches.front()));
    }
  }
}
