#include <doctest.h>

#include <random>

#include "ilppw/decomposition.hpp"
#include "ilppw/oracle.hpp"
#include "ilppw/pipeline.hpp"
#include "reference.hpp"

using namespace ilppw;

namespace {

IlpInstance example() { return IlpInstance::from_rows({{-2, 3, 1}, {1, -2, 1}}, {0, 0}); }
const Solution kFig(std::vector<Int>{5, 3, 1});

// Variable part (labels 1..n) of a counter vector.
std::vector<Int> vars(const std::vector<Int>& c) { return {c.begin() + 1, c.end()}; }

std::vector<Int> target_row(const BlockTable& t, std::size_t k, std::size_t j) {
  return {t[k][j].begin() + 1, t[k][j].end()};
}

}  // namespace

TEST_SUITE("decomposition") {
  TEST_CASE("counters after each reduce on the worked example") {
    const ScheduleTrace t = schedule(example(), kFig);
    REQUIRE(t.num_reduces() == 5);
    CHECK(t.largest == 5);
    CHECK_FALSE(t.includes_rhs);
    const std::vector<std::vector<Int>> expected{{0, 2, 4}, {0, 4, 3}, {0, 1, 2}, {0, 3, 1}, {0, 0, 0}};
    for (std::size_t k = 1; k <= 5; ++k) CHECK(vars(t.c_after_reduce(k)) == expected[k - 1]);
    // The closed form agrees.
    const auto closed = ref::counters_after_reduce({5, 3, 1});
    for (std::size_t k = 1; k <= 5; ++k) CHECK(vars(t.c_after_reduce(k)) == closed[k - 1]);
  }

  TEST_CASE("first residue trace on the worked example") {
    const ScheduleTrace t = schedule(example(), kFig);
    const std::vector<Int> r1{2, 3, 1, 2, 0};
    for (std::size_t k = 1; k <= 5; ++k) CHECK(t.r_after_reduce(k)[0] == r1[k - 1]);
  }

  TEST_CASE("second residue trace follows the counter identity") {
    const IlpInstance inst = example();
    const ScheduleTrace t = schedule(inst, kFig);
    // Recomputed from the counters, then frozen.
    const std::vector<Int> frozen{0, -1, 0, -1, 0};
    const auto closed = ref::counters_after_reduce({5, 3, 1});
    for (std::size_t k = 1; k <= 5; ++k) {
      const auto r = ref::residues_from_counters(inst, closed[k - 1], 5);
      CHECK(r[1] == frozen[k - 1]);
      CHECK(t.r_after_reduce(k)[1] == frozen[k - 1]);
    }
  }

  TEST_CASE("increase order and rounds") {
    const ScheduleTrace t = schedule(example(), kFig);
    CHECK(t.increased_in_round(1) == std::vector<std::size_t>{1, 2, 3});
    CHECK(t.increased_in_round(2) == std::vector<std::size_t>{1, 2});
    CHECK(t.increased_in_round(3) == std::vector<std::size_t>{1});
    CHECK(t.increased_in_round(4) == std::vector<std::size_t>{1, 2});
    CHECK(t.increased_in_round(5) == std::vector<std::size_t>{1});
    std::vector<Int> counts(4, 0);
    for (const auto& e : t.steps) {
      if (e.is_increase()) ++counts[e.label];
    }
    CHECK(counts == std::vector<Int>{0, 5, 3, 1});
    CHECK(t.c_history.back() == std::vector<Int>{0, 0, 0, 0});
  }

  TEST_CASE("open-edge targets on the worked example") {
    const BlockTable t = choose_open_targets(example(), schedule(example(), kFig));
    REQUIRE(t.size() == 5);
    const std::vector<std::vector<Int>> row1{{0, 2, 0}, {0, 3, 0}, {0, 1, 0}, {0, 2, 0}, {0, 0, 0}};
    const std::vector<std::vector<Int>> row2{{0, -1, 1}, {0, -2, 1}, {0, -1, 1}, {0, -2, 1}, {0, 0, 0}};
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(target_row(t, k, 0) == row1[k]);
      CHECK(target_row(t, k, 1) == row2[k]);
    }
  }

  TEST_CASE("positive and negative residue parts on the worked example") {
    const SpecialFormGraph sf = build_special_form(example(), kFig, schedule(example(), kFig));
    const std::vector<Fraction> pos{{4, 5}, {3, 5}, {2, 5}, {1, 5}, {0}};
    const std::vector<Fraction> neg{{-4, 5}, {-8, 5}, {-2, 5}, {-6, 5}, {0}};
    REQUIRE(sf.r_pos.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(sf.r_pos[k][1] == pos[k]);
      CHECK(sf.r_neg[k][1] == neg[k]);
      CHECK(sf.r_pos[k][0] + sf.r_neg[k][0] == Fraction(std::vector<Int>{2, 3, 1, 2, 0}[k]));
    }
  }

  TEST_CASE("special form structure") {
    const IlpInstance inst = example();
    const SpecialFormGraph sf = build_special_form(inst, kFig, schedule(inst, kFig));
    CHECK(validate_graph(inst, sf.graph).accepted);
    CHECK(sol_of(sf.graph) == kFig);
    REQUIRE(sf.vertex_blocks.size() == 5);
    // At most one vertex per variable label in each block.
    for (const auto& block : sf.vertex_blocks) {
      std::vector<int> seen(4, 0);
      for (VertexId v : block) {
        const std::size_t label = sf.graph.vertices[v].label;
        if (label > 0) CHECK(++seen[label] <= 1);
      }
    }
    // Edges of the first k blocks only touch the first k vertex blocks, and
    // open stub counts match the targets.
    for (std::size_t k = 0; k < sf.edge_blocks.size(); ++k) {
      for (std::size_t e : sf.edge_blocks[k]) {
        CHECK(sf.block_of[sf.graph.edges[e].u] <= k + 1);
        CHECK(sf.block_of[sf.graph.edges[e].v] <= k + 1);
      }
      for (std::size_t j = 0; j < inst.num_constraints(); ++j) {
        for (std::size_t i = 1; i <= inst.num_vars(); ++i) {
          CHECK(sf.open[k][j][i] == sf.targets[k][j][i]);
          CHECK(std::abs(sf.targets[k][j][i]) <= std::abs(inst.coeff(j, i - 1)));
        }
      }
    }
  }

  TEST_CASE("worked example decomposition") {
    const IlpInstance inst = example();
    const SpecialFormGraph sf = build_special_form(inst, kFig, schedule(inst, kFig));
    const PathDecomposition pd = decompose(sf);
    const DecompositionVerdict v = validate_decomposition(sf.graph, pd);
    CHECK(v.valid);
    CHECK(pd.width() <= 5);
    CHECK(v.width == pd.width());
    CHECK(max_label_occupancy(sf.graph, pd) <= 2);
  }

  TEST_CASE("single matched pair") {
    const IlpInstance inst = IlpInstance::from_rows({{1, -1}}, {0});
    const Solution s(std::vector<Int>{1, 1});
    const ScheduleTrace t = schedule(inst, s);
    CHECK(t.num_reduces() == 1);
    const SpecialFormGraph sf = build_special_form(inst, s, t);
    const PathDecomposition pd = decompose(sf);
    CHECK(pd.bags.size() == 1);
    CHECK(validate_decomposition(sf.graph, pd).valid);
    // The lone b-vertex shares the bag with the matched pair.
    CHECK(pd.bags[0].size() <= 3);
    CHECK(max_label_occupancy(sf.graph, pd) == 1);
  }

  TEST_CASE("zero solution gives an empty trace and the bag {b}") {
    const IlpInstance inst = example();
    const Solution zero(std::vector<Int>{0, 0, 0});
    const ScheduleTrace t = schedule(inst, zero);
    CHECK(t.steps.empty());
    CHECK(t.num_reduces() == 0);
    const PathDecomposition pd = decompose(build_special_form(inst, zero, t));
    REQUIRE(pd.bags.size() == 1);
    CHECK(pd.bags[0] == std::vector<VertexId>{0});
    CHECK(pd.width() == 0);
  }

  TEST_CASE("schedule rejects non-solutions") {
    CHECK_THROWS_AS(schedule(example(), Solution(std::vector<Int>{1, 0, 0})), Error);
    CHECK_THROWS_AS(schedule(example(), Solution(std::vector<Int>{1, 0})), Error);
  }

  TEST_CASE("multiples are represented verbatim") {
    const IlpInstance inst = example();
    const Solution twice(std::vector<Int>{10, 6, 2});
    const ScheduleTrace t = schedule(inst, twice);
    CHECK(t.num_reduces() == 10);
    const SpecialFormGraph sf = build_special_form(inst, twice, t);
    CHECK(sol_of(sf.graph) == twice);
  }

  TEST_CASE("non-zero right-hand side schedules the b column first") {
    const IlpInstance inst = IlpInstance::from_rows({{2, 1}}, {5});
    const Solution s(std::vector<Int>{2, 1});
    const ScheduleTrace t = schedule(inst, s);
    CHECK(t.includes_rhs);
    REQUIRE_FALSE(t.steps.empty());
    CHECK(t.steps.front() == ScheduleEvent::increase(0));
    CHECK(check_counter_invariants(inst, s, t).ok);
    const SpecialFormGraph sf = build_special_form(inst, s, t);
    CHECK(sf.rhs_in_every_bag);
    const PathDecomposition pd = decompose(sf);
    for (const auto& bag : pd.bags) CHECK(std::find(bag.begin(), bag.end(), 0) != bag.end());
    CHECK(validate_decomposition(sf.graph, pd).valid);
    CHECK(pd.width() <= 4);
  }

  TEST_CASE("single bag holding everything is valid") {
    const IlpInstance inst = example();
    const SolutionGraph g = build_graph(inst, kFig);
    PathDecomposition pd;
    pd.bags.emplace_back();
    for (const auto& v : g.vertices) pd.bags[0].push_back(v.id);
    const DecompositionVerdict v = validate_decomposition(g, pd);
    CHECK(v.valid);
    CHECK(v.width == g.vertices.size() - 1);
  }

  TEST_CASE("deleting an interior bag breaks the decomposition") {
    const IlpInstance inst = example();
    const SpecialFormGraph sf = build_special_form(inst, kFig, schedule(inst, kFig));
    PathDecomposition pd = decompose(sf);
    REQUIRE(pd.bags.size() >= 3);
    pd.bags.erase(pd.bags.begin() + 1);
    const DecompositionVerdict v = validate_decomposition(sf.graph, pd);
    CHECK_FALSE(v.valid);
    CHECK(v.failed_condition >= 1);
  }

  TEST_CASE("validation conditions") {
    SolutionGraph g;
    g.num_vars = 2;
    g.num_constraints = 1;
    g.vertices = {{0, 0}, {1, 1}, {2, 2}};
    g.edges = {{1, 2, 1}};
    PathDecomposition missing{{{0, 1}}};
    CHECK(validate_decomposition(g, missing).failed_condition == 1);
    PathDecomposition split{{{0, 1}, {0, 2}}};
    CHECK(validate_decomposition(g, split).failed_condition == 2);
    PathDecomposition gap{{{0, 1, 2}, {1}, {0}}};
    CHECK(validate_decomposition(g, gap).failed_condition == 3);
    PathDecomposition ok{{{0}, {1, 2}}};
    CHECK(validate_decomposition(g, ok).valid);
  }

  TEST_CASE("JSON and text export") {
    PathDecomposition pd{{{0, 1, 6, 9}, {2, 6, 7, 9}}};
    const std::string json = decomposition_to_json(pd);
    CHECK(json == R"({"bags":[[0,1,6,9],[2,6,7,9]],"width":3})");
    CHECK(decomposition_from_json(json).bags == pd.bags);
    CHECK(decomposition_to_text(pd) == "bag 1: 0 1 6 9\nbag 2: 2 6 7 9\n");
    CHECK_THROWS(decomposition_from_json("{\"bags\": 3}"));
  }

  TEST_CASE("trace dump") {
    const std::string text = trace_to_text(example(), schedule(example(), kFig));
    CHECK(text.find("increase x1") != std::string::npos);
    CHECK(text.find("reduce") != std::string::npos);
  }

  TEST_CASE("width, occupancy and counters on random instances") {
    std::mt19937_64 rng(1234);
    std::size_t checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const IlpInstance inst = random_instance(rng);
      const std::size_t n = inst.num_vars();
      const std::size_t limit = inst.rhs_is_zero() ? 2 * n - 1 : 2 * n;
      for (const auto& x : ref::all_solutions(inst, 5)) {
        const Solution s(x);
        const ScheduleTrace t = schedule(inst, s);
        const CounterCheck cc = check_counter_invariants(inst, s, t);
        CHECK_MESSAGE(cc.ok, cc.detail);
        const SpecialFormGraph sf = build_special_form(inst, s, t);
        const PathDecomposition pd = decompose(sf);
        CHECK(validate_decomposition(sf.graph, pd).valid);
        CHECK(pd.width() <= limit);
        CHECK(max_label_occupancy(sf.graph, pd) <= 2);
        ++checked;
      }
    }
    CHECK(checked > 200);
  }

  TEST_CASE("counter check detects a tampered trace") {
    const IlpInstance inst = example();
    ScheduleTrace t = schedule(inst, kFig);
    t.r_history[3][0] += 1;
    CHECK_FALSE(check_counter_invariants(inst, kFig, t).ok);
  }
}
