#include <doctest.h>

#include <random>

#include "ilppw/instance.hpp"
#include "ilppw/oracle.hpp"
#include "reference.hpp"

using namespace ilppw;

namespace {

const char* kExample = "-2 x1 + 3 x2 + 1 x3 = 0 ; 1 x1 + -2 x2 + 1 x3 = 0";

std::vector<Int> row_of(const IlpInstance& inst, std::size_t j) {
  auto r = inst.row(j);
  return {r.begin(), r.end()};
}

}  // namespace

TEST_SUITE("instance") {
  TEST_CASE("example instance parses to its matrix") {
    const IlpInstance inst = parse_instance(kExample);
    CHECK(inst.num_vars() == 3);
    CHECK(inst.num_constraints() == 2);
    CHECK(row_of(inst, 0) == std::vector<Int>{-2, 3, 1});
    CHECK(row_of(inst, 1) == std::vector<Int>{1, -2, 1});
    CHECK(inst.rhs(0) == 0);
    CHECK(inst.rhs(1) == 0);
    CHECK(inst.var_names() == std::vector<std::string>{"x1", "x2", "x3"});
    CHECK(inst.num_slack() == 0);
    CHECK(inst.rhs_is_zero());
  }

  TEST_CASE("single variable identity") {
    const IlpInstance inst = parse_instance("1 x1 = 0");
    CHECK(inst.num_vars() == 1);
    CHECK(row_of(inst, 0) == std::vector<Int>{1});
    CHECK(inst.rhs(0) == 0);
  }

  TEST_CASE("less-or-equal gains a +1 slack column") {
    const IlpInstance inst = parse_instance("1 x1 + 1 x2 <= 2");
    CHECK(row_of(inst, 0) == std::vector<Int>{1, 1, 1});
    CHECK(inst.rhs(0) == 2);
    CHECK(inst.is_slack(2));
    CHECK_FALSE(inst.is_slack(0));
    CHECK(inst.var_name(2) == "_s1");
  }

  TEST_CASE("slack and surplus conventions") {
    const IlpInstance le = parse_instance("1 x1 <= 3");
    CHECK(row_of(le, 0) == std::vector<Int>{1, 1});
    CHECK(le.rhs(0) == 3);
    const IlpInstance ge = parse_instance("1 x1 >= 2");
    CHECK(row_of(ge, 0) == std::vector<Int>{1, -1});
    CHECK(ge.rhs(0) == 2);
  }

  TEST_CASE("slack columns follow user variables, one per inequality") {
    const IlpInstance inst = parse_instance("x + y <= 4\nx - y >= 1\n2 x + 3 y = 7\n");
    REQUIRE(inst.num_vars() == 4);
    CHECK(row_of(inst, 0) == std::vector<Int>{1, 1, 1, 0});
    CHECK(row_of(inst, 1) == std::vector<Int>{1, -1, 0, -1});
    CHECK(row_of(inst, 2) == std::vector<Int>{2, 3, 0, 0});
    CHECK(inst.num_slack() == 2);
  }

  TEST_CASE("standard form of equalities is unchanged") {
    const auto raw = parse_constraints(kExample);
    const IlpInstance inst = to_standard_form(raw);
    CHECK(inst == parse_instance(kExample));
    CHECK(inst.num_slack() == 0);
  }

  TEST_CASE("variable order follows first appearance") {
    const IlpInstance inst = parse_instance("3 y = 3\n1 x + 1 y = 2\n");
    CHECK(inst.var_names() == std::vector<std::string>{"y", "x"});
    CHECK(row_of(inst, 1) == std::vector<Int>{1, 1});
    CHECK(row_of(inst, 0) == std::vector<Int>{3, 0});
  }

  TEST_CASE("comments, blank lines and bare identifiers") {
    const IlpInstance inst = parse_instance("# header\n\n  x - 2 y = -1  # trailing\n");
    CHECK(row_of(inst, 0) == std::vector<Int>{1, -2});
    CHECK(inst.rhs(0) == -1);
  }

  TEST_CASE("format then parse round-trips") {
    const IlpInstance inst = parse_instance("x + y <= 4\nx - y >= 1\n2 x + 3 y = 7\n");
    CHECK(parse_instance(format_instance(inst)).var_names() == inst.var_names());
    const IlpInstance again = parse_instance(format_instance(inst));
    for (std::size_t j = 0; j < inst.num_constraints(); ++j) CHECK(row_of(again, j) == row_of(inst, j));
  }

  TEST_CASE("syntax errors report line and column") {
    try {
      parse_instance("x = 1\n2 x + = 3\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() >= 1);
    }
    CHECK_THROWS_AS(parse_instance("x = y"), ParseError);
    CHECK_THROWS_AS(parse_instance("x == 1"), ParseError);
    CHECK_THROWS_AS(parse_instance("x = 1.5"), ParseError);
    CHECK_THROWS_AS(parse_instance("x + 1"), ParseError);
  }

  TEST_CASE("duplicate variable inside a constraint is rejected") {
    CHECK_THROWS_AS(parse_instance("1 x + 2 x = 3"), ParseError);
  }

  TEST_CASE("empty constraint set is rejected") {
    CHECK_THROWS_AS(parse_instance(""), ParseError);
    CHECK_THROWS_AS(parse_instance("# only a comment\n\n"), ParseError);
  }

  TEST_CASE("reserved right-hand-side name is rejected") {
    CHECK_THROWS_AS(parse_instance("1 b = 1"), ParseError);
    CHECK_THROWS_AS(IlpInstance(1, 1, {1}, {0}, {"b"}), Error);
    CHECK_THROWS_AS(IlpInstance(1, 2, {1, 1}, {0}, {"x", "x"}), Error);
  }

  TEST_CASE("constructor validates dimensions") {
    CHECK_THROWS_AS(IlpInstance(1, 2, {1}, {0}, {"x", "y"}), Error);
    CHECK_THROWS_AS(IlpInstance(2, 1, {1, 1}, {0}, {"x"}), Error);
    CHECK_THROWS_AS(IlpInstance::from_rows({}, {}), Error);
  }

  TEST_CASE("evaluate examples") {
    const IlpInstance inst = parse_instance(kExample);
    CHECK(evaluate(inst, std::vector<Int>{5, 3, 1}) == std::vector<Int>{0, 0});
    CHECK(evaluate(inst, std::vector<Int>{0, 0, 0}) == std::vector<Int>{0, 0});
    const IlpInstance parity = IlpInstance::from_rows({{2}}, {1});
    CHECK(evaluate(parity, std::vector<Int>{1}) == std::vector<Int>{1});
    CHECK(is_solution(inst, std::vector<Int>{5, 3, 1}));
    CHECK_FALSE(is_solution(parity, std::vector<Int>{1}));
  }

  TEST_CASE("evaluate rejects length mismatch and overflow") {
    const IlpInstance inst = parse_instance(kExample);
    CHECK_THROWS_AS(evaluate(inst, std::vector<Int>{1, 2}), Error);
    const IlpInstance big = IlpInstance::from_rows({{std::numeric_limits<Int>::max(), 1}}, {0});
    CHECK_THROWS_AS(evaluate(big, std::vector<Int>{2, 0}), OverflowError);
  }

  TEST_CASE("solutions are non-negative") {
    CHECK_THROWS_AS(Solution(std::vector<Int>{1, -1}), Error);
    const Solution s(std::vector<Int>{5, 3, 1});
    CHECK(s.largest() == 5);
    CHECK_FALSE(s.is_zero());
    CHECK(Solution(std::vector<Int>{0, 0}).is_zero());
    CHECK(to_string(s) == "(5,3,1)");
  }

  TEST_CASE("label coefficients put -b at label 0") {
    const IlpInstance inst = IlpInstance::from_rows({{2, -1}}, {3});
    CHECK(inst.label_coeff(0, 0) == -3);
    CHECK(inst.label_coeff(0, 1) == 2);
    CHECK(inst.label_coeff(0, 2) == -1);
    CHECK(inst.max_abs_coeff(0) == 2);
  }

  TEST_CASE("slack completion and projection") {
    const IlpInstance inst = parse_instance("x + y <= 4\nx - y >= 1\n2 x + 3 y = 7\n");
    const Solution s = complete_slack(inst, std::vector<Int>{2, 1});
    CHECK(s == Solution(std::vector<Int>{2, 1, 1, 0}));
    CHECK(is_solution(inst, s));
    CHECK(project_slack(inst, s) == std::vector<Int>{2, 1});
    CHECK_THROWS_AS(complete_slack(inst, std::vector<Int>{5, 0}), Error);
    CHECK_THROWS_AS(complete_slack(inst, std::vector<Int>{1}), Error);
  }

  TEST_CASE("zero rows are allowed") {
    const IlpInstance ok = IlpInstance::from_rows({{0, 0}}, {0});
    CHECK(is_solution(ok, std::vector<Int>{3, 4}));
    const IlpInstance bad = IlpInstance::from_rows({{0, 0}}, {1});
    CHECK_FALSE(is_solution(bad, std::vector<Int>{0, 0}));
  }

  TEST_CASE("standard form preserves feasibility on small instances") {
    // Inequality systems checked directly against their slack forms.
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Int> coef(-2, 2), rhs(-3, 3);
    std::uniform_int_distribution<int> rel(0, 2);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<RawConstraint> raw(2);
      for (auto& c : raw) {
        c.terms = {{"x", coef(rng)}, {"y", coef(rng)}};
        c.relation = static_cast<Relation>(rel(rng));
        c.rhs = rhs(rng);
      }
      bool direct = false;
      for (Int x = 0; x <= 6 && !direct; ++x) {
        for (Int y = 0; y <= 6 && !direct; ++y) {
          bool all = true;
          for (const auto& c : raw) {
            const Int lhs = c.terms[0].coefficient * x + c.terms[1].coefficient * y;
            all = all && (c.relation == Relation::kEqual       ? lhs == c.rhs
                          : c.relation == Relation::kLessEqual ? lhs <= c.rhs
                                                               : lhs >= c.rhs);
          }
          direct = all;
        }
      }
      const IlpInstance inst = to_standard_form(raw);
      // Slack values can reach |lhs - rhs| <= 2*6*2 + 3.
      std::vector<Int> box(inst.num_vars(), 6);
      for (std::size_t i = 2; i < inst.num_vars(); ++i) box[i] = 27;
      const bool via_slack = !enumerate_solutions(inst, box).solutions.empty();
      CHECK(direct == via_slack);
    }
  }
}
