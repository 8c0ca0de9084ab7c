#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ilppw/cli.hpp"

using namespace ilppw;
using cli::RunReport;

namespace {

std::string data(const std::string& name) { return std::string(ILPPW_TEST_DATA) + "/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
  RunReport report;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  RunReport report;
  const int code = cli::run(args, out, err, &report);
  return {code, out.str(), err.str(), report};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ilppw_cli_" + name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check on the example is feasible with a zero residual") {
    const Outcome o = run({"check", data("example.ilp")});
    CHECK(o.code == 0);
    CHECK(o.out.find("verdict: feasible") != std::string::npos);
    CHECK(o.report.fields["residual"] == nlohmann::ordered_json::array({0, 0}));
    CHECK(o.report.exit_code == 0);
  }

  TEST_CASE("check on parity is infeasible") {
    const Outcome o = run({"check", data("parity.ilp")});
    CHECK(o.code == 1);
    CHECK(o.out.find("verdict: infeasible") != std::string::npos);
  }

  TEST_CASE("JSON and text renderings agree") {
    const Outcome j = run({"check", data("slack.ilp"), "--json"});
    const auto parsed = nlohmann::ordered_json::parse(j.out);
    CHECK(parsed["exit_code"] == j.code);
    CHECK(parsed["verdict"] == "feasible");
    CHECK(j.report.to_json()["witness"] == parsed["witness"]);
    const std::string text = j.report.to_text();
    CHECK(text.find("witness: " + parsed["witness"].get<std::string>()) != std::string::npos);
    CHECK(text.find("instance.n: 4") != std::string::npos);
  }

  TEST_CASE("solve projects slack") {
    const Outcome o = run({"solve", data("slack.ilp"), "--json"});
    CHECK(o.code == 0);
    const auto parsed = nlohmann::ordered_json::parse(o.out);
    CHECK(parsed["solution"].size() == 2);
    const long long x = parsed["solution"]["x"], y = parsed["solution"]["y"];
    CHECK(2 * x + 3 * y == 7);
    CHECK(x + y <= 4);
    CHECK(x - y >= 1);
  }

  TEST_CASE("graph writes DOT") {
    const Outcome o = run({"graph", data("example.ilp"), "--solution", "5,3,1"});
    CHECK(o.code == 0);
    CHECK(o.out.rfind("graph solution {", 0) == 0);
    const Outcome named = run({"graph", data("slack.ilp"), "--solution", "x=2,y=1"});
    CHECK(named.code == 0);
    CHECK(named.report.fields["vertices"] == 5);
  }

  TEST_CASE("graph rejects a non-solution") {
    const Outcome o = run({"graph", data("example.ilp"), "--solution", "1,1,1"});
    CHECK(o.code == 2);
    CHECK_FALSE(o.err.empty());
  }

  TEST_CASE("decompose prints bags, width and trace") {
    const Outcome o = run({"decompose", data("example.ilp"), "--solution", "x1=5,x2=3,x3=1"});
    CHECK(o.code == 0);
    CHECK(o.out.find("\"bags\"") != std::string::npos);
    CHECK(o.out.find("step 1: increase x1") != std::string::npos);
    const Outcome j = run({"decompose", data("example.ilp"), "--solution", "5,3,1", "--json"});
    const auto parsed = nlohmann::ordered_json::parse(j.out);
    CHECK(parsed["valid"] == true);
    CHECK(parsed["width"].get<int>() <= parsed["width_limit"].get<int>());
  }

  TEST_CASE("automaton export is size gated") {
    const Outcome small = run({"automaton", data("parity.ilp"), "--export"});
    CHECK(small.code == 1);
    CHECK(small.out.find("doublecircle") == std::string::npos);
    const Outcome big = run({"automaton", data("example.ilp"), "--export", "--export-limit", "10"});
    CHECK(big.code == 3);
    CHECK(big.err.find("error") != std::string::npos);
  }

  TEST_CASE("emit-bp to a file") {
    const auto path = temp_file("bp.txt");
    const Outcome o = run({"emit-bp", data("example.ilp"), "-o", path.string()});
    CHECK(o.code == 0);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().rfind("bp 1\n", 0) == 0);
    CHECK(o.out.find("outputs") != std::string::npos);
    std::filesystem::remove(path);
  }

  TEST_CASE("oracle CSV and exit codes") {
    const Outcome o = run({"oracle", data("example.ilp"), "--box", "6"});
    CHECK(o.code == 0);
    CHECK(o.out == "x1,x2,x3\n0,0,0\n5,3,1\n");
    CHECK(run({"oracle", data("parity.ilp"), "--box", "5"}).code == 1);
  }

  TEST_CASE("verify on the example") {
    const Outcome o = run({"verify", data("example.ilp"), "--box", "6"});
    CHECK(o.code == 0);
    CHECK(o.out.find("status: PASS") != std::string::npos);
    CHECK(o.report.fields["solutions"] == 2);
  }

  TEST_CASE("verify on random instances is reproducible") {
    const Outcome a = run({"verify", "--random", "10", "--seed", "5", "--box", "4", "--json"});
    const Outcome b = run({"verify", "--random", "10", "--seed", "5", "--box", "4", "--json"});
    CHECK(a.code == 0);
    CHECK(a.report.fields["solutions"] == b.report.fields["solutions"]);
  }

  TEST_CASE("usage and parse errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"check"}).code == 2);
    CHECK(run({"check", data("missing.ilp")}).code == 2);
    CHECK(run({"verify"}).code == 2);
    CHECK(run({"check", data("example.ilp"), "--multiplier", "0"}).code == 2);
    const auto bad = temp_file("bad.ilp");
    std::ofstream(bad) << "2 x + = 1\n";
    const Outcome o = run({"check", bad.string()});
    CHECK(o.code == 2);
    CHECK(o.err.find("line 1") != std::string::npos);
    std::filesystem::remove(bad);
  }

  TEST_CASE("help exits with 0") {
    const Outcome o = run({"--help"});
    CHECK(o.code == 0);
    CHECK(o.out.find("verify") != std::string::npos);
  }

  TEST_CASE("solution argument parsing") {
    const IlpInstance inst = parse_instance("x + y <= 4\nx - y >= 1\n2 x + 3 y = 7\n");
    CHECK(cli::parse_solution_arg(inst, "2,1") == Solution(std::vector<Int>{2, 1, 1, 0}));
    CHECK(cli::parse_solution_arg(inst, "y=1, x=2") == Solution(std::vector<Int>{2, 1, 1, 0}));
    CHECK(cli::parse_solution_arg(inst, "2,1,1,0") == Solution(std::vector<Int>{2, 1, 1, 0}));
    CHECK_THROWS_AS(cli::parse_solution_arg(inst, "x=2,z=1"), Error);
    CHECK_THROWS_AS(cli::parse_solution_arg(inst, "x=2,x=1"), Error);
    CHECK_THROWS_AS(cli::parse_solution_arg(inst, "2,"), Error);
    CHECK_THROWS_AS(cli::parse_solution_arg(inst, "2,q"), Error);
    CHECK_THROWS_AS(cli::parse_solution_arg(inst, "-1,1"), Error);
  }
}
