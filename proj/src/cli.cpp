#include "ilppw/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "ilppw/automaton.hpp"
#include "ilppw/boolean_program.hpp"
#include "ilppw/decomposition.hpp"
#include "ilppw/oracle.hpp"
#include "ilppw/pipeline.hpp"
#include "ilppw/solution_graph.hpp"

namespace ilppw::cli {

using Json = nlohmann::ordered_json;

nlohmann::ordered_json RunReport::to_json() const {
  Json j;
  j["subcommand"] = subcommand;
  j["exit_code"] = exit_code;
  for (const auto& [k, v] : fields.items()) j[k] = v;
  return j;
}

namespace {

void render(std::ostream& out, const std::string& prefix, const Json& value) {
  if (value.is_object()) {
    for (const auto& [k, v] : value.items()) render(out, prefix.empty() ? k : prefix + "." + k, v);
  } else if (value.is_string()) {
    out << prefix << ": " << value.get<std::string>() << '\n';
  } else {
    out << prefix << ": " << value.dump() << '\n';
  }
}

}  // namespace

std::string RunReport::to_text() const {
  std::ostringstream out;
  render(out, "", to_json());
  return out.str();
}

Solution parse_solution_arg(const IlpInstance& inst, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) throw Error("empty entry in solution '" + text + "'");
    parts.push_back(item);
  }
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    Int v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw Error("bad value '" + s + "' in solution");
    return v;
  };

  const bool named = std::any_of(parts.begin(), parts.end(), [](const std::string& p) {
    return p.find('=') != std::string::npos;
  });
  std::vector<Int> values;
  if (!named) {
    for (const auto& p : parts) values.push_back(number(p));
    if (std::any_of(values.begin(), values.end(), [](Int v) { return v < 0; })) {
      throw Error("solution values must be non-negative");
    }
    return complete_slack(inst, values);
  }

  values.assign(inst.num_vars(), 0);
  std::vector<bool> given(inst.num_vars(), false);
  bool slack_given = false;
  for (const auto& p : parts) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw Error("mixed named and positional values in solution");
    const std::string name = p.substr(0, eq);
    const std::size_t col = inst.find_var(name);
    if (col == inst.num_vars()) throw Error("unknown variable '" + name + "' in solution");
    if (given[col]) throw Error("variable '" + name + "' given twice in solution");
    given[col] = true;
    values[col] = number(p.substr(eq + 1));
    if (values[col] < 0) throw Error("solution values must be non-negative");
    slack_given = slack_given || inst.is_slack(col);
  }
  if (slack_given) return Solution(values);
  values.resize(inst.num_vars() - inst.num_slack());
  return complete_slack(inst, values);
}

namespace {

struct Options {
  std::string file;
  Int multiplier = kDefaultMultiplier;
  std::size_t max_states = kDefaultMaxStates;
  Int box = 10;
  std::uint64_t seed = 1;
  std::size_t random = 0;
  std::string solution;
  std::string output;
  std::string csv;
  bool export_dot = false;
  std::size_t export_limit = 10'000;
  bool json = false;
  unsigned threads = 1;
};

IlpInstance load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

Json summary(const IlpInstance& inst) {
  Int cmin = 0, cmax = 0, bmin = 0, bmax = 0;
  bool first = true;
  for (std::size_t j = 0; j < inst.num_constraints(); ++j) {
    for (Int a : inst.row(j)) {
      cmin = first ? a : std::min(cmin, a);
      cmax = first ? a : std::max(cmax, a);
      first = false;
    }
    bmin = j == 0 ? inst.rhs(j) : std::min(bmin, inst.rhs(j));
    bmax = j == 0 ? inst.rhs(j) : std::max(bmax, inst.rhs(j));
  }
  Json s;
  s["n"] = inst.num_vars();
  s["m"] = inst.num_constraints();
  s["slack"] = inst.num_slack();
  s["coeff_range"] = Json::array({cmin, cmax});
  s["rhs_range"] = Json::array({bmin, bmax});
  return s;
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::kFeasible: return kExitFeasible;
    case Verdict::kInfeasible: return kExitInfeasible;
    case Verdict::kInconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

Json named_values(const IlpInstance& inst, const Solution& s, bool with_slack) {
  Json j = Json::object();
  for (std::size_t i = 0; i < inst.num_vars(); ++i) {
    if (with_slack || !inst.is_slack(i)) j[inst.var_name(i)] = s[i];
  }
  return j;
}

class Runner {
 public:
  Runner(const Options& opts, std::ostream& out, RunReport& report)
      : opts_(opts), out_(out), report_(report) {}

  // Writes an artifact to --output when given, otherwise to stdout (or into
  // the report under --json).
  void emit(const std::string& key, const std::string& text) {
    if (!opts_.output.empty()) {
      std::ofstream f(opts_.output);
      if (!f) throw Error("cannot write '" + opts_.output + "'");
      f << text;
      report_.fields["outputs"].push_back(opts_.output);
    } else if (opts_.json) {
      report_.fields[key] = text;
    } else {
      out_ << text;
    }
  }

  IlpInstance instance() {
    IlpInstance inst = load(opts_.file);
    report_.fields["file"] = opts_.file;
    report_.fields["instance"] = summary(inst);
    return inst;
  }

  int check(bool project) {
    const IlpInstance inst = instance();
    const FeasibilityResult fr = check_feasible(inst, opts_.multiplier, opts_.max_states);
    report_.fields["verdict"] = to_string(fr.verdict);
    report_.fields["states_explored"] = fr.states_explored;
    if (fr.witness) {
      const Solution s = parikh(inst, *fr.witness);
      if (!project) report_.fields["witness"] = format_word(inst, *fr.witness);
      report_.fields["solution"] = named_values(inst, s, !project);
      if (!project) {
        Json rows = Json::array();
        for (Int r : evaluate(inst, s.values())) rows.push_back(r);
        report_.fields["residual"] = rows;
      }
    }
    return exit_for(fr.verdict);
  }

  int graph() {
    const IlpInstance inst = instance();
    const Solution s = parse_solution_arg(inst, opts_.solution);
    if (!is_solution(inst, s)) throw Error("given values do not solve the instance");
    const SolutionGraph g = build_graph(inst, s);
    const GraphVerdict gv = validate_graph(inst, g);
    report_.fields["vertices"] = g.vertices.size();
    report_.fields["edges"] = g.edges.size();
    report_.fields["accepted"] = gv.accepted;
    emit("dot", to_dot(g, &inst));
    return gv.accepted ? kExitFeasible : kExitInfeasible;
  }

  int decompose_cmd() {
    const IlpInstance inst = instance();
    const Solution s = parse_solution_arg(inst, opts_.solution);
    if (!is_solution(inst, s)) throw Error("given values do not solve the instance");
    const ScheduleTrace trace = schedule(inst, s);
    const SpecialFormGraph sf = build_special_form(inst, s, trace);
    const PathDecomposition pd = decompose(sf);
    const DecompositionVerdict dv = validate_decomposition(sf.graph, pd);
    report_.fields["bags"] = pd.bags.size();
    report_.fields["width"] = pd.width();
    report_.fields["width_limit"] = width_limit(inst);
    report_.fields["valid"] = dv.valid;
    report_.fields["max_label_occupancy"] = max_label_occupancy(sf.graph, pd);
    emit("decomposition", decomposition_to_json(pd) + "\n");
    if (opts_.json) {
      report_.fields["trace"] = trace_to_text(inst, trace);
    } else {
      out_ << trace_to_text(inst, trace);
    }
    return dv.valid ? kExitFeasible : kExitInfeasible;
  }

  int automaton() {
    const IlpInstance inst = instance();
    const ExplicitAutomaton a = export_automaton(inst, opts_.multiplier, opts_.export_limit);
    report_.fields["states"] = a.states.size();
    report_.fields["transitions"] = a.transitions.size();
    report_.fields["final_reachable"] = a.final_state.has_value();
    emit("automaton", opts_.export_dot ? automaton_to_dot(inst, a) : automaton_to_text(inst, a));
    return a.final_state ? kExitFeasible : kExitInfeasible;
  }

  int emit_bp() {
    const IlpInstance inst = instance();
    const std::string text = emit_boolean_program(inst, opts_.multiplier);
    report_.fields["bytes"] = text.size();
    emit("program", text);
    return kExitFeasible;
  }

  int oracle() {
    const IlpInstance inst = instance();
    const SolutionSet set = enumerate_solutions(inst, opts_.box, kDefaultOracleNodes, opts_.threads);
    report_.fields["box"] = opts_.box;
    report_.fields["solutions"] = set.solutions.size();
    report_.fields["partial"] = set.partial;
    report_.fields["nodes"] = set.nodes;
    emit("csv", solutions_to_csv(inst, set));
    if (!set.solutions.empty()) return kExitFeasible;
    return set.partial ? kExitInconclusive : kExitInfeasible;
  }

  int verify() {
    VerifyOptions vo;
    vo.box = opts_.box;
    vo.multiplier = opts_.multiplier;
    vo.max_states = opts_.max_states;
    report_.fields["box"] = opts_.box;

    std::vector<std::pair<std::string, IlpInstance>> corpus;
    if (!opts_.file.empty()) corpus.emplace_back(opts_.file, instance());
    if (opts_.random > 0) {
      std::mt19937_64 rng(opts_.seed);
      report_.fields["seed"] = opts_.seed;
      for (std::size_t i = 0; i < opts_.random; ++i) {
        corpus.emplace_back("random#" + std::to_string(i + 1), random_instance(rng));
      }
    }
    if (corpus.empty()) throw CLI::ValidationError("verify needs FILE or --random N");

    std::size_t solutions = 0, graphs = 0, decompositions = 0, words = 0, failed = 0, inconclusive = 0;
    std::size_t max_width = 0, max_occupancy = 0;
    Json breaches = Json::array();
    for (const auto& [name, inst] : corpus) {
      const VerifyReport r = verify_instance(inst, vo);
      solutions += r.solutions;
      graphs += r.graphs_checked;
      decompositions += r.decompositions_checked;
      words += r.words_checked;
      max_width = std::max(max_width, r.max_width);
      max_occupancy = std::max(max_occupancy, r.max_occupancy);
      if (r.automaton == Verdict::kInconclusive || r.oracle_partial) ++inconclusive;
      if (!r.ok()) ++failed;
      for (const auto& b : r.breaches) breaches.push_back(name + ": " + b);
      if (corpus.size() == 1) {
        report_.fields["oracle_feasible"] = r.oracle_feasible;
        report_.fields["automaton"] = to_string(r.automaton);
        report_.fields["boolean_program"] = to_string(r.boolean_program);
        report_.fields["width_limit"] = r.width_limit;
      }
    }
    report_.fields["instances"] = corpus.size();
    report_.fields["solutions"] = solutions;
    report_.fields["graphs_checked"] = graphs;
    report_.fields["decompositions_checked"] = decompositions;
    report_.fields["words_checked"] = words;
    report_.fields["max_width"] = max_width;
    report_.fields["max_label_occupancy"] = max_occupancy;
    report_.fields["inconclusive"] = inconclusive;
    report_.fields["failed_instances"] = failed;
    report_.fields["breaches"] = breaches;
    report_.fields["status"] = failed ? "FAIL" : "PASS";
    if (failed) return kExitInfeasible;
    return inconclusive ? kExitInconclusive : kExitFeasible;
  }

 private:
  const Options& opts_;
  std::ostream& out_;
  RunReport& report_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, RunReport* report_out) {
  Options opts;
  CLI::App app{"Feasibility of integer linear programs via solution graphs and the ILP automaton", "ilppw"};
  app.require_subcommand(1);

  auto file_arg = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("FILE", opts.file, "instance in ILP-v1 text")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto automaton_flags = [&](CLI::App* sub) {
    sub->add_option("--multiplier", opts.multiplier, "residue bound multiplier")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-states", opts.max_states, "state budget for searches")->capture_default_str();
  };
  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", opts.json, "print the run report as JSON");
    sub->add_option("-o,--output", opts.output, "write the artifact to this file");
  };

  auto* check = app.add_subcommand("check", "decide feasibility and print a witness word");
  file_arg(check);
  automaton_flags(check);
  common(check);

  auto* solve = app.add_subcommand("solve", "print a solution with slack variables projected away");
  file_arg(solve);
  automaton_flags(solve);
  common(solve);

  auto* graph = app.add_subcommand("graph", "DOT rendering of the solution graph of a solution");
  file_arg(graph);
  graph->add_option("--solution", opts.solution, "values, e.g. 5,3,1 or x1=5,x2=3")->required();
  common(graph);

  auto* decomp = app.add_subcommand("decompose", "path decomposition of the special-form solution graph");
  file_arg(decomp);
  decomp->add_option("--solution", opts.solution, "values, e.g. 5,3,1 or x1=5,x2=3")->required();
  common(decomp);

  auto* automaton = app.add_subcommand("automaton", "list the reachable part of the automaton");
  file_arg(automaton);
  automaton_flags(automaton);
  automaton->add_flag("--export", opts.export_dot, "render as DOT instead of text");
  automaton->add_option("--export-limit", opts.export_limit, "refuse to export beyond this many states")
      ->capture_default_str();
  common(automaton);

  auto* emit = app.add_subcommand("emit-bp", "emit the Boolean program");
  file_arg(emit);
  emit->add_option("--multiplier", opts.multiplier, "residue bound multiplier")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  common(emit);

  auto* oracle = app.add_subcommand("oracle", "enumerate solutions inside a box as CSV");
  file_arg(oracle);
  oracle->add_option("--box", opts.box, "upper bound for every variable")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  oracle->add_option("--threads", opts.threads, "worker threads")->capture_default_str();
  common(oracle);

  auto* verify = app.add_subcommand("verify", "cross-check every module on the solutions inside a box");
  file_arg(verify, false);
  automaton_flags(verify);
  verify->add_option("--box", opts.box, "upper bound for every variable")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  verify->add_option("--random", opts.random, "also check N random instances");
  verify->add_option("--seed", opts.seed, "seed for --random")->capture_default_str();
  verify->add_flag("--json", opts.json, "print the run report as JSON");

  RunReport report;
  auto finish = [&](int code) {
    report.exit_code = code;
    if (report_out) *report_out = report;
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return finish(0);
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return finish(kExitUsage);
  }

  CLI::App* chosen = app.get_subcommands().front();
  report.subcommand = chosen->get_name();
  Runner runner(opts, out, report);
  const std::map<std::string, std::function<int()>> dispatch = {
      {"check", [&] { return runner.check(false); }},
      {"solve", [&] { return runner.check(true); }},
      {"graph", [&] { return runner.graph(); }},
      {"decompose", [&] { return runner.decompose_cmd(); }},
      {"automaton", [&] { return runner.automaton(); }},
      {"emit-bp", [&] { return runner.emit_bp(); }},
      {"oracle", [&] { return runner.oracle(); }},
      {"verify", [&] { return runner.verify(); }},
  };

  const auto start = std::chrono::steady_clock::now();
  int code = kExitUsage;
  try {
    code = dispatch.at(report.subcommand)();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return finish(kExitUsage);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    report.fields["error"] = e.what();
    code = kExitInconclusive;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return finish(kExitUsage);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return finish(kExitUsage);
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report.fields["timings"] = Json{{"total_ms", ms}};
  report.exit_code = code;

  if (opts.json) {
    out << report.to_json().dump(2) << "\n";
  } else if (!(report.subcommand == "graph" || report.subcommand == "emit-bp" || report.subcommand == "automaton" ||
               report.subcommand == "oracle" || report.subcommand == "decompose") ||
             !opts.output.empty()) {
    out << report.to_text();
  }
  return finish(code);
}

}  // namespace ilppw::cli
