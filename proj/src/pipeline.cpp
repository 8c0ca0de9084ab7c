#include "ilppw/pipeline.hpp"

#include <algorithm>

#include "ilppw/boolean_program.hpp"
#include "ilppw/decomposition.hpp"
#include "ilppw/solution_graph.hpp"

namespace ilppw {

std::size_t width_limit(const IlpInstance& inst) {
  const std::size_t n = inst.num_vars();
  return inst.rhs_is_zero() ? 2 * n - 1 : 2 * n;
}

void verify_solution(const IlpInstance& inst, const Solution& s, const VerifyOptions& opts,
                     VerifyReport& report) {
  const std::string at = " at " + to_string(s);
  auto breach = [&](const std::string& what) { report.breaches.push_back(what + at); };
  try {
    const SolutionGraph g = build_graph(inst, s);
    const GraphVerdict gv = validate_graph(inst, g);
    if (!gv.accepted) breach("graph rejected (condition " + std::to_string(gv.failed_condition) + "): " + gv.detail);
    if (sol_of(g) != s) breach("sol_of(build_graph) differs");
    ++report.graphs_checked;

    const ScheduleTrace trace = schedule(inst, s);
    const CounterCheck cc = check_counter_invariants(inst, s, trace);
    if (!cc.ok) breach("counter invariant: " + cc.detail);

    const SpecialFormGraph sf = build_special_form(inst, s, trace);
    const PathDecomposition pd = decompose(sf);
    const DecompositionVerdict dv = validate_decomposition(sf.graph, pd);
    if (!dv.valid) breach("decomposition invalid (condition " + std::to_string(dv.failed_condition) + "): " + dv.detail);
    const std::size_t width = pd.width();
    const std::size_t occupancy = max_label_occupancy(sf.graph, pd);
    report.max_width = std::max(report.max_width, width);
    report.max_occupancy = std::max(report.max_occupancy, occupancy);
    if (width > width_limit(inst)) breach("width " + std::to_string(width) + " above " + std::to_string(width_limit(inst)));
    if (occupancy > 2) breach("label occupancy " + std::to_string(occupancy));
    ++report.decompositions_checked;

    const Word w = schedule_to_word(inst, trace, opts.multiplier);
    if (parikh(inst, w) != s) breach("parikh(schedule_to_word) differs");
    if (!IlpAutomaton(inst, opts.multiplier).accepts(w)) breach("schedule word rejected");
    ++report.words_checked;
  } catch (const Error& e) {
    breach(std::string("exception: ") + e.what());
  }
}

VerifyReport verify_instance(const IlpInstance& inst, const VerifyOptions& opts) {
  VerifyReport report;
  report.width_limit = width_limit(inst);

  const SolutionSet set = enumerate_solutions(inst, opts.box, opts.max_oracle_nodes);
  report.solutions = set.solutions.size();
  report.oracle_partial = set.partial;
  report.oracle_feasible = !set.solutions.empty();
  for (const auto& s : set.solutions) {
    if (!is_solution(inst, s)) report.breaches.push_back("oracle listed a non-solution " + to_string(s));
    verify_solution(inst, s, opts, report);
  }

  const FeasibilityResult fr = check_feasible(inst, opts.multiplier, opts.max_states);
  report.automaton = fr.verdict;
  report.automaton_states = fr.states_explored;
  if (fr.witness && !is_solution(inst, parikh(inst, *fr.witness))) {
    report.breaches.push_back("automaton witness " + format_word(inst, *fr.witness) + " is not a solution");
  }
  if (report.oracle_feasible && fr.verdict == Verdict::kInfeasible) {
    report.breaches.push_back("oracle feasible but automaton infeasible");
  }

  const BpResult bp = interpret_boolean_program(emit_boolean_program(inst, opts.multiplier), opts.max_states);
  report.boolean_program = bp.verdict;
  if (fr.verdict != Verdict::kInconclusive && bp.verdict != Verdict::kInconclusive && bp.verdict != fr.verdict) {
    report.breaches.push_back("boolean program says " + to_string(bp.verdict) + ", automaton says " +
                              to_string(fr.verdict));
  }
  return report;
}

}  // namespace ilppw
