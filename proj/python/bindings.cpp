#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ilppw/automaton.hpp"
#include "ilppw/boolean_program.hpp"
#include "ilppw/decomposition.hpp"
#include "ilppw/instance.hpp"
#include "ilppw/oracle.hpp"
#include "ilppw/pipeline.hpp"
#include "ilppw/solution_graph.hpp"

namespace py = pybind11;
using namespace ilppw;

namespace {

Solution to_solution(const IlpInstance& inst, const std::vector<Int>& values) {
  return complete_slack(inst, values);
}

std::vector<Int> to_vec(const Solution& s) { return {s.values().begin(), s.values().end()}; }

py::object verdict_value(Verdict v) {
  switch (v) {
    case Verdict::kFeasible: return py::bool_(true);
    case Verdict::kInfeasible: return py::bool_(false);
    case Verdict::kInconclusive: break;
  }
  return py::none();
}

}  // namespace

PYBIND11_MODULE(_ilppw, m) {
  m.doc() = "Integer linear program feasibility via solution graphs and the ILP automaton";

  auto error = py::register_exception<Error>(m, "IlpError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", error.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error.ptr());

  py::class_<IlpInstance>(m, "Instance")
      .def(py::init([](const std::vector<std::vector<Int>>& rows, const std::vector<Int>& rhs) {
             return IlpInstance::from_rows(rows, rhs);
           }),
           py::arg("rows"), py::arg("rhs"))
      .def_static("parse", [](const std::string& text) { return parse_instance(text); })
      .def_property_readonly("num_vars", &IlpInstance::num_vars)
      .def_property_readonly("num_constraints", &IlpInstance::num_constraints)
      .def_property_readonly("names", &IlpInstance::var_names)
      .def_property_readonly("rows",
                             [](const IlpInstance& inst) {
                               std::vector<std::vector<Int>> rows;
                               for (std::size_t j = 0; j < inst.num_constraints(); ++j) {
                                 auto r = inst.row(j);
                                 rows.emplace_back(r.begin(), r.end());
                               }
                               return rows;
                             })
      .def_property_readonly("rhs",
                             [](const IlpInstance& inst) {
                               return std::vector<Int>(inst.rhs().begin(), inst.rhs().end());
                             })
      .def("is_slack", &IlpInstance::is_slack)
      .def("evaluate", [](const IlpInstance& inst, const std::vector<Int>& x) { return evaluate(inst, x); })
      .def("is_solution", [](const IlpInstance& inst, const std::vector<Int>& x) { return is_solution(inst, x); })
      .def("complete_slack", [](const IlpInstance& inst, const std::vector<Int>& x) {
        return to_vec(complete_slack(inst, x));
      })
      .def("__str__", &format_instance);

  m.def(
      "check_feasible",
      [](const IlpInstance& inst, Int multiplier, std::size_t max_states) {
        const auto r = check_feasible(inst, multiplier, max_states);
        py::dict out;
        out["feasible"] = verdict_value(r.verdict);
        out["states"] = r.states_explored;
        if (r.witness) {
          out["word"] = format_word(inst, *r.witness);
          out["solution"] = to_vec(parikh(inst, *r.witness));
        } else {
          out["word"] = py::none();
          out["solution"] = py::none();
        }
        return out;
      },
      py::arg("instance"), py::arg("multiplier") = kDefaultMultiplier, py::arg("max_states") = kDefaultMaxStates);

  m.def(
      "enumerate_solutions",
      [](const IlpInstance& inst, Int box) {
        const auto set = enumerate_solutions(inst, box);
        std::vector<std::vector<Int>> sols;
        for (const auto& s : set.solutions) sols.push_back(to_vec(s));
        return py::make_tuple(sols, set.partial);
      },
      py::arg("instance"), py::arg("box"));

  m.def(
      "schedule",
      [](const IlpInstance& inst, const std::vector<Int>& x) {
        const auto t = schedule(inst, to_solution(inst, x));
        std::vector<std::vector<Int>> c, r;
        for (std::size_t k = 1; k <= t.num_reduces(); ++k) {
          c.push_back(t.c_after_reduce(k));
          r.push_back(t.r_after_reduce(k));
        }
        return py::make_tuple(c, r);
      },
      py::arg("instance"), py::arg("solution"),
      "counters and residues after each reduce (counter 0 belongs to b)");

  m.def(
      "graph_dot",
      [](const IlpInstance& inst, const std::vector<Int>& x) {
        return to_dot(build_graph(inst, to_solution(inst, x)), &inst);
      },
      py::arg("instance"), py::arg("solution"));

  m.def(
      "validate_dot",
      [](const IlpInstance& inst, const std::string& dot) {
        const auto v = validate_graph(inst, parse_dot(dot));
        return py::make_tuple(v.accepted, v.failed_condition);
      },
      py::arg("instance"), py::arg("dot"));

  m.def(
      "decompose",
      [](const IlpInstance& inst, const std::vector<Int>& x) {
        const Solution s = to_solution(inst, x);
        const auto sf = build_special_form(inst, s, schedule(inst, s));
        const auto pd = decompose(sf);
        py::dict out;
        out["bags"] = pd.bags;
        out["width"] = pd.width();
        out["valid"] = validate_decomposition(sf.graph, pd).valid;
        out["max_label_occupancy"] = max_label_occupancy(sf.graph, pd);
        return out;
      },
      py::arg("instance"), py::arg("solution"));

  m.def(
      "schedule_word",
      [](const IlpInstance& inst, const std::vector<Int>& x, Int multiplier) {
        const Solution s = to_solution(inst, x);
        return format_word(inst, schedule_to_word(inst, schedule(inst, s), multiplier));
      },
      py::arg("instance"), py::arg("solution"), py::arg("multiplier") = kDefaultMultiplier);

  m.def(
      "accepts",
      [](const IlpInstance& inst, const std::string& word, Int multiplier) {
        return IlpAutomaton(inst, multiplier).accepts(parse_word(inst, word));
      },
      py::arg("instance"), py::arg("word"), py::arg("multiplier") = kDefaultMultiplier);

  m.def("emit_boolean_program", &emit_boolean_program, py::arg("instance"),
        py::arg("multiplier") = kDefaultMultiplier);

  m.def(
      "run_boolean_program",
      [](const std::string& text, std::size_t max_states) {
        const auto r = interpret_boolean_program(std::string_view(text), max_states);
        return py::make_tuple(verdict_value(r.verdict), r.trace);
      },
      py::arg("text"), py::arg("max_states") = kDefaultMaxStates);

  m.def(
      "verify",
      [](const IlpInstance& inst, Int box) {
        VerifyOptions opts;
        opts.box = box;
        const auto r = verify_instance(inst, opts);
        py::dict out;
        out["ok"] = r.ok();
        out["solutions"] = r.solutions;
        out["max_width"] = r.max_width;
        out["width_limit"] = r.width_limit;
        out["breaches"] = r.breaches;
        return out;
      },
      py::arg("instance"), py::arg("box") = 10);
}
