#include "ilppw/solution_graph.hpp"

#include <regex>
#include <sstream>
#include <unordered_map>

namespace ilppw {

int label_sign(const IlpInstance& inst, std::size_t row, std::size_t label) {
  return inst.label_coeff(row, label) < 0 ? -1 : 1;
}

VertexId label_major_id(const Solution& s, std::size_t label, Int ordinal) {
  if (label == 0) return 0;
  VertexId id = 1;
  for (std::size_t i = 1; i < label; ++i) id += static_cast<VertexId>(s[i - 1]);
  return id + static_cast<VertexId>(ordinal);
}

SolutionGraph build_graph(const IlpInstance& inst, const Solution& s) {
  if (s.size() != inst.num_vars()) throw Error("solution length does not match instance");
  if (!is_solution(inst, s)) throw Error("assignment " + to_string(s) + " is not a solution");

  SolutionGraph g;
  g.num_vars = inst.num_vars();
  g.num_constraints = inst.num_constraints();
  g.vertices.push_back({0, 0});
  for (std::size_t i = 1; i <= inst.num_vars(); ++i) {
    for (Int q = 0; q < s[i - 1]; ++q) g.vertices.push_back({g.vertices.size(), i});
  }

  for (std::size_t j = 0; j < inst.num_constraints(); ++j) {
    std::vector<VertexId> pos;
    std::vector<VertexId> neg;
    // Vertices are already in (label, id) order.
    for (const auto& v : g.vertices) {
      Int a = inst.label_coeff(j, v.label);
      auto& stubs = a < 0 ? neg : pos;
      for (Int k = 0; k < checked_abs(a); ++k) stubs.push_back(v.id);
    }
    if (pos.size() != neg.size()) throw Error("stub lists differ in length for constraint " + std::to_string(j + 1));
    for (std::size_t k = 0; k < pos.size(); ++k) g.edges.push_back({pos[k], neg[k], j + 1});
  }
  return g;
}

GraphVerdict validate_graph(const IlpInstance& inst, const SolutionGraph& g) {
  auto reject = [](int cond, std::string detail) { return GraphVerdict{false, cond, std::move(detail)}; };
  const std::size_t n = inst.num_vars();
  const std::size_t m = inst.num_constraints();

  std::unordered_map<VertexId, std::size_t> label_of;
  std::size_t zero_count = 0;
  for (const auto& v : g.vertices) {
    if (v.label > n) return reject(1, "vertex v" + std::to_string(v.id) + " has label outside [0,n]");
    if (!label_of.emplace(v.id, v.label).second) {
      return reject(1, "vertex id " + std::to_string(v.id) + " appears twice");
    }
    zero_count += v.label == 0;
  }
  if (zero_count != 1) {
    return reject(1, "expected exactly one label-0 vertex, found " + std::to_string(zero_count));
  }

  for (const auto& e : g.edges) {
    if (e.label < 1 || e.label > m) return reject(2, "edge label " + std::to_string(e.label) + " outside [1,m]");
    if (!label_of.count(e.u) || !label_of.count(e.v)) return reject(2, "edge refers to a missing vertex");
  }

  for (const auto& e : g.edges) {
    const std::size_t j = e.label - 1;
    if (e.u == e.v || label_sign(inst, j, label_of[e.u]) == label_sign(inst, j, label_of[e.v])) {
      return reject(3, "edge v" + std::to_string(e.u) + " -- v" + std::to_string(e.v) + " labelled " +
                           std::to_string(e.label) + " joins equal signs");
    }
  }

  // degree[j][vertex]
  std::vector<std::unordered_map<VertexId, Int>> degree(m);
  for (const auto& e : g.edges) {
    ++degree[e.label - 1][e.u];
    ++degree[e.label - 1][e.v];
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (const auto& v : g.vertices) {
      Int expected = checked_abs(inst.label_coeff(j, v.label));
      auto it = degree[j].find(v.id);
      Int actual = it == degree[j].end() ? 0 : it->second;
      if (actual != expected) {
        return reject(4, "vertex v" + std::to_string(v.id) + " has " + std::to_string(actual) +
                             " edges labelled " + std::to_string(j + 1) + ", expected " +
                             std::to_string(expected));
      }
    }
  }
  return {};
}

Solution sol_of(const SolutionGraph& g) {
  std::vector<Int> counts(g.num_vars, 0);
  for (const auto& v : g.vertices) {
    if (v.label >= 1 && v.label <= g.num_vars) ++counts[v.label - 1];
  }
  return Solution(std::move(counts));
}

std::string to_dot(const SolutionGraph& g, const IlpInstance* inst) {
  std::ostringstream out;
  out << "graph solution {\n";
  out << "  graph [vars=" << g.num_vars << ", constraints=" << g.num_constraints << "];\n";
  for (const auto& v : g.vertices) {
    out << "  v" << v.id << " [label=\"" << v.label << '"';
    if (inst != nullptr) {
      out << ", tooltip=\"";
      for (std::size_t j = 0; j < inst->num_constraints(); ++j) {
        out << (label_sign(*inst, j, v.label) < 0 ? '-' : '+');
      }
      out << '"';
    }
    out << "];\n";
  }
  for (const auto& e : g.edges) {
    out << "  v" << e.u << " -- v" << e.v << " [label=\"" << e.label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

SolutionGraph parse_dot(std::string_view text) {
  static const std::regex header(R"(^\s*graph\s+\w*\s*\{\s*$)");
  static const std::regex attrs(R"(^\s*graph\s*\[\s*vars\s*=\s*(\d+)\s*,\s*constraints\s*=\s*(\d+)\s*\]\s*;?\s*$)");
  static const std::regex node(R"re(^\s*v(\d+)\s*\[\s*label\s*=\s*"(\d+)"[^\]]*\]\s*;?\s*$)re");
  static const std::regex edge(R"re(^\s*v(\d+)\s*--\s*v(\d+)\s*\[\s*label\s*=\s*"(\d+)"[^\]]*\]\s*;?\s*$)re");
  static const std::regex close(R"(^\s*\}\s*$)");

  SolutionGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool opened = false;
  bool closed = false;
  std::smatch mt;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!opened) {
      if (!std::regex_match(line, header)) throw ParseError("expected 'graph NAME {'", line_no, 1);
      opened = true;
    } else if (closed) {
      throw ParseError("content after closing brace", line_no, 1);
    } else if (std::regex_match(line, mt, attrs)) {
      g.num_vars = std::stoul(mt[1]);
      g.num_constraints = std::stoul(mt[2]);
    } else if (std::regex_match(line, mt, edge)) {
      g.edges.push_back({std::stoul(mt[1]), std::stoul(mt[2]), std::stoul(mt[3])});
    } else if (std::regex_match(line, mt, node)) {
      g.vertices.push_back({std::stoul(mt[1]), std::stoul(mt[2])});
    } else if (std::regex_match(line, close)) {
      closed = true;
    } else {
      throw ParseError("unrecognised DOT statement", line_no, 1);
    }
  }
  if (!closed) throw ParseError("missing closing brace", line_no, 1);
  return g;
}

}  // namespace ilppw
