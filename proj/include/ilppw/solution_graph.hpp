#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ilppw/instance.hpp"

namespace ilppw {

using VertexId = std::size_t;

struct GraphVertex {
  VertexId id = 0;
  std::size_t label = 0;  // 0 is the b-vertex, 1..n are variables

  friend bool operator==(const GraphVertex&, const GraphVertex&) = default;
};

struct GraphEdge {
  VertexId u = 0;
  VertexId v = 0;
  std::size_t label = 1;  // constraint index in 1..m

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Labelled multigraph whose label-i vertex count encodes x_i in unary and
// whose j-labelled edges pair opposite-signed coefficient stubs of row j.
struct SolutionGraph {
  std::size_t num_vars = 0;
  std::size_t num_constraints = 0;
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;

  friend bool operator==(const SolutionGraph&, const SolutionGraph&) = default;
};

// Sign of a label with respect to row j: +1 or -1, zero counts as positive.
int label_sign(const IlpInstance& inst, std::size_t row, std::size_t label);

// Vertex ids are label-major: id 0 is the b-vertex, then s_1 vertices of
// label 1, and so on. Index of the q-th (0-based) vertex carrying `label`.
VertexId label_major_id(const Solution& s, std::size_t label, Int ordinal);

// Canonical member of G[Ax=b] for s: stubs of each sign are listed by
// (label, id) and zipped.
SolutionGraph build_graph(const IlpInstance& inst, const Solution& s);

struct GraphVerdict {
  bool accepted = true;
  int failed_condition = 0;  // 1..4 when rejected
  std::string detail;
};

// Membership test for G[Ax=b]:
//   1. labels partition the vertices and exactly one vertex has label 0,
//   2. edge labels lie in [1,m] and edges join existing vertices,
//   3. every j-edge joins opposite-signed endpoints,
//   4. the j-degree of each vertex is |a_{j,i}| (|b_j| for the b-vertex).
GraphVerdict validate_graph(const IlpInstance& inst, const SolutionGraph& g);

// (|V_1|, ..., |V_n|)
Solution sol_of(const SolutionGraph& g);

// DOT subset:
//   graph solution {
//     graph [vars=N, constraints=M];
//     v<id> [label="<i>", tooltip="<signs>"];
//     v<a> -- v<b> [label="<j>"];
//   }
// Tooltips carry the per-row signs when an instance is supplied and are
// ignored by the reader.
std::string to_dot(const SolutionGraph& g, const IlpInstance* inst = nullptr);
SolutionGraph parse_dot(std::string_view text);

}  // namespace ilppw
