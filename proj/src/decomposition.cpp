#include "ilppw/decomposition.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace ilppw {

namespace {

std::string vec_to_string(const std::vector<Int>& v, std::size_t from = 0) {
  std::string out = "(";
  for (std::size_t i = from; i < v.size(); ++i) {
    if (i > from) out += ',';
    out += std::to_string(v[i]);
  }
  return out + ")";
}

std::vector<std::size_t> active_labels(const ScheduleTrace& trace) {
  std::vector<std::size_t> out;
  for (std::size_t l = trace.includes_rhs ? 0 : 1; l <= trace.num_vars; ++l) out.push_back(l);
  return out;
}

}  // namespace

std::size_t ScheduleTrace::num_reduces() const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const ScheduleEvent& e) { return !e.is_increase(); }));
}

const std::vector<Int>& ScheduleTrace::c_after_reduce(std::size_t k) const {
  std::size_t seen = 0;
  for (std::size_t p = 0; p < steps.size(); ++p) {
    if (!steps[p].is_increase() && ++seen == k) return c_history[p];
  }
  throw Error("trace has fewer than " + std::to_string(k) + " reduce steps");
}

const std::vector<Int>& ScheduleTrace::r_after_reduce(std::size_t k) const {
  std::size_t seen = 0;
  for (std::size_t p = 0; p < steps.size(); ++p) {
    if (!steps[p].is_increase() && ++seen == k) return r_history[p];
  }
  throw Error("trace has fewer than " + std::to_string(k) + " reduce steps");
}

std::vector<std::size_t> ScheduleTrace::increased_in_round(std::size_t k) const {
  std::vector<std::size_t> out;
  std::size_t round = 1;
  for (const auto& e : steps) {
    if (!e.is_increase()) {
      if (++round > k) break;
    } else if (round == k) {
      out.push_back(e.label);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ScheduleTrace schedule(const IlpInstance& inst, const Solution& s) {
  if (s.size() != inst.num_vars()) throw Error("solution length does not match instance");
  if (!is_solution(inst, s)) throw Error("assignment " + to_string(s) + " is not a solution");

  const std::size_t n = inst.num_vars();
  const std::size_t m = inst.num_constraints();
  ScheduleTrace trace;
  trace.num_vars = n;
  trace.largest = s.largest();
  trace.includes_rhs = !inst.rhs_is_zero();
  trace.multiplicity.assign(n + 1, 0);
  trace.multiplicity[0] = trace.includes_rhs ? 1 : 0;
  for (std::size_t i = 1; i <= n; ++i) trace.multiplicity[i] = s[i - 1];
  if (s.is_zero()) return trace;

  const Int sl = trace.largest;
  const auto labels = active_labels(trace);
  std::vector<Int> c(n + 1, 0);
  std::vector<Int> r(m, 0);
  for (Int reduces = 0; reduces < sl; ++reduces) {
    while (true) {
      auto it = std::find_if(labels.begin(), labels.end(),
                             [&](std::size_t l) { return c[l] < trace.multiplicity[l]; });
      if (it == labels.end()) break;
      const std::size_t l = *it;
      c[l] = checked_add(c[l], sl);
      for (std::size_t j = 0; j < m; ++j) r[j] = checked_add(r[j], inst.label_coeff(j, l));
      trace.steps.push_back(ScheduleEvent::increase(l));
      trace.c_history.push_back(c);
      trace.r_history.push_back(r);
    }
    for (std::size_t l : labels) c[l] = checked_sub(c[l], trace.multiplicity[l]);
    trace.steps.push_back(ScheduleEvent::reduce());
    trace.c_history.push_back(c);
    trace.r_history.push_back(r);
  }
  return trace;
}

CounterCheck check_counter_invariants(const IlpInstance& inst, const Solution& s,
                                      const ScheduleTrace& trace) {
  auto fail = [](std::string why) { return CounterCheck{false, std::move(why)}; };
  const std::size_t m = inst.num_constraints();
  const Int sl = trace.largest;
  const auto labels = active_labels(trace);

  if (trace.steps.size() != trace.c_history.size() || trace.steps.size() != trace.r_history.size()) {
    return fail("history length differs from step count");
  }
  if (static_cast<Int>(trace.num_reduces()) != sl) return fail("reduce count differs from s_l");

  std::vector<Int> bound(m);
  for (std::size_t j = 0; j < m; ++j) {
    Int max_abs = 0;
    for (std::size_t l : labels) max_abs = std::max(max_abs, checked_abs(inst.label_coeff(j, l)));
    bound[j] = checked_mul(checked_mul(2, static_cast<Int>(labels.size())), max_abs);
  }

  std::vector<Int> increases(inst.num_vars() + 1, 0);
  for (std::size_t p = 0; p < trace.steps.size(); ++p) {
    const auto& c = trace.c_history[p];
    const auto& r = trace.r_history[p];
    const std::string at = "step " + std::to_string(p + 1) + ": ";
    if (trace.steps[p].is_increase()) ++increases[trace.steps[p].label];
    for (std::size_t l : labels) {
      if (c[l] < 0 || c[l] >= checked_mul(2, sl)) return fail(at + "c out of [0, 2 s_l)");
      if (!trace.steps[p].is_increase() && c[l] > sl) return fail(at + "c exceeds s_l after reduce");
    }
    for (std::size_t j = 0; j < m; ++j) {
      Int weighted = 0;
      for (std::size_t l : labels) weighted = checked_add(weighted, checked_mul(c[l], inst.label_coeff(j, l)));
      if (checked_mul(r[j], sl) != weighted) {
        return fail(at + "r_" + std::to_string(j + 1) + " * s_l != sum c_i a_ji");
      }
      const Int mag = checked_abs(r[j]);
      if (!(mag < bound[j] || (bound[j] == 0 && mag == 0))) {
        return fail(at + "|r_" + std::to_string(j + 1) + "| reaches the counter bound");
      }
    }
  }
  for (std::size_t l : labels) {
    if (increases[l] != trace.multiplicity[l]) return fail("label " + std::to_string(l) + " increased wrongly often");
  }
  if (!trace.steps.empty()) {
    const auto& c = trace.c_history.back();
    const auto& r = trace.r_history.back();
    if (std::any_of(c.begin(), c.end(), [](Int v) { return v != 0; })) return fail("final c is not zero");
    if (std::any_of(r.begin(), r.end(), [](Int v) { return v != 0; })) return fail("final r is not zero");
  } else if (!s.is_zero()) {
    return fail("empty trace for a non-zero solution");
  }
  return {};
}

// ---------------------------------------------------------------------------
// Choosing c^k_{j,i}
// ---------------------------------------------------------------------------

namespace {

// One sign group of one row. Values are handled in absolute terms: every label
// i gets u_i^k in {floor(y), ceil(y)} with y = |a_{j,i}| c_i^k / s_l, the sum
// over the group equals ceil(sum y), and u_i^k <= u_i^{k-1} whenever i was not
// increased in round k. Depth-first over rounds; combinations within a round
// are tried with round-k-increased labels first, then by ascending label.
class RoundingSearch {
 public:
  static constexpr std::size_t kBudget = 4'000'000;

  RoundingSearch(std::vector<std::vector<Int>> numerators, std::vector<std::vector<bool>> increased, Int den)
      : num_(std::move(numerators)), inc_(std::move(increased)), den_(den) {}

  // Returns u[k-1][i].
  std::vector<std::vector<Int>> solve() {
    const std::size_t t = num_.size();
    std::vector<std::vector<Int>> chosen(t);
    if (t == 0) return chosen;

    std::vector<Frame> frames;
    auto first = make_frame(0, nullptr);
    if (!first) throw Error("no admissible open-edge targets for the first block");
    frames.push_back(std::move(*first));

    while (!frames.empty()) {
      Frame& f = frames.back();
      const std::size_t k = frames.size() - 1;
      if (!next_combination(f)) {
        if (k > 0) failed_.insert({k, chosen[k - 1]});
        frames.pop_back();
        continue;
      }
      if (++work_ > kBudget) throw Error("open-edge target search exceeded its budget");
      std::vector<Int> u = f.floor;
      for (std::size_t idx : f.comb) ++u[f.candidates[idx]];
      chosen[k] = std::move(u);
      if (k + 1 == t) return chosen;
      if (failed_.count({k + 1, chosen[k]})) continue;
      auto next = make_frame(k + 1, &chosen[k]);
      if (next) frames.push_back(std::move(*next));
    }
    throw Error("no admissible choice of open-edge targets exists");
  }

 private:
  struct Frame {
    std::vector<Int> floor;
    std::vector<std::size_t> candidates;
    std::size_t need = 0;
    std::vector<std::size_t> comb;
    bool started = false;
  };

  std::optional<Frame> make_frame(std::size_t k, const std::vector<Int>* prev) const {
    const auto& nums = num_[k];
    Frame f;
    f.floor.resize(nums.size());
    Int total = 0;
    Int floor_sum = 0;
    std::vector<std::size_t> preferred;
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < nums.size(); ++i) {
      f.floor[i] = nums[i] / den_;
      total = checked_add(total, nums[i]);
      floor_sum = checked_add(floor_sum, f.floor[i]);
      const bool fractional = nums[i] % den_ != 0;
      bool can_bump = fractional;
      if (prev != nullptr && !inc_[k][i]) {
        if (f.floor[i] > (*prev)[i]) return std::nullopt;
        can_bump = fractional && f.floor[i] + 1 <= (*prev)[i];
      }
      if (can_bump) (inc_[k][i] ? preferred : others).push_back(i);
    }
    f.candidates = preferred;
    f.candidates.insert(f.candidates.end(), others.begin(), others.end());
    const Int need = ceil_div(total, den_) - floor_sum;
    if (need < 0 || static_cast<std::size_t>(need) > f.candidates.size()) return std::nullopt;
    f.need = static_cast<std::size_t>(need);
    return f;
  }

  // Lexicographic k-subsets of candidate positions.
  static bool next_combination(Frame& f) {
    const std::size_t n = f.candidates.size();
    const std::size_t r = f.need;
    if (!f.started) {
      f.started = true;
      f.comb.resize(r);
      for (std::size_t i = 0; i < r; ++i) f.comb[i] = i;
      return true;
    }
    if (r == 0) return false;
    std::size_t i = r;
    while (i > 0) {
      --i;
      if (f.comb[i] != i + n - r) {
        ++f.comb[i];
        for (std::size_t q = i + 1; q < r; ++q) f.comb[q] = f.comb[q - 1] + 1;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<Int>> num_;
  std::vector<std::vector<bool>> inc_;
  Int den_;
  std::set<std::pair<std::size_t, std::vector<Int>>> failed_;
  std::size_t work_ = 0;
};

}  // namespace

BlockTable choose_open_targets(const IlpInstance& inst, const ScheduleTrace& trace) {
  const std::size_t n = inst.num_vars();
  const std::size_t m = inst.num_constraints();
  const std::size_t t = trace.num_reduces();
  BlockTable out(t, std::vector<std::vector<Int>>(m, std::vector<Int>(n + 1, 0)));
  if (t == 0) return out;

  std::vector<std::vector<Int>> c_after(t);
  std::vector<std::vector<bool>> inc_round(t, std::vector<bool>(n + 1, false));
  for (std::size_t k = 1; k <= t; ++k) {
    c_after[k - 1] = trace.c_after_reduce(k);
    for (std::size_t l : trace.increased_in_round(k)) inc_round[k - 1][l] = true;
  }

  const auto labels = active_labels(trace);
  for (std::size_t j = 0; j < m; ++j) {
    for (int sign : {1, -1}) {
      std::vector<std::size_t> group;
      for (std::size_t l : labels) {
        if (label_sign(inst, j, l) == sign) group.push_back(l);
      }
      if (group.empty()) continue;
      std::vector<std::vector<Int>> nums(t, std::vector<Int>(group.size()));
      std::vector<std::vector<bool>> inc(t, std::vector<bool>(group.size()));
      for (std::size_t k = 0; k < t; ++k) {
        for (std::size_t g = 0; g < group.size(); ++g) {
          nums[k][g] = checked_mul(checked_abs(inst.label_coeff(j, group[g])), c_after[k][group[g]]);
          inc[k][g] = inc_round[k][group[g]];
        }
      }
      auto u = RoundingSearch(std::move(nums), std::move(inc), trace.largest).solve();
      for (std::size_t k = 0; k < t; ++k) {
        for (std::size_t g = 0; g < group.size(); ++g) out[k][j][group[g]] = sign * u[k][g];
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Special form graph
// ---------------------------------------------------------------------------

SpecialFormGraph build_special_form(const IlpInstance& inst, const Solution& s,
                                    const ScheduleTrace& trace) {
  const std::size_t n = inst.num_vars();
  const std::size_t m = inst.num_constraints();
  if (trace.num_vars != n || trace.largest != s.largest()) throw Error("trace does not belong to this solution");
  const std::size_t t = trace.num_reduces();

  SpecialFormGraph sf;
  sf.rhs_in_every_bag = trace.includes_rhs;
  SolutionGraph& g = sf.graph;
  g.num_vars = n;
  g.num_constraints = m;
  g.vertices.push_back({0, 0});
  for (std::size_t i = 1; i <= n; ++i) {
    for (Int q = 0; q < s[i - 1]; ++q) g.vertices.push_back({g.vertices.size(), i});
  }
  const std::size_t num_vertices = g.vertices.size();
  sf.block_of.assign(num_vertices, 0);
  sf.matched_after.assign(num_vertices, 0);

  if (t == 0) {
    if (num_vertices != 1) throw Error("empty trace for a non-zero solution");
    sf.vertex_blocks = {{0}};
    sf.edge_blocks = {{}};
    sf.block_of[0] = 1;
    sf.matched_after[0] = 1;
    return sf;
  }

  const BlockTable targets = choose_open_targets(inst, trace);
  sf.targets = targets;

  auto label_abs = [&](std::size_t j, std::size_t l) { return checked_abs(inst.label_coeff(j, l)); };

  std::vector<std::vector<Int>> open_v(num_vertices, std::vector<Int>(m, 0));
  std::vector<std::vector<Int>> open_total(m, std::vector<Int>(n + 1, 0));
  std::vector<std::vector<VertexId>> created(n + 1);
  std::vector<std::vector<std::size_t>> first_open(m, std::vector<std::size_t>(n + 1, 0));

  auto signed_table = [&]() {
    std::vector<std::vector<Int>> tab(m, std::vector<Int>(n + 1, 0));
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t l = 0; l <= n; ++l) tab[j][l] = label_sign(inst, j, l) * open_total[j][l];
    }
    return tab;
  };

  // Takes `count` open stubs of label l in row j, oldest vertex first.
  auto take_stubs = [&](std::size_t j, std::size_t l, Int count, std::vector<VertexId>& out) {
    auto& ptr = first_open[j][l];
    while (count > 0) {
      while (ptr < created[l].size() && open_v[created[l][ptr]][j] == 0) ++ptr;
      if (ptr == created[l].size()) throw Error("ran out of open stubs while matching");
      const VertexId v = created[l][ptr];
      const Int take = std::min(count, open_v[v][j]);
      for (Int q = 0; q < take; ++q) out.push_back(v);
      open_v[v][j] -= take;
      open_total[j][l] -= take;
      count -= take;
    }
  };

  std::size_t cursor = 0;
  for (std::size_t k = 1; k <= t; ++k) {
    std::vector<VertexId> block;
    if (k == 1 && !trace.includes_rhs) block.push_back(0);
    for (; cursor < trace.steps.size() && trace.steps[cursor].is_increase(); ++cursor) {
      const std::size_t l = trace.steps[cursor].label;
      const VertexId v = l == 0 ? 0 : label_major_id(s, l, static_cast<Int>(created[l].size()));
      block.push_back(v);
    }
    ++cursor;  // the reduce closing this round

    std::vector<VertexId> touched;
    for (VertexId v : block) {
      const std::size_t l = g.vertices[v].label;
      sf.block_of[v] = k;
      created[l].push_back(v);
      for (std::size_t j = 0; j < m; ++j) {
        open_v[v][j] = label_abs(j, l);
        open_total[j][l] = checked_add(open_total[j][l], open_v[v][j]);
      }
      touched.push_back(v);
    }
    sf.pre_open.push_back(signed_table());

    std::vector<std::size_t> edge_block;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<VertexId> pos;
      std::vector<VertexId> neg;
      for (std::size_t l = 0; l <= n; ++l) {
        const Int excess = open_total[j][l] - checked_abs(targets[k - 1][j][l]);
        if (excess < 0) {
          throw Error("block " + std::to_string(k) + ": target exceeds open stubs for label " + std::to_string(l));
        }
        take_stubs(j, l, excess, label_sign(inst, j, l) > 0 ? pos : neg);
      }
      if (pos.size() != neg.size()) {
        throw Error("block " + std::to_string(k) + ": unbalanced stubs in constraint " + std::to_string(j + 1));
      }
      for (std::size_t q = 0; q < pos.size(); ++q) {
        edge_block.push_back(g.edges.size());
        g.edges.push_back({pos[q], neg[q], j + 1});
        touched.push_back(pos[q]);
        touched.push_back(neg[q]);
      }
    }
    sf.open.push_back(signed_table());

    for (VertexId v : touched) {
      if (sf.matched_after[v] != 0) continue;
      if (std::all_of(open_v[v].begin(), open_v[v].end(), [](Int x) { return x == 0; })) sf.matched_after[v] = k;
    }

    const auto& c = trace.c_after_reduce(k);
    std::vector<Fraction> rp(m);
    std::vector<Fraction> rn(m);
    for (std::size_t j = 0; j < m; ++j) {
      Int pos_sum = 0;
      Int neg_sum = 0;
      for (std::size_t l = 0; l <= n; ++l) {
        Int& side = label_sign(inst, j, l) > 0 ? pos_sum : neg_sum;
        side = checked_add(side, checked_mul(c[l], inst.label_coeff(j, l)));
      }
      rp[j] = Fraction(pos_sum, trace.largest);
      rn[j] = Fraction(neg_sum, trace.largest);
    }
    sf.r_pos.push_back(std::move(rp));
    sf.r_neg.push_back(std::move(rn));
    sf.vertex_blocks.push_back(std::move(block));
    sf.edge_blocks.push_back(std::move(edge_block));
  }

  for (VertexId v = 0; v < num_vertices; ++v) {
    if (sf.block_of[v] == 0) throw Error("vertex v" + std::to_string(v) + " was never placed in a block");
    if (sf.matched_after[v] == 0) throw Error("vertex v" + std::to_string(v) + " keeps open stubs");
  }
  auto verdict = validate_graph(inst, g);
  if (!verdict.accepted) throw Error("special-form graph is not a member: " + verdict.detail);
  if (sol_of(g) != s) throw Error("special-form graph encodes a different solution");
  return sf;
}

// ---------------------------------------------------------------------------
// Path decompositions
// ---------------------------------------------------------------------------

std::size_t PathDecomposition::width() const {
  std::size_t largest = 0;
  for (const auto& b : bags) largest = std::max(largest, b.size());
  return largest == 0 ? 0 : largest - 1;
}

PathDecomposition decompose(const SpecialFormGraph& sf) {
  PathDecomposition pd;
  std::vector<VertexId> current;
  for (std::size_t k = 1; k <= sf.vertex_blocks.size(); ++k) {
    std::vector<VertexId> bag;
    for (VertexId v : current) {
      if (sf.matched_after[v] >= k) bag.push_back(v);
    }
    bag.insert(bag.end(), sf.vertex_blocks[k - 1].begin(), sf.vertex_blocks[k - 1].end());
    if (sf.rhs_in_every_bag) bag.push_back(0);
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    current = bag;
    pd.bags.push_back(std::move(bag));
  }
  return pd;
}

DecompositionVerdict validate_decomposition(const SolutionGraph& g, const PathDecomposition& pd) {
  DecompositionVerdict out;
  out.width = pd.width();
  auto reject = [&](int cond, std::string detail) {
    out.valid = false;
    out.failed_condition = cond;
    out.detail = std::move(detail);
    return out;
  };

  std::unordered_map<VertexId, std::vector<std::size_t>> where;
  for (const auto& v : g.vertices) where[v.id];
  for (std::size_t b = 0; b < pd.bags.size(); ++b) {
    for (VertexId v : pd.bags[b]) {
      auto it = where.find(v);
      if (it == where.end()) return reject(1, "bag " + std::to_string(b + 1) + " names unknown vertex v" + std::to_string(v));
      if (it->second.empty() || it->second.back() != b) it->second.push_back(b);
    }
  }
  for (const auto& v : g.vertices) {
    if (where[v.id].empty()) return reject(1, "vertex v" + std::to_string(v.id) + " is in no bag");
  }
  for (const auto& e : g.edges) {
    const auto& a = where[e.u];
    const auto& b = where[e.v];
    std::vector<std::size_t> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (common.empty()) {
      return reject(2, "edge v" + std::to_string(e.u) + " -- v" + std::to_string(e.v) + " is in no bag");
    }
  }
  for (const auto& v : g.vertices) {
    const auto& bags = where[v.id];
    if (bags.back() - bags.front() + 1 != bags.size()) {
      return reject(3, "bags of vertex v" + std::to_string(v.id) + " are not contiguous");
    }
  }
  return out;
}

std::size_t max_label_occupancy(const SolutionGraph& g, const PathDecomposition& pd) {
  std::unordered_map<VertexId, std::size_t> label_of;
  for (const auto& v : g.vertices) label_of[v.id] = v.label;
  std::size_t worst = 0;
  for (const auto& bag : pd.bags) {
    std::unordered_map<std::size_t, std::size_t> count;
    for (VertexId v : bag) {
      const std::size_t l = label_of[v];
      if (l != 0) worst = std::max(worst, ++count[l]);
    }
  }
  return worst;
}

std::string decomposition_to_json(const PathDecomposition& pd) {
  nlohmann::json j;
  j["bags"] = pd.bags;
  j["width"] = pd.width();
  return j.dump();
}

std::string decomposition_to_text(const PathDecomposition& pd) {
  std::ostringstream out;
  for (std::size_t k = 0; k < pd.bags.size(); ++k) {
    out << "bag " << k + 1 << ':';
    for (VertexId v : pd.bags[k]) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

PathDecomposition decomposition_from_json(const std::string& text) {
  PathDecomposition pd;
  try {
    auto j = nlohmann::json::parse(text);
    pd.bags = j.at("bags").get<std::vector<std::vector<VertexId>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed decomposition JSON: ") + e.what());
  }
  for (auto& bag : pd.bags) std::sort(bag.begin(), bag.end());
  return pd;
}

std::string trace_to_text(const IlpInstance& inst, const ScheduleTrace& trace) {
  std::ostringstream out;
  out << "s_l = " << trace.largest << '\n';
  const std::size_t from = trace.includes_rhs ? 0 : 1;
  for (std::size_t p = 0; p < trace.steps.size(); ++p) {
    const auto& e = trace.steps[p];
    out << "step " << p + 1 << ": ";
    if (e.is_increase()) {
      out << "increase " << (e.label == 0 ? std::string(kRhsSymbol) : inst.var_name(e.label - 1));
    } else {
      out << "reduce";
    }
    out << "  c=" << vec_to_string(trace.c_history[p], from) << "  r=" << vec_to_string(trace.r_history[p]) << '\n';
  }
  return out.str();
}

}  // namespace ilppw
