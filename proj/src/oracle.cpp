#include "ilppw/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <sstream>
#include <thread>

namespace ilppw {

namespace {

// Depth-first enumeration in lexicographic order with interval pruning: at
// depth d the remaining variables can still add [lo_j[d], hi_j[d]] to row j.
class BoxSearch {
 public:
  BoxSearch(const IlpInstance& inst, const std::vector<Int>& box, std::size_t max_nodes, bool stop_at_first)
      : inst_(inst), box_(box), max_nodes_(max_nodes), stop_(stop_at_first) {
    const std::size_t n = inst.num_vars();
    const std::size_t m = inst.num_constraints();
    if (box.size() != n) throw Error("box has wrong dimension");
    for (Int b : box) {
      if (b < 0) throw Error("box bounds must be non-negative");
    }
    lo_.assign(n + 1, std::vector<Int>(m, 0));
    hi_.assign(n + 1, std::vector<Int>(m, 0));
    for (std::size_t d = n; d-- > 0;) {
      for (std::size_t j = 0; j < m; ++j) {
        const Int reach = checked_mul(inst.coeff(j, d), box[d]);
        lo_[d][j] = checked_add(lo_[d + 1][j], std::min<Int>(0, reach));
        hi_[d][j] = checked_add(hi_[d + 1][j], std::max<Int>(0, reach));
      }
    }
  }

  SolutionSet run() {
    SolutionSet out;
    out.box = box_;
    std::vector<Int> x(inst_.num_vars(), 0);
    std::vector<Int> partial(inst_.num_constraints(), 0);
    recurse(0, x, partial, out.solutions, out.partial);
    out.nodes = nodes_.load();
    return out;
  }

  // Splits the outermost variable's range across threads; each value of x_1
  // is searched independently and the slices are concatenated in order.
  SolutionSet run_parallel(unsigned threads) {
    if (inst_.num_vars() == 0 || box_[0] == 0 || threads <= 1) return run();
    const std::size_t slices = static_cast<std::size_t>(box_[0]) + 1;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, slices));
    std::vector<std::vector<Solution>> found(slices);
    std::vector<char> cut(slices, 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t v; (v = next.fetch_add(1)) < slices;) {
        std::vector<Int> x(inst_.num_vars(), 0);
        std::vector<Int> partial(inst_.num_constraints(), 0);
        x[0] = static_cast<Int>(v);
        for (std::size_t j = 0; j < partial.size(); ++j) {
          partial[j] = checked_mul(inst_.coeff(j, 0), x[0]);
        }
        bool stopped = false;
        recurse(1, x, partial, found[v], stopped);
        cut[v] = stopped;
      }
    };
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, worker));
    for (auto& j : jobs) j.get();

    SolutionSet out;
    out.box = box_;
    for (std::size_t v = 0; v < slices; ++v) {
      out.partial = out.partial || cut[v];
      for (auto& s : found[v]) out.solutions.push_back(std::move(s));
    }
    out.nodes = nodes_.load();
    return out;
  }

 private:
  bool viable(std::size_t depth, const std::vector<Int>& partial) const {
    for (std::size_t j = 0; j < partial.size(); ++j) {
      const Int need = checked_sub(inst_.rhs(j), partial[j]);
      if (need < lo_[depth][j] || need > hi_[depth][j]) return false;
    }
    return true;
  }

  // Returns false to abort the whole search.
  bool recurse(std::size_t depth, std::vector<Int>& x, std::vector<Int>& partial,
               std::vector<Solution>& found, bool& stopped) {
    if (nodes_.fetch_add(1, std::memory_order_relaxed) >= max_nodes_) {
      stopped = true;
      return false;
    }
    if (!viable(depth, partial)) return true;
    if (depth == x.size()) {
      found.emplace_back(x);
      return !stop_;
    }
    for (Int v = 0; v <= box_[depth]; ++v) {
      x[depth] = v;
      for (std::size_t j = 0; j < partial.size(); ++j) {
        partial[j] = checked_add(partial[j], checked_mul(inst_.coeff(j, depth), v));
      }
      const bool go_on = recurse(depth + 1, x, partial, found, stopped);
      for (std::size_t j = 0; j < partial.size(); ++j) {
        partial[j] = checked_sub(partial[j], checked_mul(inst_.coeff(j, depth), v));
      }
      if (!go_on) {
        x[depth] = 0;
        return false;
      }
    }
    x[depth] = 0;
    return true;
  }

  const IlpInstance& inst_;
  std::vector<Int> box_;
  std::size_t max_nodes_;
  bool stop_;
  std::atomic<std::size_t> nodes_{0};
  std::vector<std::vector<Int>> lo_;
  std::vector<std::vector<Int>> hi_;
};

}  // namespace

SolutionSet enumerate_solutions(const IlpInstance& inst, const std::vector<Int>& box, std::size_t max_nodes,
                                unsigned threads) {
  return BoxSearch(inst, box, max_nodes, false).run_parallel(threads);
}

SolutionSet enumerate_solutions(const IlpInstance& inst, Int box, std::size_t max_nodes, unsigned threads) {
  return enumerate_solutions(inst, std::vector<Int>(inst.num_vars(), box), max_nodes, threads);
}

OracleVerdict brute_force_feasible(const IlpInstance& inst, Int box, std::size_t max_nodes) {
  auto set = BoxSearch(inst, std::vector<Int>(inst.num_vars(), box), max_nodes, true).run();
  OracleVerdict v;
  v.feasible = !set.solutions.empty();
  v.partial = set.partial && !v.feasible;
  if (v.feasible) v.first = set.solutions.front();
  return v;
}

std::string solutions_to_csv(const IlpInstance& inst, const SolutionSet& set) {
  std::ostringstream out;
  for (std::size_t i = 0; i < inst.num_vars(); ++i) out << (i ? "," : "") << inst.var_name(i);
  out << '\n';
  for (const auto& s : set.solutions) {
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? "," : "") << s[i];
    out << '\n';
  }
  return out.str();
}

IlpInstance random_instance(std::mt19937_64& rng, const RandomInstanceOptions& opts) {
  std::uniform_int_distribution<std::size_t> pick_n(1, opts.max_vars);
  std::uniform_int_distribution<std::size_t> pick_m(1, opts.max_constraints);
  std::uniform_int_distribution<Int> coeff(-opts.max_coeff, opts.max_coeff);
  std::uniform_int_distribution<Int> rhs(-opts.max_rhs, opts.max_rhs);
  std::uniform_int_distribution<Int> planted(0, opts.planted_max);
  std::bernoulli_distribution plant(opts.planted_ratio);

  const std::size_t n = pick_n(rng);
  const std::size_t m = pick_m(rng);
  std::vector<std::vector<Int>> rows(m, std::vector<Int>(n));
  for (auto& row : rows) {
    for (auto& a : row) a = coeff(rng);
  }
  std::vector<Int> b(m);
  if (plant(rng)) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<Int> s(n);
      for (auto& v : s) v = planted(rng);
      bool small = true;
      for (std::size_t j = 0; j < m; ++j) {
        b[j] = 0;
        for (std::size_t i = 0; i < n; ++i) b[j] += rows[j][i] * s[i];
        small = small && b[j] >= -opts.max_rhs && b[j] <= opts.max_rhs;
      }
      if (small) return IlpInstance::from_rows(rows, b);
    }
  }
  for (auto& v : b) v = rhs(rng);
  return IlpInstance::from_rows(rows, b);
}

}  // namespace ilppw
