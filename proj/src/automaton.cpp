#include "ilppw/automaton.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ilppw {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kFeasible:
      return "feasible";
    case Verdict::kInfeasible:
      return "infeasible";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

std::string format_word(const IlpInstance& inst, const Word& w) {
  std::string out;
  for (Letter l : w.letters) {
    if (!out.empty()) out += ' ';
    out += l == kRhsLetter ? std::string(kRhsSymbol) : inst.var_name(l - 1);
  }
  return out;
}

Word parse_word(const IlpInstance& inst, std::string_view text) {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == kRhsSymbol) {
      w.letters.push_back(kRhsLetter);
      continue;
    }
    const std::size_t col = inst.find_var(tok);
    if (col == inst.num_vars()) throw Error("unknown symbol '" + tok + "'");
    w.letters.push_back(col + 1);
  }
  return w;
}

ParikhVector parikh(const IlpInstance& inst, const Word& w) {
  std::vector<Int> counts(inst.num_vars(), 0);
  for (Letter l : w.letters) {
    if (l > inst.num_vars()) throw Error("letter outside the alphabet");
    if (l != kRhsLetter) ++counts[l - 1];
  }
  return Solution(std::move(counts));
}

std::vector<Int> residue_bounds(const IlpInstance& inst, Int multiplier) {
  if (multiplier < 1) throw Error("bound multiplier must be at least 1");
  std::vector<Int> out(inst.num_constraints());
  const Int columns = static_cast<Int>(inst.num_vars()) + 1;
  for (std::size_t j = 0; j < inst.num_constraints(); ++j) {
    const Int widest = std::max(inst.max_abs_coeff(j), checked_abs(inst.rhs(j)));
    out[j] = checked_mul(checked_mul(multiplier, columns), widest);
  }
  return out;
}

IlpAutomaton::IlpAutomaton(const IlpInstance& inst, Int multiplier)
    : inst_(inst), bounds_(residue_bounds(inst, multiplier)) {}

AutomatonState IlpAutomaton::initial() const {
  return {false, std::vector<Int>(inst_.num_constraints(), 0)};
}

bool IlpAutomaton::is_final(const AutomatonState& s) const {
  return s.rhs_used && std::all_of(s.residues.begin(), s.residues.end(), [](Int r) { return r == 0; });
}

std::optional<AutomatonState> IlpAutomaton::step(const AutomatonState& s, Letter letter) const {
  if (letter > inst_.num_vars()) throw Error("letter outside the alphabet");
  if (letter == kRhsLetter && s.rhs_used) return std::nullopt;
  AutomatonState next{s.rhs_used || letter == kRhsLetter, s.residues};
  for (std::size_t j = 0; j < inst_.num_constraints(); ++j) {
    const Int delta = letter == kRhsLetter ? checked_neg(inst_.rhs(j)) : inst_.coeff(j, letter - 1);
    next.residues[j] = checked_add(next.residues[j], delta);
    if (checked_abs(next.residues[j]) > bounds_[j]) return std::nullopt;
  }
  return next;
}

bool IlpAutomaton::accepts(const Word& w) const {
  std::optional<AutomatonState> s = initial();
  for (Letter l : w.letters) {
    s = step(*s, l);
    if (!s) return false;
  }
  return is_final(*s);
}

namespace {

// Interns (bit, residues) pairs. A dense table is used when the whole bounded
// state space is small, a hash map on mixed-radix codes when the codes fit in
// 64 bits, and a map on the raw vectors otherwise.
class StateStore {
 public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  static constexpr unsigned __int128 kDenseLimit = 1u << 24;
  static constexpr std::uint32_t kDenseEmpty = std::numeric_limits<std::uint32_t>::max();

  StateStore(std::vector<Int> bounds) : bounds_(std::move(bounds)), m_(bounds_.size()) {
    unsigned __int128 total = 2;
    fits_ = true;
    for (Int b : bounds_) {
      const unsigned __int128 width = 2 * static_cast<unsigned __int128>(b) + 1;
      total *= width;
      if (total > std::numeric_limits<std::uint64_t>::max()) {
        fits_ = false;
        break;
      }
    }
    if (fits_ && total <= kDenseLimit) dense_.assign(static_cast<std::size_t>(total), kDenseEmpty);
  }

  std::size_t size() const { return bits_.size(); }

  // Returns (index, inserted).
  std::pair<std::size_t, bool> intern(const AutomatonState& s) {
    const std::size_t next = size();
    std::size_t found = kNone;
    if (fits_) {
      const std::uint64_t code = encode(s);
      if (!dense_.empty()) {
        if (dense_[code] == kDenseEmpty) {
          dense_[code] = static_cast<std::uint32_t>(next);
        } else {
          found = dense_[code];
        }
      } else {
        auto [it, inserted] = sparse_.emplace(code, next);
        if (!inserted) found = it->second;
      }
    } else {
      auto [it, inserted] = fallback_.emplace(std::make_pair(s.rhs_used, s.residues), next);
      if (!inserted) found = it->second;
    }
    if (found != kNone) return {found, false};
    bits_.push_back(s.rhs_used);
    residues_.insert(residues_.end(), s.residues.begin(), s.residues.end());
    return {next, true};
  }

  AutomatonState get(std::size_t index) const {
    AutomatonState s;
    s.rhs_used = bits_[index];
    s.residues.assign(residues_.begin() + static_cast<std::ptrdiff_t>(index * m_),
                      residues_.begin() + static_cast<std::ptrdiff_t>((index + 1) * m_));
    return s;
  }

 private:
  std::uint64_t encode(const AutomatonState& s) const {
    std::uint64_t code = 0;
    for (std::size_t j = m_; j-- > 0;) {
      code = code * static_cast<std::uint64_t>(2 * bounds_[j] + 1) +
             static_cast<std::uint64_t>(s.residues[j] + bounds_[j]);
    }
    return code * 2 + (s.rhs_used ? 1 : 0);
  }

  std::vector<Int> bounds_;
  std::size_t m_;
  bool fits_ = true;
  std::vector<std::uint32_t> dense_;
  std::unordered_map<std::uint64_t, std::size_t> sparse_;
  std::map<std::pair<bool, std::vector<Int>>, std::size_t> fallback_;
  std::vector<bool> bits_;
  std::vector<Int> residues_;
};

std::vector<Letter> letter_order(std::size_t n) {
  std::vector<Letter> out;
  for (Letter l = 1; l <= n; ++l) out.push_back(l);
  out.push_back(kRhsLetter);
  return out;
}

}  // namespace

FeasibilityResult check_feasible(const IlpInstance& inst, Int multiplier, std::size_t max_states) {
  const IlpAutomaton aut(inst, multiplier);
  StateStore store(aut.bounds());
  std::vector<std::size_t> parent;
  std::vector<Letter> via;
  const auto order = letter_order(inst.num_vars());

  FeasibilityResult result;
  store.intern(aut.initial());
  parent.push_back(StateStore::kNone);
  via.push_back(kRhsLetter);

  // States are numbered in discovery order, so scanning indices is the queue.
  for (std::size_t head = 0; head < store.size(); ++head) {
    const AutomatonState current = store.get(head);
    for (Letter l : order) {
      auto next = aut.step(current, l);
      if (!next) continue;
      auto [index, inserted] = store.intern(*next);
      if (!inserted) continue;
      parent.push_back(head);
      via.push_back(l);
      if (aut.is_final(*next)) {
        Word w;
        for (std::size_t at = index; parent[at] != StateStore::kNone; at = parent[at]) w.letters.push_back(via[at]);
        std::reverse(w.letters.begin(), w.letters.end());
        result.verdict = Verdict::kFeasible;
        result.witness = std::move(w);
        result.states_explored = store.size();
        return result;
      }
      if (store.size() > max_states) {
        result.verdict = Verdict::kInconclusive;
        result.states_explored = store.size();
        return result;
      }
    }
  }
  result.verdict = Verdict::kInfeasible;
  result.states_explored = store.size();
  return result;
}

Word schedule_to_word(const IlpInstance& inst, const ScheduleTrace& trace, Int multiplier) {
  const std::size_t m = inst.num_constraints();
  const auto bounds = residue_bounds(inst, multiplier);
  std::vector<Letter> letters;
  for (const auto& e : trace.steps) {
    if (e.is_increase() && e.label != 0) letters.push_back(e.label);
  }

  // prefix[q] = residues after the first q variable letters, no b yet.
  const std::size_t len = letters.size();
  std::vector<std::vector<Int>> prefix(len + 1, std::vector<Int>(m, 0));
  for (std::size_t q = 0; q < len; ++q) {
    for (std::size_t j = 0; j < m; ++j) prefix[q + 1][j] = checked_add(prefix[q][j], inst.coeff(j, letters[q] - 1));
  }
  auto within = [&](const std::vector<Int>& r, bool shifted) {
    for (std::size_t j = 0; j < m; ++j) {
      const Int v = shifted ? checked_sub(r[j], inst.rhs(j)) : r[j];
      if (checked_abs(v) > bounds[j]) return false;
    }
    return true;
  };
  // b inserted before letter p: prefixes 1..p stay unshifted, p..len shifted.
  std::vector<bool> tail_ok(len + 2, true);
  for (std::size_t q = len + 1; q-- > 0;) tail_ok[q] = tail_ok[q + 1] && within(prefix[q], true);
  bool head_ok = true;
  for (std::size_t p = 0; p <= len; ++p) {
    if (p > 0) head_ok = head_ok && within(prefix[p], false);
    if (!head_ok) break;
    if (tail_ok[p]) {
      Word w;
      w.letters.assign(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(p));
      w.letters.push_back(kRhsLetter);
      w.letters.insert(w.letters.end(), letters.begin() + static_cast<std::ptrdiff_t>(p), letters.end());
      if (!IlpAutomaton(inst, multiplier).accepts(w)) break;
      return w;
    }
  }
  throw Error("projected schedule is rejected by the automaton; the residue bound is too tight");
}

ExplicitAutomaton export_automaton(const IlpInstance& inst, Int multiplier, std::size_t max_states) {
  const IlpAutomaton aut(inst, multiplier);
  StateStore store(aut.bounds());
  ExplicitAutomaton out;
  store.intern(aut.initial());
  const auto order = letter_order(inst.num_vars());
  for (std::size_t head = 0; head < store.size(); ++head) {
    const AutomatonState current = store.get(head);
    if (aut.is_final(current)) out.final_state = head;
    for (Letter l : order) {
      auto next = aut.step(current, l);
      if (!next) continue;
      auto [index, inserted] = store.intern(*next);
      if (inserted && store.size() > max_states) {
        throw BudgetExceeded("automaton has more than " + std::to_string(max_states) + " reachable states");
      }
      out.transitions.push_back({head, l, index});
    }
  }
  out.states.reserve(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) out.states.push_back(store.get(i));
  return out;
}

namespace {

std::string state_label(const AutomatonState& s) {
  std::string out = s.rhs_used ? "1 | (" : "0 | (";
  for (std::size_t j = 0; j < s.residues.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(s.residues[j]);
  }
  return out + ")";
}

std::string letter_name(const IlpInstance& inst, Letter l) {
  return l == kRhsLetter ? std::string(kRhsSymbol) : inst.var_name(l - 1);
}

}  // namespace

std::string automaton_to_dot(const IlpInstance& inst, const ExplicitAutomaton& a) {
  std::ostringstream out;
  out << "digraph automaton {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    out << "  s" << i << " [label=\"" << state_label(a.states[i]) << "\", shape="
        << (a.final_state == i ? "doublecircle" : "circle");
    if (i == 0) out << ", style=bold, initial=true";
    out << "];\n";
  }
  for (const auto& t : a.transitions) {
    out << "  s" << t.from << " -> s" << t.to << " [label=\"" << letter_name(inst, t.letter) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string automaton_to_text(const IlpInstance& inst, const ExplicitAutomaton& a) {
  std::ostringstream out;
  std::size_t t = 0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    out << "state " << i << ": " << state_label(a.states[i]);
    if (i == 0) out << " initial";
    if (a.final_state == i) out << " final";
    out << '\n';
    for (; t < a.transitions.size() && a.transitions[t].from == i; ++t) {
      out << "  " << letter_name(inst, a.transitions[t].letter) << " -> " << a.transitions[t].to << '\n';
    }
  }
  return out.str();
}

}  // namespace ilppw
