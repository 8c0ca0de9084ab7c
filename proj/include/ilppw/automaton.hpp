#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ilppw/decomposition.hpp"
#include "ilppw/instance.hpp"

namespace ilppw {

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Letter of the automaton alphabet: 0 is b, i in 1..n is x_i. Neighbours are
// always explored as x_1 < ... < x_n < b.
using Letter = std::size_t;
inline constexpr Letter kRhsLetter = 0;

struct Word {
  std::vector<Letter> letters;
  std::size_t size() const { return letters.size(); }
  friend bool operator==(const Word&, const Word&) = default;
};

std::string format_word(const IlpInstance& inst, const Word& w);
// Whitespace-separated variable names and "b". Unknown names throw.
Word parse_word(const IlpInstance& inst, std::string_view text);

using ParikhVector = Solution;

// Occurrence counts of x_1..x_n; b is projected away.
ParikhVector parikh(const IlpInstance& inst, const Word& w);

struct AutomatonState {
  bool rhs_used = false;
  std::vector<Int> residues;
  friend bool operator==(const AutomatonState&, const AutomatonState&) = default;
};

inline constexpr Int kDefaultMultiplier = 2;
inline constexpr std::size_t kDefaultMaxStates = 5'000'000;

// |r_j| <= multiplier * (n + 1) * max(max_i |a_{j,i}|, |b_j|)
std::vector<Int> residue_bounds(const IlpInstance& inst, Int multiplier = kDefaultMultiplier);

class IlpAutomaton {
 public:
  explicit IlpAutomaton(const IlpInstance& inst, Int multiplier = kDefaultMultiplier);

  const IlpInstance& instance() const { return inst_; }
  const std::vector<Int>& bounds() const { return bounds_; }
  AutomatonState initial() const;
  bool is_final(const AutomatonState& s) const;
  // nullopt is the dead state.
  std::optional<AutomatonState> step(const AutomatonState& s, Letter letter) const;
  bool accepts(const Word& w) const;

 private:
  IlpInstance inst_;
  std::vector<Int> bounds_;
};

enum class Verdict { kFeasible, kInfeasible, kInconclusive };
std::string to_string(Verdict v);

struct FeasibilityResult {
  // kInfeasible means no accepted word exists under the chosen bound.
  Verdict verdict = Verdict::kInconclusive;
  std::optional<Word> witness;  // shortest, then lexicographically first
  std::size_t states_explored = 0;
};

FeasibilityResult check_feasible(const IlpInstance& inst, Int multiplier = kDefaultMultiplier,
                                 std::size_t max_states = kDefaultMaxStates);

// Projects the increase steps of a trace onto letters and places one b at
// the earliest position that keeps every prefix within the bounds.
Word schedule_to_word(const IlpInstance& inst, const ScheduleTrace& trace,
                      Int multiplier = kDefaultMultiplier);

struct ExplicitAutomaton {
  struct Transition {
    std::size_t from = 0;
    Letter letter = 0;
    std::size_t to = 0;
  };
  std::vector<AutomatonState> states;  // states[0] is initial
  std::vector<Transition> transitions;
  std::optional<std::size_t> final_state;
};

// Every reachable state and transition. Throws BudgetExceeded when more than
// max_states states are reachable.
ExplicitAutomaton export_automaton(const IlpInstance& inst, Int multiplier = kDefaultMultiplier,
                                   std::size_t max_states = 10'000);

std::string automaton_to_dot(const IlpInstance& inst, const ExplicitAutomaton& a);
std::string automaton_to_text(const IlpInstance& inst, const ExplicitAutomaton& a);

}  // namespace ilppw
