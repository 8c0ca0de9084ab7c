#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ilppw/automaton.hpp"
#include "ilppw/instance.hpp"

namespace ilppw {

// BP-v1: a bounded-counter guarded-command program equivalent to the ILP
// automaton. Emitted text, for the instance -2 x1 + 3 x2 = 0:
//
//   bp 1
//   var r1 in [-18, 18] init 0
//   bit B init 0
//   rule x1: true -> r1 += -2
//   rule x2: true -> r1 += 3
//   rule b: B == 0 -> B := 1
//   target: B == 1 && r1 == 0
//
// Zero updates are omitted; a rule without updates reads `skip`. A rule is
// disabled when its guard fails or an update leaves a variable's range.
std::string emit_boolean_program(const IlpInstance& inst, Int multiplier = kDefaultMultiplier);

struct BpVariable {
  std::string name;
  Int lo = 0;
  Int hi = 0;
  Int init = 0;
};

struct BpCondition {
  std::size_t var = 0;
  bool equal = true;  // == or !=
  Int value = 0;
};

struct BpUpdate {
  std::size_t var = 0;
  bool assign = false;  // := instead of +=
  Int value = 0;
};

struct BpRule {
  std::string name;
  std::vector<BpCondition> guard;  // conjunction, empty is `true`
  std::vector<BpUpdate> updates;
};

struct BooleanProgram {
  std::vector<BpVariable> vars;
  std::vector<BpRule> rules;
  std::vector<BpCondition> target;
};

BooleanProgram parse_boolean_program(std::string_view text);

struct BpResult {
  Verdict verdict = Verdict::kInconclusive;  // kFeasible: target reachable
  std::size_t states_explored = 0;
  std::vector<std::string> trace;  // rule names of a shortest run
};

BpResult interpret_boolean_program(const BooleanProgram& program,
                                   std::size_t max_states = kDefaultMaxStates);
BpResult interpret_boolean_program(std::string_view text, std::size_t max_states = kDefaultMaxStates);

}  // namespace ilppw
