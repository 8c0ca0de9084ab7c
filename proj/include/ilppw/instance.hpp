#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ilppw/arith.hpp"

namespace ilppw {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Name of the right-hand-side symbol. It doubles as the automaton letter for
// b and can never be used as a variable name.
inline constexpr std::string_view kRhsSymbol = "b";

enum class Relation { kEqual, kLessEqual, kGreaterEqual };

struct Term {
  std::string variable;
  Int coefficient = 0;
};

// One constraint as written by the user, before slack conversion.
struct RawConstraint {
  std::vector<Term> terms;
  Relation relation = Relation::kEqual;
  Int rhs = 0;
};

// Non-negative integer assignment to the variables of an instance.
class Solution {
 public:
  Solution() = default;
  explicit Solution(std::vector<Int> values);

  std::size_t size() const { return values_.size(); }
  Int operator[](std::size_t i) const { return values_[i]; }
  std::span<const Int> values() const { return values_; }

  // s_l: the largest entry, 0 for the empty or all-zero vector.
  Int largest() const;
  bool is_zero() const;

  friend bool operator==(const Solution&, const Solution&) = default;
  friend auto operator<=>(const Solution&, const Solution&) = default;

 private:
  std::vector<Int> values_;
};

std::string to_string(const Solution& s);

// The system A x = b over non-negative integers. Row j and column i are
// 0-based in the storage; labels used by the graph and automaton modules are
// 1-based for variables with label 0 standing for b.
class IlpInstance {
 public:
  IlpInstance(std::size_t num_constraints, std::size_t num_vars, std::vector<Int> coeffs,
              std::vector<Int> rhs, std::vector<std::string> var_names,
              std::vector<bool> is_slack = {});

  // Convenience for tests: names default to x1..xn.
  static IlpInstance from_rows(const std::vector<std::vector<Int>>& rows, std::vector<Int> rhs);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_constraints() const { return num_constraints_; }

  Int coeff(std::size_t row, std::size_t col) const { return coeffs_[row * num_vars_ + col]; }
  Int rhs(std::size_t row) const { return rhs_[row]; }
  std::span<const Int> rhs() const { return rhs_; }
  std::span<const Int> row(std::size_t j) const {
    return std::span<const Int>(coeffs_).subspan(j * num_vars_, num_vars_);
  }

  // Coefficient of a label in row j: a_{j,i} for label i in [1,n], -b_j for 0.
  Int label_coeff(std::size_t row, std::size_t label) const;

  const std::vector<std::string>& var_names() const { return var_names_; }
  const std::string& var_name(std::size_t col) const { return var_names_[col]; }
  bool is_slack(std::size_t col) const { return is_slack_[col]; }
  std::size_t num_slack() const;
  bool rhs_is_zero() const;

  // max_i |a_{j,i}|
  Int max_abs_coeff(std::size_t row) const;

  // Column index of a variable name, or num_vars() if absent.
  std::size_t find_var(std::string_view name) const;

  friend bool operator==(const IlpInstance&, const IlpInstance&) = default;

 private:
  std::size_t num_constraints_;
  std::size_t num_vars_;
  std::vector<Int> coeffs_;
  std::vector<Int> rhs_;
  std::vector<std::string> var_names_;
  std::vector<bool> is_slack_;
};

bool is_identifier(std::string_view name);

// Parses ILP-v1 text into raw constraints (no slack conversion yet).
std::vector<RawConstraint> parse_constraints(std::string_view text);

// Each <= row gains a slack column with +1, each >= row one with -1. Slack
// columns follow the user variables and are flagged on the instance.
IlpInstance to_standard_form(std::span<const RawConstraint> constraints);

IlpInstance parse_instance(std::string_view text);

// Renders an instance back to ILP-v1 (standard form, slack columns included).
std::string format_instance(const IlpInstance& inst);

// A s - b, one entry per constraint.
std::vector<Int> evaluate(const IlpInstance& inst, std::span<const Int> assignment);

bool is_solution(const IlpInstance& inst, std::span<const Int> assignment);
inline bool is_solution(const IlpInstance& inst, const Solution& s) {
  return is_solution(inst, s.values());
}

// Extends values for the user variables with the slack values they imply.
// Throws if a slack value would be negative.
Solution complete_slack(const IlpInstance& inst, std::span<const Int> user_values);

// Drops slack columns from a full assignment.
std::vector<Int> project_slack(const IlpInstance& inst, const Solution& s);

}  // namespace ilppw
