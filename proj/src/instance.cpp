#include "ilppw/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ilppw {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      line_(line),
      column_(column) {}

Solution::Solution(std::vector<Int> values) : values_(std::move(values)) {
  for (Int v : values_) {
    if (v < 0) throw Error("solution entries must be non-negative");
  }
}

Int Solution::largest() const {
  Int best = 0;
  for (Int v : values_) best = std::max(best, v);
  return best;
}

bool Solution::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](Int v) { return v == 0; });
}

std::string to_string(const Solution& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + ")";
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

IlpInstance::IlpInstance(std::size_t num_constraints, std::size_t num_vars,
                         std::vector<Int> coeffs, std::vector<Int> rhs,
                         std::vector<std::string> var_names, std::vector<bool> is_slack)
    : num_constraints_(num_constraints),
      num_vars_(num_vars),
      coeffs_(std::move(coeffs)),
      rhs_(std::move(rhs)),
      var_names_(std::move(var_names)),
      is_slack_(std::move(is_slack)) {
  if (num_vars_ == 0) throw Error("instance needs at least one variable");
  if (num_constraints_ == 0) throw Error("instance needs at least one constraint");
  if (coeffs_.size() != num_vars_ * num_constraints_) throw Error("coefficient matrix has wrong size");
  if (rhs_.size() != num_constraints_) throw Error("rhs vector has wrong size");
  if (var_names_.size() != num_vars_) throw Error("wrong number of variable names");
  if (is_slack_.empty()) is_slack_.assign(num_vars_, false);
  if (is_slack_.size() != num_vars_) throw Error("wrong number of slack flags");
  std::unordered_set<std::string> seen;
  for (const auto& name : var_names_) {
    if (!is_identifier(name)) throw Error("invalid variable name '" + name + "'");
    if (name == kRhsSymbol) throw Error("variable name 'b' is reserved");
    if (!seen.insert(name).second) throw Error("duplicate variable name '" + name + "'");
  }
}

IlpInstance IlpInstance::from_rows(const std::vector<std::vector<Int>>& rows, std::vector<Int> rhs) {
  if (rows.empty()) throw Error("instance needs at least one constraint");
  const std::size_t n = rows.front().size();
  std::vector<Int> coeffs;
  for (const auto& r : rows) {
    if (r.size() != n) throw Error("ragged coefficient matrix");
    coeffs.insert(coeffs.end(), r.begin(), r.end());
  }
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return IlpInstance(rows.size(), n, std::move(coeffs), std::move(rhs), std::move(names));
}

Int IlpInstance::label_coeff(std::size_t row, std::size_t label) const {
  return label == 0 ? checked_neg(rhs_[row]) : coeff(row, label - 1);
}

std::size_t IlpInstance::num_slack() const {
  return static_cast<std::size_t>(std::count(is_slack_.begin(), is_slack_.end(), true));
}

bool IlpInstance::rhs_is_zero() const {
  return std::all_of(rhs_.begin(), rhs_.end(), [](Int v) { return v == 0; });
}

Int IlpInstance::max_abs_coeff(std::size_t row) const {
  Int best = 0;
  for (Int a : this->row(row)) best = std::max(best, checked_abs(a));
  return best;
}

std::size_t IlpInstance::find_var(std::string_view name) const {
  auto it = std::find(var_names_.begin(), var_names_.end(), name);
  return static_cast<std::size_t>(it - var_names_.begin());
}

namespace {

// Hand-written scanner for ILP-v1. Tracks 1-based line/column for errors.
class ConstraintParser {
 public:
  ConstraintParser(std::string_view text, std::size_t line, std::size_t column_offset)
      : text_(text), line_(line), col0_(column_offset) {}

  RawConstraint parse() {
    RawConstraint out;
    std::unordered_set<std::string> seen;
    skip_ws();
    bool first = true;
    while (true) {
      int sign = 1;
      if (!first) {
        skip_ws();
        if (peek() == '+') {
          ++pos_;
        } else if (peek() == '-') {
          sign = -1;
          ++pos_;
        } else {
          break;
        }
      }
      skip_ws();
      const std::size_t term_col = pos_;
      Term term = parse_term();
      if (sign < 0) term.coefficient = checked_neg(term.coefficient);
      if (!seen.insert(term.variable).second) {
        throw error("duplicate variable '" + term.variable + "' in constraint", term_col);
      }
      out.terms.push_back(std::move(term));
      first = false;
    }
    skip_ws();
    out.relation = parse_relation();
    skip_ws();
    out.rhs = parse_integer(/*required=*/true).value;
    skip_ws();
    if (pos_ != text_.size()) throw error("unexpected trailing input", pos_);
    return out;
  }

 private:
  struct Number {
    Int value = 1;
    bool present = false;
  };

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  ParseError error(const std::string& msg, std::size_t at) const {
    return ParseError(msg, line_, col0_ + at + 1);
  }

  Number parse_integer(bool required) {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    bool negative = false;
    if (p < text_.size() && (text_[p] == '-' || text_[p] == '+')) {
      negative = text_[p] == '-';
      ++p;
      while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    }
    const std::size_t digits = p;
    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
    if (p == digits) {
      if (required || p != start) throw error("expected integer", start);
      return {};
    }
    Int magnitude = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + p, magnitude);
    if (ec != std::errc()) throw error("integer out of range", start);
    pos_ = p;
    return {negative ? -magnitude : magnitude, true};
  }

  Term parse_term() {
    const std::size_t start = pos_;
    Number coef = parse_integer(/*required=*/false);
    skip_ws();
    const std::size_t id_start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(text_.substr(id_start, pos_ - id_start));
    if (name.empty()) {
      throw error(coef.present ? "expected variable after coefficient" : "expected term", start);
    }
    if (!is_identifier(name)) throw error("invalid identifier '" + name + "'", id_start);
    if (name == kRhsSymbol) throw error("'b' is reserved and cannot name a variable", id_start);
    return {std::move(name), coef.value};
  }

  Relation parse_relation() {
    auto rest = text_.substr(pos_);
    if (rest.starts_with("<=")) {
      pos_ += 2;
      return Relation::kLessEqual;
    }
    if (rest.starts_with(">=")) {
      pos_ += 2;
      return Relation::kGreaterEqual;
    }
    if (rest.starts_with("=")) {
      pos_ += 1;
      return Relation::kEqual;
    }
    throw error("expected one of =, <=, >=", pos_);
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<RawConstraint> parse_constraints(std::string_view text) {
  std::vector<RawConstraint> out;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    if (line.find_first_not_of(" \t") != std::string_view::npos) {
      std::size_t piece_begin = 0;
      while (piece_begin <= line.size()) {
        std::size_t piece_end = line.find(';', piece_begin);
        if (piece_end == std::string_view::npos) piece_end = line.size();
        std::string_view piece = line.substr(piece_begin, piece_end - piece_begin);
        if (piece.find_first_not_of(" \t") != std::string_view::npos) {
          out.push_back(ConstraintParser(piece, line_no, piece_begin).parse());
        }
        piece_begin = piece_end + 1;
      }
    }
    begin = end + 1;
  }
  if (out.empty()) throw ParseError("empty constraint set", line_no, 1);
  return out;
}

IlpInstance to_standard_form(std::span<const RawConstraint> constraints) {
  if (constraints.empty()) throw Error("empty constraint set");
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& c : constraints) {
    for (const auto& t : c.terms) {
      if (index.emplace(t.variable, names.size()).second) names.push_back(t.variable);
    }
  }
  const std::size_t user_vars = names.size();
  std::size_t slack = 0;
  for (const auto& c : constraints) slack += c.relation != Relation::kEqual;

  const std::size_t m = constraints.size();
  const std::size_t n = user_vars + slack;
  std::vector<Int> coeffs(m * n, 0);
  std::vector<Int> rhs(m);
  std::vector<bool> is_slack(n, false);
  std::size_t next_slack = user_vars;
  for (std::size_t j = 0; j < m; ++j) {
    const auto& c = constraints[j];
    for (const auto& t : c.terms) {
      Int& cell = coeffs[j * n + index.at(t.variable)];
      cell = checked_add(cell, t.coefficient);
    }
    rhs[j] = c.rhs;
    if (c.relation != Relation::kEqual) {
      coeffs[j * n + next_slack] = c.relation == Relation::kLessEqual ? 1 : -1;
      is_slack[next_slack] = true;
      // Leading underscore keeps generated names out of the user namespace.
      std::string name = "_s" + std::to_string(next_slack - user_vars + 1);
      while (index.count(name)) name += '_';
      index.emplace(name, next_slack);
      names.push_back(std::move(name));
      ++next_slack;
    }
  }
  return IlpInstance(m, n, std::move(coeffs), std::move(rhs), std::move(names), std::move(is_slack));
}

IlpInstance parse_instance(std::string_view text) {
  auto constraints = parse_constraints(text);
  return to_standard_form(constraints);
}

std::string format_instance(const IlpInstance& inst) {
  std::ostringstream out;
  for (std::size_t j = 0; j < inst.num_constraints(); ++j) {
    bool first = true;
    for (std::size_t i = 0; i < inst.num_vars(); ++i) {
      Int a = inst.coeff(j, i);
      if (a == 0) continue;
      if (!first) out << " + ";
      out << a << ' ' << inst.var_name(i);
      first = false;
    }
    if (first) out << "0 " << inst.var_name(0);
    out << " = " << inst.rhs(j) << '\n';
  }
  return out.str();
}

std::vector<Int> evaluate(const IlpInstance& inst, std::span<const Int> assignment) {
  if (assignment.size() != inst.num_vars()) {
    throw Error("assignment has " + std::to_string(assignment.size()) + " entries, expected " +
                std::to_string(inst.num_vars()));
  }
  std::vector<Int> residual(inst.num_constraints());
  for (std::size_t j = 0; j < inst.num_constraints(); ++j) {
    Int acc = 0;
    for (std::size_t i = 0; i < inst.num_vars(); ++i) {
      acc = checked_add(acc, checked_mul(inst.coeff(j, i), assignment[i]));
    }
    residual[j] = checked_sub(acc, inst.rhs(j));
  }
  return residual;
}

bool is_solution(const IlpInstance& inst, std::span<const Int> assignment) {
  auto r = evaluate(inst, assignment);
  return std::all_of(r.begin(), r.end(), [](Int v) { return v == 0; });
}

Solution complete_slack(const IlpInstance& inst, std::span<const Int> user_values) {
  const std::size_t user_vars = inst.num_vars() - inst.num_slack();
  if (user_values.size() == inst.num_vars()) return Solution({user_values.begin(), user_values.end()});
  if (user_values.size() != user_vars) {
    throw Error("expected " + std::to_string(user_vars) + " or " + std::to_string(inst.num_vars()) +
                " values, got " + std::to_string(user_values.size()));
  }
  std::vector<Int> full(user_values.begin(), user_values.end());
  full.resize(inst.num_vars(), 0);
  auto residual = evaluate(inst, full);
  for (std::size_t i = user_vars; i < inst.num_vars(); ++i) {
    for (std::size_t j = 0; j < inst.num_constraints(); ++j) {
      Int a = inst.coeff(j, i);
      if (a == 0) continue;
      // a is +1 or -1: a * s + residual = 0.
      Int value = a > 0 ? checked_neg(residual[j]) : residual[j];
      if (value < 0) {
        throw Error("constraint " + std::to_string(j + 1) + " is violated by the given values");
      }
      full[i] = value;
      break;
    }
  }
  return Solution(std::move(full));
}

std::vector<Int> project_slack(const IlpInstance& inst, const Solution& s) {
  std::vector<Int> out;
  for (std::size_t i = 0; i < inst.num_vars(); ++i) {
    if (!inst.is_slack(i)) out.push_back(s[i]);
  }
  return out;
}

}  // namespace ilppw
