#include "ilppw/boolean_program.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ilppw {

std::string emit_boolean_program(const IlpInstance& inst, Int multiplier) {
  const auto bounds = residue_bounds(inst, multiplier);
  const std::size_t m = inst.num_constraints();
  std::ostringstream out;
  out << "bp 1\n";
  for (std::size_t j = 0; j < m; ++j) {
    out << "var r" << j + 1 << " in [" << -bounds[j] << ", " << bounds[j] << "] init 0\n";
  }
  out << "bit B init 0\n";
  for (std::size_t i = 0; i < inst.num_vars(); ++i) {
    out << "rule " << inst.var_name(i) << ": true -> ";
    bool any = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (inst.coeff(j, i) == 0) continue;
      out << (any ? ", " : "") << 'r' << j + 1 << " += " << inst.coeff(j, i);
      any = true;
    }
    out << (any ? "" : "skip") << '\n';
  }
  out << "rule " << kRhsSymbol << ": B == 0 -> ";
  for (std::size_t j = 0; j < m; ++j) {
    if (inst.rhs(j) == 0) continue;
    out << 'r' << j + 1 << " += " << checked_neg(inst.rhs(j)) << ", ";
  }
  out << "B := 1\n";
  out << "target: B == 1";
  for (std::size_t j = 0; j < m; ++j) out << " && r" << j + 1 << " == 0";
  out << '\n';
  return out.str();
}

namespace {

class BpParser {
 public:
  explicit BpParser(std::string_view text) : text_(text) {}

  BooleanProgram parse() {
    static const std::regex header(R"(^bp\s+1$)");
    static const std::regex var(R"(^var\s+([A-Za-z_]\w*)\s+in\s+\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s+init\s+(-?\d+)$)");
    static const std::regex bit(R"(^bit\s+([A-Za-z_]\w*)\s+init\s+([01])$)");
    static const std::regex rule(R"(^rule\s+([A-Za-z_]\w*)\s*:\s*(.*?)\s*->\s*(.*)$)");
    static const std::regex target(R"(^target\s*:\s*(.*)$)");

    BooleanProgram prog;
    bool seen_header = false;
    bool seen_target = false;
    std::istringstream in{std::string(text_)};
    std::string raw;
    std::smatch mt;
    while (std::getline(in, raw)) {
      ++line_;
      std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      if (!seen_header) {
        if (!std::regex_match(line, header)) throw error("expected header 'bp 1'");
        seen_header = true;
      } else if (seen_target) {
        throw error("content after target");
      } else if (std::regex_match(line, mt, var)) {
        BpVariable v{mt[1], number(mt[2]), number(mt[3]), number(mt[4])};
        if (v.lo > v.hi || v.init < v.lo || v.init > v.hi) throw error("bad range for '" + v.name + "'");
        declare(prog, std::move(v));
      } else if (std::regex_match(line, mt, bit)) {
        declare(prog, BpVariable{mt[1], 0, 1, number(mt[2])});
      } else if (std::regex_match(line, mt, rule)) {
        BpRule r;
        r.name = mt[1];
        r.guard = conditions(prog, mt[2]);
        r.updates = updates(prog, mt[3]);
        prog.rules.push_back(std::move(r));
      } else if (std::regex_match(line, mt, target)) {
        prog.target = conditions(prog, mt[1]);
        seen_target = true;
      } else {
        throw error("unrecognised line");
      }
    }
    if (!seen_header) throw error("missing header");
    if (!seen_target) throw error("missing target");
    return prog;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  ParseError error(const std::string& msg) const { return ParseError(msg, line_, 1); }

  Int number(const std::string& s) const {
    Int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw error("bad integer '" + s + "'");
    return v;
  }

  void declare(BooleanProgram& prog, BpVariable v) {
    if (index_.count(v.name)) throw error("variable '" + v.name + "' declared twice");
    index_[v.name] = prog.vars.size();
    prog.vars.push_back(std::move(v));
  }

  std::size_t lookup(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw error("undeclared variable '" + name + "'");
    return it->second;
  }

  std::vector<std::string> split(const std::string& s, const std::string& sep) const {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
      const std::size_t at = s.find(sep, begin);
      parts.push_back(trim(s.substr(begin, at == std::string::npos ? std::string::npos : at - begin)));
      if (at == std::string::npos) break;
      begin = at + sep.size();
    }
    return parts;
  }

  std::vector<BpCondition> conditions(const BooleanProgram&, const std::string& text) const {
    static const std::regex cmp(R"(^([A-Za-z_]\w*)\s*(==|!=)\s*(-?\d+)$)");
    std::vector<BpCondition> out;
    if (trim(text) == "true") return out;
    for (const auto& part : split(text, "&&")) {
      std::smatch mt;
      if (!std::regex_match(part, mt, cmp)) throw error("bad condition '" + part + "'");
      out.push_back({lookup(mt[1]), mt[2] == "==", number(mt[3])});
    }
    return out;
  }

  std::vector<BpUpdate> updates(const BooleanProgram&, const std::string& text) const {
    static const std::regex upd(R"(^([A-Za-z_]\w*)\s*(\+=|-=|:=)\s*(-?\d+)$)");
    std::vector<BpUpdate> out;
    if (trim(text) == "skip") return out;
    for (const auto& part : split(text, ",")) {
      std::smatch mt;
      if (!std::regex_match(part, mt, upd)) throw error("bad update '" + part + "'");
      Int value = number(mt[3]);
      if (mt[2] == "-=") value = checked_neg(value);
      out.push_back({lookup(mt[1]), mt[2] == ":=", value});
    }
    return out;
  }

  std::string_view text_;
  std::size_t line_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

bool holds(const std::vector<BpCondition>& conds, const std::vector<Int>& state) {
  return std::all_of(conds.begin(), conds.end(), [&](const BpCondition& c) {
    return (state[c.var] == c.value) == c.equal;
  });
}

}  // namespace

BooleanProgram parse_boolean_program(std::string_view text) { return BpParser(text).parse(); }

BpResult interpret_boolean_program(const BooleanProgram& program, std::size_t max_states) {
  const std::size_t k = program.vars.size();

  // Mixed-radix codes over the declared ranges when they fit in 64 bits.
  unsigned __int128 total = 1;
  bool fits = true;
  for (const auto& v : program.vars) {
    total *= static_cast<unsigned __int128>(v.hi - v.lo) + 1;
    if (total > std::numeric_limits<std::uint64_t>::max()) {
      fits = false;
      break;
    }
  }
  auto encode = [&](const std::vector<Int>& s) {
    std::uint64_t code = 0;
    for (std::size_t i = k; i-- > 0;) {
      code = code * static_cast<std::uint64_t>(program.vars[i].hi - program.vars[i].lo + 1) +
             static_cast<std::uint64_t>(s[i] - program.vars[i].lo);
    }
    return code;
  };
  std::vector<bool> dense;
  if (fits && total <= (1u << 26)) dense.assign(static_cast<std::size_t>(total), false);
  std::unordered_set<std::uint64_t> sparse;
  std::set<std::vector<Int>> fallback;
  auto insert = [&](const std::vector<Int>& s) {
    if (!fits) return fallback.insert(s).second;
    const std::uint64_t code = encode(s);
    if (!dense.empty()) {
      if (dense[code]) return false;
      dense[code] = true;
      return true;
    }
    return sparse.insert(code).second;
  };

  std::vector<std::vector<Int>> states;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> via;
  std::vector<Int> init;
  for (const auto& v : program.vars) init.push_back(v.init);
  insert(init);
  states.push_back(init);
  parent.push_back(0);
  via.push_back(0);

  BpResult result;
  auto reached = [&](std::size_t at) {
    result.verdict = Verdict::kFeasible;
    result.states_explored = states.size();
    for (; at != 0; at = parent[at]) result.trace.push_back(program.rules[via[at]].name);
    std::reverse(result.trace.begin(), result.trace.end());
    return result;
  };
  if (holds(program.target, init)) return reached(0);

  for (std::size_t head = 0; head < states.size(); ++head) {
    for (std::size_t r = 0; r < program.rules.size(); ++r) {
      const auto& rule = program.rules[r];
      if (!holds(rule.guard, states[head])) continue;
      std::vector<Int> next = states[head];
      bool in_range = true;
      for (const auto& u : rule.updates) {
        const Int value = u.assign ? u.value : checked_add(states[head][u.var], u.value);
        if (value < program.vars[u.var].lo || value > program.vars[u.var].hi) {
          in_range = false;
          break;
        }
        next[u.var] = value;
      }
      if (!in_range || !insert(next)) continue;
      states.push_back(std::move(next));
      parent.push_back(head);
      via.push_back(r);
      if (holds(program.target, states.back())) return reached(states.size() - 1);
      if (states.size() > max_states) {
        result.verdict = Verdict::kInconclusive;
        result.states_explored = states.size();
        return result;
      }
    }
  }
  result.verdict = Verdict::kInfeasible;
  result.states_explored = states.size();
  return result;
}

BpResult interpret_boolean_program(std::string_view text, std::size_t max_states) {
  return interpret_boolean_program(parse_boolean_program(text), max_states);
}

}  // namespace ilppw
