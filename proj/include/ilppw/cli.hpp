#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilppw/instance.hpp"

namespace ilppw::cli {

enum ExitCode : int {
  kExitFeasible = 0,
  kExitInfeasible = 1,
  kExitUsage = 2,
  kExitInconclusive = 3,
};

// Everything a subcommand reports. The JSON and text renderings are produced
// from the same `fields` object.
struct RunReport {
  std::string subcommand;
  int exit_code = kExitUsage;
  nlohmann::ordered_json fields = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

// args excludes the program name. Artifacts and reports go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        RunReport* report = nullptr);

// Parses a "--solution" value: "5,3,1" or "x1=5,x3=1" (unnamed user
// variables are 0). Slack columns are filled in when omitted.
Solution parse_solution_arg(const IlpInstance& inst, const std::string& text);

}  // namespace ilppw::cli
