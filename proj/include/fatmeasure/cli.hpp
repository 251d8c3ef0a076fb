#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fatmeasure::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,  // also a failed --verify replay
  kPrecondition = 2,
  kBudget = 3,
};

/// Runs one invocation; `args` excludes the program name. Reports go to
/// `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Recomputes every check of a report from its serialized config, inputs
/// and result. Returns {"command", "checks": [{"name", "ok"}], "ok"}.
nlohmann::json verify_report(const nlohmann::json& report);

}  // namespace fatmeasure::cli
