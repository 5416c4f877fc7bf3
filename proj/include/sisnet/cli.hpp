#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sisnet/model.hpp"
#include "sisnet/spectral.hpp"

namespace sisnet {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitCertificateFailure = 2;
inline constexpr int kExitConditionFailure = 3;

struct AnalysisOutcome {
  int exit_code = kExitOk;
  nlohmann::json report;
};

/// Full analysis of one model: reproduction numbers, SCC cascade
/// equilibrium, stability verdict and certificates. Never throws on
/// analysis failures; they are reported with exit code 2.
AnalysisOutcome analyze_model(const EpidemicNetwork& net,
                              const PowerIterationOptions& power = {},
                              double fixed_point_tol = 1e-12);

/// Entry point of the command-line tool. `args` excludes the program name.
/// Reports go to `out` unless --output names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sisnet
