#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shockstab {

struct RunConfig {
  std::string command;
  std::string input;   // JSON config path; empty means {} (only `models` accepts that)
  std::string output;  // path prefix; defaults to the command name
  unsigned threads = 1;
  long long seed = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCertificationFailed = 3;
inline constexpr int kExitNumerical = 4;

const std::vector<std::string>& cli_commands();

/// Runs one command and writes its artifacts under `config.output`:
///   <prefix>.json       JSON report (all commands but curve / region-map)
///   <prefix>.csv        tabular output (curve, region-map, simulate)
///   <prefix>.meta.json  resolved config next to every CSV
/// Errors are reported as one JSON object on `err`; the return value is the
/// process exit status.
int dispatch(const RunConfig& config, std::ostream& err);

}  // namespace shockstab
