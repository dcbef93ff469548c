#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chordlab/report.hpp"
#include "chordlab/verify.hpp"

namespace chordlab {

enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitConfig = 2, kExitDivergent = 3 };

/// Bad flags, unreadable or malformed input specs; mapped to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSamples = 1000000;

/// CHORDLAB_DEFAULT_SAMPLES if set, else 10^6.
std::uint64_t defaultSamples();

/// "a:b:step" (inclusive of b) or "a,b,c"; must be strictly monotone.
std::vector<double> parseAlphaGrid(const std::string& s);

struct RunConfig {
  std::string command;
  std::string shapeSpec, functionSpec;  ///< file path or inline JSON
  int n = 2;
  std::optional<double> alpha;
  std::vector<double> alphaGrid;
  Budget budget;
  std::optional<std::string> route;
  Format format = Format::JSON;
  std::string outPath;
  // compute
  std::string functional;
  int order = 1;
  std::string direction;
  std::string method = "mc";
  // verify / sweep
  std::string check, suite;
  std::optional<double> param;

  void validate() const {
    if (!shapeSpec.empty() && !functionSpec.empty()) throw ConfigError("give exactly one of --shape / --function");
    if (budget.nSamples < 2) throw ConfigError("--samples must be >= 2");
    if (budget.nShards < 1) throw ConfigError("--shards must be >= 1");
    if (n < 1 || n > kMaxDim) throw ConfigError("--n must lie in [1, 8]");
  }
  bool hasInput() const { return !shapeSpec.empty() || !functionSpec.empty(); }
};

/// One row per alpha of the chosen inequality check (default THEOREM_A).
std::vector<VerificationReport> runSweep(const RunConfig& config);

/// Full command-line entry point; never throws. Output is written once, at the end.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chordlab
