#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace plscore {

inline constexpr const char* kVersion = "1.0.0";

enum ExitStatus : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitNumerical = 4,
};

/// Everything one CLI invocation needs. Filled from flags and an optional
/// flat key=value config file (flags win).
struct RunConfig {
  std::string command;  // fit | cv | bootstrap | stability | simulate
  std::filesystem::path data;
  std::string response = "y";
  std::string weights;
  std::string family = "gaussian";
  std::vector<std::string> na_tokens{"NA", "", "NaN"};
  int ncomp = 0;
  int max_ncomp = 0;
  int k = 8;
  int repeats = 100;
  std::string rule;  // empty: family default
  std::string scheme = "yt";
  int B = 1000;
  std::string ci = "bca";
  double alpha = 0.05;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
  bool figures = true;
  unsigned threads = 0;  // 0 keeps the library default
  // simulate
  int n = 100;
  int p = 10;
  double missing = 0.0;
};

/// Output files keyed by file name, written together at the end of a run.
using Artifacts = std::map<std::string, std::string>;

/// Throws ConfigError when the configuration is unusable.
void validate(const RunConfig& cfg);

/// Runs the pipeline and returns the artifacts, manifest included. Throws
/// the library error types.
Artifacts execute(const RunConfig& cfg);

/// Validates, executes and writes artifacts under cfg.out. Errors become one
/// line on stderr ("error: <kind>: <message>") and an exit status.
int run(const RunConfig& cfg);

/// Parses argv (and --config FILE) then calls run().
int cli_main(int argc, const char* const* argv);

std::string sha256_hex(const std::string& bytes);

}  // namespace plscore
