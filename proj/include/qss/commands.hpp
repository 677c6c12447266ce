#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qss {

inline constexpr int kExitAccept = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitAbortRetry = 2;
inline constexpr int kExitDishonest = 3;
inline constexpr int kExitConfig = 64;

struct CommandOutput {
  int exit_code = kExitAccept;
  std::string out;  // what goes to stdout
  std::string err;  // diagnostics
};

struct SimulateOptions {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::optional<std::string> out_path;
  std::optional<std::string> trace_path;
};

/// Runs one session. Exit code follows the verdict: 0 accept, 2 abort and
/// retry, 3 dishonest receiver flagged, 64 bad configuration (no files are
/// written in that case).
CommandOutput cmd_simulate(const SimulateOptions& options);

struct CurveOptions {
  double min_mu_t = 0.0;
  double max_mu_t = 12.0;
  double step = 0.1;
  std::optional<std::string> out_path;
};

CommandOutput cmd_curve(const CurveOptions& options);

CommandOutput cmd_table(const std::optional<std::string>& out_path);

struct AttackOptions {
  std::string strategy;  // pns | tag | impersonate
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::uint64_t trials = 100'000;
  std::optional<std::string> out_path;
};

CommandOutput cmd_attack(const AttackOptions& options);

}  // namespace qss
