#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qss/adversary.hpp"
#include "qss/session.hpp"

namespace qss {

/// File-level simulation settings. Text form is one `key = value` per line,
/// `#` starts a comment:
///
///   receivers        N >= 1
///   mu               mean photon number
///   transmission     T, or one T per link (N + 1 values, comma separated)
///   link.length_km   km, single value or per link
///   link.loss_db_per_km
///   rounds           round budget
///   key_bits         stop once this many rounds are kept (0 = off)
///   adversary        none | pns:<hop> | tag | impersonate
///   bs_ratio         Alice's countermeasure splitter (1 = none)
///   parity_block     reconciliation block size
///   seed             u64
///   dishonest        lying receiver, 0 = none
///   dishonest_rate   probability of lying per kept round
///
/// `transmission` and the `link.*` keys are mutually exclusive.
struct SimConfig {
  std::size_t receivers = 2;
  double mu = 6.0;
  std::optional<std::vector<double>> transmission;
  std::optional<std::vector<double>> link_length_km;
  std::optional<std::vector<double>> link_loss_db_per_km;
  std::size_t rounds = 1000;
  std::size_t key_bits = 0;
  EveStrategy adversary = NoEve{};
  double bs_ratio = 1.0;
  std::size_t parity_block = 8;
  std::uint64_t seed = 1;
  std::size_t dishonest = 0;
  double dishonest_rate = 0.0;

  bool operator==(const SimConfig&) const = default;
};

/// Throws ConfigError naming the offending key.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

/// Applies one `key=value` on top of `config`, replacing any earlier value.
void apply_override(SimConfig& config, std::string_view assignment);

/// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SimConfig& config);

/// Resolves links into transmissions and validates the result.
SessionConfig to_session_config(const SimConfig& config);

EveStrategy parse_strategy(std::string_view text);
std::string format_strategy(const EveStrategy& strategy);

/// Shortest decimal text that round-trips exactly.
std::string format_double(double value);

}  // namespace qss
