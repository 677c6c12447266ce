#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qss/adversary.hpp"
#include "qss/channel.hpp"
#include "qss/optics.hpp"
#include "qss/protocol.hpp"
#include "qss/reconcile.hpp"

namespace qss {

/// Invalid configuration; `key()` names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct SessionConfig {
  std::size_t receivers = 2;
  double mean_photons = 6.0;
  /// One transmission per ring link (receivers + 1); empty means lossless.
  std::vector<double> link_transmissions;
  /// Round budget.
  std::size_t rounds = 1000;
  /// Stop once this many rounds are kept (0 = run the whole budget).
  std::size_t target_key_bits = 0;
  EveStrategy adversary = NoEve{};
  /// Alice's countermeasure splitter; 1 means no splitter.
  double countermeasure_ratio = 1.0;
  std::size_t parity_block = 8;
  /// 1-based receiver that lies about its decision angle, 0 for none.
  std::size_t dishonest_receiver = 0;
  double dishonest_rate = 0.0;
  std::uint64_t seed = 1;
  bool record_rounds = true;

  /// Throws ConfigError.
  void validate() const;
  Topology topology() const;
};

struct RoundRecord {
  std::size_t round = 0;
  PolarizationAngle theta;
  std::vector<PolarizationAngle> hide_angles;  // phi_1..phi_N
  std::vector<DecisionAngle> shuffles;         // s_1..s_N
  int bit = 0;
  int basis_choice = 1;
  DecisionAngle key_angle;
  /// Mean photon number arriving at the far end of each hop.
  std::vector<double> hop_mean_photons;
  PolarizationAngle rec1_polarization;  // just before measurement
  MeasurementOutcome rect = MeasurementOutcome::vacuum();
  MeasurementOutcome diag = MeasurementOutcome::vacuum();
  SiftStatus status = SiftStatus::VacuumDiscard;
  std::optional<DecisionAngle> decoded_angle;  // Rec-1's view, iff Kept
  std::optional<int> decoded_bit;

  bool operator==(const RoundRecord&) const = default;
};

struct EveScore {
  std::string strategy;
  std::size_t kept_rounds = 0;
  std::size_t attempted = 0;  // kept rounds Eve attacked
  std::size_t guessed = 0;
  std::size_t correct = 0;

  /// Correct guesses per attacked kept round.
  double recovery_rate() const { return attempted ? double(correct) / double(attempted) : 0.0; }
  /// Correct guesses per guess made.
  double accuracy() const { return guessed ? double(correct) / double(guessed) : 0.0; }
};

struct SessionResult {
  std::size_t rounds_run = 0;
  std::size_t kept_rounds = 0;
  std::size_t vacuum_discards = 0;
  std::size_t ambiguous_discards = 0;
  double discard_fraction = 0.0;
  bool key_shortfall = false;

  Bits alice_sifted;
  std::vector<Bits> receiver_sifted;
  std::vector<std::size_t> receiver_errors;  // kept rounds decoded wrongly
  std::vector<double> receiver_qber;
  double qber = 0.0;

  Bits alice_final;
  std::vector<Bits> receiver_final;
  std::size_t reconciliation_discarded_blocks = 0;
  Digest alice_digest{};
  std::vector<Digest> receiver_digests;
  Verdict verdict;

  std::optional<EveScore> eve;
  std::vector<RoundRecord> records;
};

/// Runs the full protocol deterministically from `config.seed`.
SessionResult run_session(const SessionConfig& config);
SessionResult run_session(const SessionConfig& config, Rng& rng);

}  // namespace qss
