#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qss/interceptor.hpp"
#include "qss/optics.hpp"

namespace qss {

struct NoEve {
  bool operator==(const NoEve&) const = default;
};
/// Photon-number splitting on a single hop (1-based travel order).
struct PnsSplit {
  std::size_t hop = 1;
  bool operator==(const PnsSplit&) const = default;
};
/// Eve tags the returning pulse with a photon taken from Alice's output.
struct TagPhoton {
  bool operator==(const TagPhoton&) const = default;
};
/// Eve plays Alice toward the receivers and the receivers toward Alice.
struct Impersonate {
  bool operator==(const Impersonate&) const = default;
};

using EveStrategy = std::variant<NoEve, PnsSplit, TagPhoton, Impersonate>;

std::string strategy_name(const EveStrategy& strategy);

/// mu * T^(c-1) * (1 - T) for PNS channel c in {1, 3, 4}.
/// Throws std::invalid_argument for other c, mu <= 0 or T outside (0, 1].
double eve_mean_photons(double mu, double t, int channel);

/// Optimal probability of unambiguously telling apart the four BB84-type
/// states given n copies: 0 below three copies, else 1 - 2^-floor((n-1)/2).
double usd_success(std::uint64_t n);

/// Succeeds with probability usd_success(count) and then reports the batch's
/// angle exactly. Fails (nullopt) otherwise, or when the polarization is not
/// one of the four decision angles.
std::optional<DecisionAngle> usd_measure(const PhotonBatch& batch, Rng& rng);

struct StoredPhoton {
  std::size_t round = 0;
  std::size_t hop = 0;
  PhotonBatch photon;
};

struct EveState {
  std::vector<StoredPhoton> stored;
  std::set<std::size_t> attempted_rounds;
  std::map<std::size_t, int> guesses;
};

struct QndSplit {
  PhotonBatch forwarded;
  std::optional<PhotonBatch> stored;
};

/// Keeps one photon out of n >= 2 and forwards the rest.
QndSplit qnd_split(const PhotonBatch& batch);

/// QND photon count followed by qnd_split. The forwarded pulse carries the
/// remaining photon count as its mean photon number.
CoherentPulse pns_intercept(const CoherentPulse& pulse, Rng& rng, EveState& state,
                            std::size_t round, std::size_t hop);

/// Eve's guess from a stored photon once j is public: measure it in the key
/// basis of j and read the bit.
std::optional<int> guess_from_photon(const PhotonBatch& photon, int basis_choice, Rng& rng);

struct TagRoundOutcome {
  bool tagged = false;     // Alice's pulse had >= 2 photons
  bool survived = false;   // tag made it through Alice's splitter
  bool recovered = false;  // Eve read Alice's bit correctly
};

/// One round of the tagging attack at photon level. Alice's countermeasure
/// splitter passes the tag with probability `alice_bs_ratio`.
TagRoundOutcome tag_attack_round(double mean_photons, Rng& rng, bool alice_uses_bs,
                                 double alice_bs_ratio);

struct ImpersonationOutcome {
  std::uint64_t photons = 0;
  bool usd_succeeded = false;
  DecisionAngle alice_angle;
  DecisionAngle eve_angle;
  bool bit_error = false;  // Rec-1 decodes a bit other than Alice's
};

/// Eve reads Alice's encoded pulse at mean mu*T and re-encodes onto her own
/// pulse: the exact angle after a successful USD, a uniformly random one of
/// the four otherwise. `forced_photons` replaces the Poisson draw.
ImpersonationOutcome impersonate_round(double mu, double t, Rng& rng,
                                       std::optional<std::uint64_t> forced_photons = std::nullopt);

/// Session-level adversary. Eve only ever sees transits and public rounds.
class Eve : public Interceptor {
 public:
  const EveState& state() const { return state_; }

  bool attempted(std::size_t round) const override { return state_.attempted_rounds.contains(round); }
  std::optional<int> guess(std::size_t round) const override;

 protected:
  EveState state_;
};

/// nullptr for NoEve. Throws std::invalid_argument for a PNS hop outside
/// 1..2N+1.
std::unique_ptr<Eve> make_eve(const EveStrategy& strategy, std::size_t receivers, double mean_photons);

}  // namespace qss
