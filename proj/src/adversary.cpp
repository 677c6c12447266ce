#include "qss/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qss/protocol.hpp"

namespace qss {

std::string strategy_name(const EveStrategy& strategy) {
  struct Visitor {
    std::string operator()(const NoEve&) const { return "none"; }
    std::string operator()(const PnsSplit&) const { return "pns"; }
    std::string operator()(const TagPhoton&) const { return "tag"; }
    std::string operator()(const Impersonate&) const { return "impersonate"; }
  };
  return std::visit(Visitor{}, strategy);
}

double eve_mean_photons(double mu, double t, int channel) {
  if (channel != 1 && channel != 3 && channel != 4) {
    throw std::invalid_argument("PNS channel must be 1, 3 or 4");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("mean photon number must be positive");
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("transmission must lie in (0, 1]");
  return mu * std::pow(t, channel - 1) * (1.0 - t);
}

double usd_success(std::uint64_t n) {
  if (n < 3) return 0.0;
  const std::uint64_t halvings = (n - 1) / 2;
  // 2^-halvings underflows to 0 long before the exponent limit matters.
  return 1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(halvings, 2000)));
}

std::optional<DecisionAngle> usd_measure(const PhotonBatch& batch, Rng& rng) {
  std::bernoulli_distribution success(usd_success(batch.count));
  if (!success(rng)) return std::nullopt;
  return DecisionAngle::from_polarization(batch.polarization);
}

QndSplit qnd_split(const PhotonBatch& batch) {
  if (batch.count < 2) return {batch, std::nullopt};
  return {{batch.count - 1, batch.polarization}, PhotonBatch{1, batch.polarization}};
}

CoherentPulse pns_intercept(const CoherentPulse& pulse, Rng& rng, EveState& state,
                            std::size_t round, std::size_t hop) {
  const QndSplit split = qnd_split(sample_photon_count(pulse, rng));
  if (split.stored) {
    state.stored.push_back({round, hop, *split.stored});
    state.attempted_rounds.insert(round);
  }
  return {static_cast<double>(split.forwarded.count), pulse.polarization};
}

std::optional<int> guess_from_photon(const PhotonBatch& photon, int basis_choice, Rng& rng) {
  const MeasurementOutcome outcome = pbs_measure(photon, key_basis(basis_choice), rng);
  if (!outcome.has_angle()) return std::nullopt;
  return angle_to_bit(outcome.value());
}

TagRoundOutcome tag_attack_round(double mean_photons, Rng& rng, bool alice_uses_bs,
                                 double alice_bs_ratio) {
  TagRoundOutcome out;
  SenderState alice;
  const CoherentPulse emitted = alice_prepare(alice, mean_photons, rng);
  const QndSplit split = qnd_split(sample_photon_count(emitted, rng));
  if (!split.stored) return out;
  out.tagged = true;

  // The tag skips the receivers and re-enters Alice's box with the pulse.
  PhotonBatch tag = *split.stored;
  std::bernoulli_distribution coin(0.5);
  const int bit = coin(rng) ? 1 : 0;
  const CoherentPulse returned{emitted.mean_photons, emitted.polarization};
  const CoherentPulse encoded = alice_encode(alice, returned, bit, rng);
  tag.polarization += encoded.polarization - returned.polarization;

  if (alice_uses_bs) {
    std::bernoulli_distribution passes(alice_bs_ratio);
    if (!passes(rng)) return out;
  }
  out.survived = true;
  const auto guess = guess_from_photon(tag, alice.basis_choices.back(), rng);
  out.recovered = guess && *guess == bit;
  return out;
}

ImpersonationOutcome impersonate_round(double mu, double t, Rng& rng,
                                       std::optional<std::uint64_t> forced_photons) {
  ImpersonationOutcome out;
  std::bernoulli_distribution coin(0.5);
  const int bit = coin(rng) ? 1 : 0;
  const int basis_choice = coin(rng) ? 2 : 1;
  out.alice_angle = encode_map(bit, basis_choice);

  PhotonBatch intercepted{0, out.alice_angle.to_polarization()};
  if (forced_photons) {
    intercepted.count = *forced_photons;
  } else {
    intercepted = sample_photon_count({mu * t, out.alice_angle.to_polarization()}, rng);
  }
  out.photons = intercepted.count;

  const auto identified = usd_measure(intercepted, rng);
  out.usd_succeeded = identified.has_value();
  out.eve_angle = identified ? *identified : random_decision_angle(rng);
  out.bit_error = angle_to_bit(out.eve_angle) != bit;
  return out;
}

std::optional<int> Eve::guess(std::size_t round) const {
  const auto it = state_.guesses.find(round);
  if (it == state_.guesses.end()) return std::nullopt;
  return it->second;
}

namespace {

// Photons are stored in round order, at most one per round.
void guess_from_store(EveState& state, const PublicRound& info, Rng& rng) {
  if (!info.kept) return;
  const auto it = std::lower_bound(
      state.stored.begin(), state.stored.end(), info.round,
      [](const StoredPhoton& s, std::size_t round) { return s.round < round; });
  if (it == state.stored.end() || it->round != info.round) return;
  if (auto g = guess_from_photon(it->photon, info.basis_choice, rng)) state.guesses[info.round] = *g;
}

class PnsEve final : public Eve {
 public:
  explicit PnsEve(std::size_t hop) : hop_(hop) {}

  Transit on_hop(std::size_t round, std::size_t hop, Transit transit, Rng& rng) override {
    if (hop == hop_) transit.pulse = pns_intercept(transit.pulse, rng, state_, round, hop);
    return transit;
  }

  void on_announcement(const PublicRound& info, Rng& rng) override {
    guess_from_store(state_, info, rng);
  }

 private:
  std::size_t hop_;
};

class TagEve final : public Eve {
 public:
  explicit TagEve(std::size_t receivers) : receivers_(receivers) {}

  Transit on_hop(std::size_t round, std::size_t hop, Transit transit, Rng& rng) override {
    if (hop == 1) {
      carried_.reset();
      const QndSplit split = qnd_split(sample_photon_count(transit.pulse, rng));
      transit.pulse.mean_photons = static_cast<double>(split.forwarded.count);
      if (split.stored) {
        carried_ = *split.stored;
        state_.attempted_rounds.insert(round);
      }
    } else if (hop == hop_into_alice(receivers_) && carried_) {
      transit.tag = *carried_;
      carried_.reset();
    } else if (hop == hop_out_of_alice(receivers_) && transit.tag) {
      state_.stored.push_back({round, hop, *transit.tag});
      transit.tag.reset();
    }
    return transit;
  }

  void on_announcement(const PublicRound& info, Rng& rng) override {
    guess_from_store(state_, info, rng);
  }

 private:
  std::size_t receivers_;
  std::optional<PhotonBatch> carried_;
};

class ImpersonatingEve final : public Eve {
 public:
  ImpersonatingEve(std::size_t receivers, double mean_photons)
      : receivers_(receivers), mean_photons_(mean_photons) {}

  Transit on_hop(std::size_t round, std::size_t hop, Transit transit, Rng& rng) override {
    if (hop == 1) {
      alice_pulse_ = transit.pulse;
      own_angle_ = random_polarization(rng);
      transit.pulse = {mean_photons_, own_angle_};
    } else if (hop == hop_into_alice(receivers_)) {
      returned_ = transit.pulse;
      disguise_ = random_polarization(rng);
      transit.pulse = rotate(alice_pulse_, disguise_);
    } else if (hop == hop_out_of_alice(receivers_)) {
      const CoherentPulse encoded = rotate(transit.pulse, -disguise_);
      const PhotonBatch batch = sample_photon_count(encoded, rng);
      const auto identified = usd_measure(batch, rng);
      const DecisionAngle angle = identified ? *identified : random_decision_angle(rng);
      state_.attempted_rounds.insert(round);
      state_.guesses[round] = angle_to_bit(angle);
      transit.pulse = rotate(returned_, angle.to_polarization() - own_angle_);
      transit.tag.reset();
    }
    return transit;
  }

  void on_announcement(const PublicRound&, Rng&) override {}

 private:
  std::size_t receivers_;
  double mean_photons_;
  CoherentPulse alice_pulse_;
  CoherentPulse returned_;
  PolarizationAngle own_angle_;
  PolarizationAngle disguise_;
};

}  // namespace

std::unique_ptr<Eve> make_eve(const EveStrategy& strategy, std::size_t receivers, double mean_photons) {
  if (std::holds_alternative<PnsSplit>(strategy)) {
    const std::size_t hop = std::get<PnsSplit>(strategy).hop;
    if (hop < 1 || hop > hop_count(receivers)) {
      throw std::invalid_argument("PNS hop outside the ring");
    }
    return std::make_unique<PnsEve>(hop);
  }
  if (std::holds_alternative<TagPhoton>(strategy)) return std::make_unique<TagEve>(receivers);
  if (std::holds_alternative<Impersonate>(strategy)) {
    return std::make_unique<ImpersonatingEve>(receivers, mean_photons);
  }
  return nullptr;
}

}  // namespace qss
