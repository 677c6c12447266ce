#include "qss/session.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "qss/interceptor.hpp"

namespace qss {

void SessionConfig::validate() const {
  if (receivers < 1) throw ConfigError("receivers", "need at least one receiver");
  if (!(mean_photons > 0.0) || !std::isfinite(mean_photons)) {
    throw ConfigError("mu", "mean photon number must be positive");
  }
  if (rounds < 1) throw ConfigError("rounds", "need at least one round");
  if (!link_transmissions.empty()) {
    if (link_transmissions.size() != receivers + 1) {
      throw ConfigError("transmission", "need one link per receiver plus the return link");
    }
    for (double t : link_transmissions) {
      if (!(t > 0.0 && t <= 1.0)) throw ConfigError("transmission", "must lie in (0, 1]");
    }
  }
  if (!(countermeasure_ratio > 0.0 && countermeasure_ratio <= 1.0)) {
    throw ConfigError("bs_ratio", "must lie in (0, 1]");
  }
  if (parity_block < 1) throw ConfigError("parity_block", "must be positive");
  if (dishonest_receiver > receivers) throw ConfigError("dishonest", "no such receiver");
  if (!(dishonest_rate >= 0.0 && dishonest_rate <= 1.0)) {
    throw ConfigError("dishonest_rate", "must lie in [0, 1]");
  }
  if (const auto* pns = std::get_if<PnsSplit>(&adversary)) {
    if (pns->hop < 1 || pns->hop > hop_count(receivers)) {
      throw ConfigError("adversary", "PNS hop outside the ring");
    }
  }
}

Topology SessionConfig::topology() const {
  if (link_transmissions.empty()) return Topology::uniform(receivers, 1.0);
  return Topology(link_transmissions);
}

namespace {

// Quantum phase of one round, ending with Rec-1's stored measurement.
class RoundRunner {
 public:
  RoundRunner(const SessionConfig& config, const Topology& topology, Interceptor* eve, Rng& rng)
      : config_(config), topology_(topology), eve_(eve), rng_(rng),
        receivers_(config.receivers) {
    for (std::size_t i = 0; i < receivers_.size(); ++i) receivers_[i].index = i + 1;
  }

  SenderState& alice() { return alice_; }
  std::vector<ReceiverState>& receivers() { return receivers_; }

  RoundRecord run(std::size_t round) {
    RoundRecord rec;
    rec.round = round;
    const std::size_t n = receivers_.size();
    std::size_t hop = 1;

    Transit transit{alice_prepare(alice_, config_.mean_photons, rng_), std::nullopt};
    rec.theta = alice_.hide_angle;

    for (std::size_t i = 0; i < n; ++i) {
      cross(round, hop++, i, transit, rec);
      transit.pulse = receiver_forward(receivers_[i], transit.pulse, rng_);
      rec.hide_angles.push_back(receivers_[i].hide_angle);
      rec.shuffles.push_back(receivers_[i].shuffle_angle);
    }
    cross(round, hop++, n, transit, rec);

    std::bernoulli_distribution coin(0.5);
    rec.bit = coin(rng_) ? 1 : 0;
    const PolarizationAngle before = transit.pulse.polarization;
    transit.pulse = alice_encode(alice_, transit.pulse, rec.bit, rng_);
    if (transit.tag) transit.tag->polarization += transit.pulse.polarization - before;
    rec.basis_choice = alice_.basis_choices.back();
    rec.key_angle = alice_.key_angles.back();

    if (config_.countermeasure_ratio < 1.0) {
      transit.pulse = beam_split(transit.pulse, config_.countermeasure_ratio).first;
      if (transit.tag) {
        std::bernoulli_distribution passes(config_.countermeasure_ratio);
        if (!passes(rng_)) transit.tag.reset();
      }
    }

    cross(round, hop++, n, transit, rec);
    for (std::size_t i = n; i-- > 0;) {
      transit.pulse = receiver_backward(receivers_[i], transit.pulse);
      if (i > 0) cross(round, hop++, i, transit, rec);
    }

    rec.rec1_polarization = transit.pulse.polarization;
    const auto [rect, diag] = rec1_measure(receivers_.front(), transit.pulse, rng_);
    rec.rect = rect;
    rec.diag = diag;
    return rec;
  }

 private:
  void cross(std::size_t round, std::size_t hop, std::size_t link, Transit& transit, RoundRecord& rec) {
    if (eve_) transit = eve_->on_hop(round, hop, std::move(transit), rng_);
    transit.pulse = attenuate(transit.pulse, topology_.link_transmission(link));
    rec.hop_mean_photons.push_back(transit.pulse.mean_photons);
  }

  const SessionConfig& config_;
  const Topology& topology_;
  Interceptor* eve_;
  Rng& rng_;
  SenderState alice_;
  std::vector<ReceiverState> receivers_;
};

// Decision angles as held (truth) or as announced (wire). Rec-1 announces
// l - s_1, so shuffles[0] never leaves Rec-1.
struct Announcements {
  DecisionAngle rec1_decision;
  std::vector<DecisionAngle> shuffles;  // s_1..s_N
};

}  // namespace

SessionResult run_session(const SessionConfig& config) {
  Rng rng(config.seed);
  return run_session(config, rng);
}

SessionResult run_session(const SessionConfig& config, Rng& rng) {
  config.validate();
  const Topology topology = config.topology();
  const std::size_t n = config.receivers;
  std::unique_ptr<Eve> eve = make_eve(config.adversary, n, config.mean_photons);
  RoundRunner runner(config, topology, eve.get(), rng);

  SessionResult result;
  result.receiver_sifted.resize(n);
  std::vector<std::size_t> errors(n, 0);
  EveScore score;
  score.strategy = strategy_name(config.adversary);

  std::bernoulli_distribution lies(config.dishonest_rate);
  std::uniform_int_distribution<int> offset(1, 3);

  while (result.rounds_run < config.rounds) {
    const std::size_t remaining = config.rounds - result.rounds_run;
    std::size_t batch = remaining;
    if (config.target_key_bits > 0) {
      batch = std::min(remaining, std::max<std::size_t>(config.target_key_bits - result.kept_rounds, 1));
    }

    // Quantum phase for the whole batch, then the public announcement.
    std::vector<RoundRecord> records;
    records.reserve(batch);
    for (std::size_t b = 0; b < batch; ++b) records.push_back(runner.run(result.rounds_run + b));
    result.rounds_run += batch;

    for (auto& rec : records) {
      DecisionAngle shuffle_sum;
      for (auto s : rec.shuffles) shuffle_sum += s;
      const SiftDecision decision = sift_round({rec.rect, rec.diag}, rec.basis_choice, shuffle_sum);
      rec.status = decision.status;

      if (decision.status == SiftStatus::VacuumDiscard) ++result.vacuum_discards;
      if (decision.status == SiftStatus::AmbiguousDiscard) ++result.ambiguous_discards;
      if (eve) eve->on_announcement({rec.round, rec.basis_choice, decision.measured.has_value()}, rng);

      if (decision.status != SiftStatus::Kept) continue;
      ++result.kept_rounds;

      // Everyone's true contribution, then what actually goes on the wire.
      Announcements truth{*decision.measured - rec.shuffles.front(), rec.shuffles};
      Announcements wire = truth;
      if (config.dishonest_receiver > 0 && lies(rng)) {
        const DecisionAngle d(offset(rng));
        if (config.dishonest_receiver == 1) {
          wire.rec1_decision += d;
        } else {
          wire.shuffles[config.dishonest_receiver - 1] += d;
        }
      }

      const int alice_bit = rec.bit;
      result.alice_sifted.push_back(static_cast<std::uint8_t>(alice_bit));
      for (std::size_t r = 0; r < n; ++r) {
        // Receiver r+1 uses its own true value and everyone else's wire value.
        const DecisionAngle rec1 = r == 0 ? truth.rec1_decision : wire.rec1_decision;
        std::vector<DecisionAngle> others(wire.shuffles.begin() + 1, wire.shuffles.end());
        if (r > 0) others[r - 1] = truth.shuffles[r];
        const DecisionAngle key = cooperative_decode(rec1, others);
        const int bit = angle_to_bit(key);
        result.receiver_sifted[r].push_back(static_cast<std::uint8_t>(bit));
        if (bit != alice_bit) ++errors[r];
        if (r == 0) {
          rec.decoded_angle = key;
          rec.decoded_bit = bit;
        }
      }

      if (eve) {
        ++score.kept_rounds;
        if (eve->attempted(rec.round)) ++score.attempted;
        if (const auto g = eve->guess(rec.round)) {
          ++score.guessed;
          if (*g == alice_bit) ++score.correct;
        }
      }
    }

    if (config.record_rounds) {
      std::move(records.begin(), records.end(), std::back_inserter(result.records));
    }
    if (config.target_key_bits > 0 && result.kept_rounds >= config.target_key_bits) break;
  }

  result.discard_fraction = static_cast<double>(result.vacuum_discards + result.ambiguous_discards) /
                            static_cast<double>(result.rounds_run);
  result.key_shortfall = config.target_key_bits > 0 && result.kept_rounds < config.target_key_bits;
  result.receiver_errors = errors;
  result.receiver_qber.resize(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    if (result.kept_rounds > 0) {
      result.receiver_qber[r] = static_cast<double>(errors[r]) / static_cast<double>(result.kept_rounds);
    }
  }
  result.qber = *std::max_element(result.receiver_qber.begin(), result.receiver_qber.end());
  if (eve) result.eve = score;

  result.verdict = {Verdict::Kind::AbortRetry, std::nullopt};
  if (result.key_shortfall || result.kept_rounds == 0) return result;
  try {
    const std::uint64_t public_seed = config.seed ^ 0x9e3779b97f4a7c15ULL;
    ReconcileResult rr = reconcile_group(result.alice_sifted, result.receiver_sifted,
                                         config.parity_block, public_seed);
    result.alice_final = std::move(rr.alice);
    result.receiver_final = std::move(rr.receivers);
    result.reconciliation_discarded_blocks = rr.discarded_blocks;
  } catch (const RestartRequired&) {
    return result;
  }

  result.alice_digest = key_digest(result.alice_final);
  for (const auto& key : result.receiver_final) result.receiver_digests.push_back(key_digest(key));
  result.verdict = integrity_check(result.alice_digest, result.receiver_digests);
  return result;
}

}  // namespace qss
