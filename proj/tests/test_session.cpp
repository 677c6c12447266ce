#include <doctest.h>

#include <cmath>

#include "qss/analysis.hpp"
#include "qss/session.hpp"

using namespace qss;

namespace {

SessionConfig honest(std::size_t receivers, double t, std::size_t rounds, std::uint64_t seed) {
  SessionConfig c;
  c.receivers = receivers;
  if (t < 1.0) c.link_transmissions.assign(receivers + 1, t);
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

void check_honest(const SessionResult& r, std::size_t receivers) {
  CHECK(r.qber == 0.0);
  CHECK(r.verdict.kind == Verdict::Kind::Accept);
  REQUIRE(r.receiver_sifted.size() == receivers);
  for (const auto& key : r.receiver_sifted) CHECK(key == r.alice_sifted);
  for (const auto& key : r.receiver_final) CHECK(key == r.alice_final);
  for (const auto& d : r.receiver_digests) CHECK(d == r.alice_digest);
  std::size_t kept = 0;
  for (const auto& rec : r.records) {
    if (rec.status != SiftStatus::Kept) continue;
    ++kept;
    CHECK(rec.decoded_bit == rec.bit);
    CHECK(rec.decoded_angle == rec.key_angle);
  }
  CHECK(kept == r.kept_rounds);
}

}  // namespace

TEST_CASE("honest two-receiver session") {
  const auto r = run_session(honest(2, 1.0, 1000, 42));
  CHECK(r.rounds_run == 1000);
  CHECK(r.records.size() == 1000);
  check_honest(r, 2);
  CHECK_FALSE(r.eve.has_value());
}

TEST_CASE("honest five-receiver session with loss") {
  const auto r = run_session(honest(5, 0.9, 2000, 7));
  check_honest(r, 5);
  for (const auto& rec : r.records) {
    REQUIRE(rec.shuffles.size() == 5);
    REQUIRE(rec.hide_angles.size() == 5);
    // Everything but k and the shuffles has cancelled by the time Rec-1 measures.
    DecisionAngle expected = rec.key_angle;
    for (auto s : rec.shuffles) expected += s;
    CHECK(PolarizationAngle::distance(rec.rec1_polarization, expected.to_polarization()) < 1e-9);
  }
}

TEST_CASE("mean photon number along the ring") {
  auto c = honest(2, 0.5, 5, 1);
  const auto r = run_session(c);
  for (const auto& rec : r.records) {
    REQUIRE(rec.hop_mean_photons.size() == 5);
    for (std::size_t h = 0; h < 5; ++h) {
      CHECK(rec.hop_mean_photons[h] == doctest::Approx(6.0 * std::pow(0.5, double(h + 1))));
    }
  }
}

TEST_CASE("discard fraction follows the vacuum probability") {
  auto c = honest(2, 0.8, 100'000, 3);
  c.record_rounds = false;
  const auto r = run_session(c);
  const double mu_final = 6.0 * std::pow(0.8, 5);
  const double p = std::exp(-mu_final / 2);
  CHECK(r.ambiguous_discards == 0);
  CHECK(r.vacuum_discards + r.kept_rounds == r.rounds_run);
  CHECK(std::abs(r.discard_fraction - p) < 3.0 * std::sqrt(p * (1 - p) / 100'000));
}

TEST_CASE("sessions are reproducible from the seed") {
  auto c = honest(3, 0.7, 500, 99);
  c.adversary = PnsSplit{2};
  const auto a = run_session(c);
  const auto b = run_session(c);
  CHECK(a.records == b.records);
  CHECK(a.alice_final == b.alice_final);
  c.seed = 100;
  CHECK(run_session(c).records != a.records);
}

TEST_CASE("round budget and key target") {
  auto c = honest(2, 0.5, 5000, 5);
  c.target_key_bits = 300;
  const auto r = run_session(c);
  CHECK(r.kept_rounds >= 300);
  CHECK(r.rounds_run < 5000);
  CHECK_FALSE(r.key_shortfall);

  c.rounds = 10;
  const auto short_run = run_session(c);
  CHECK(short_run.key_shortfall);
  CHECK(short_run.verdict.kind == Verdict::Kind::AbortRetry);
}

TEST_CASE("a lying receiver is flagged") {
  auto c = honest(2, 1.0, 400, 8);
  c.dishonest_receiver = 1;
  c.dishonest_rate = 1.0;
  const auto r = run_session(c);
  CHECK(r.receiver_sifted[0] == r.alice_sifted);
  CHECK(r.receiver_sifted[1] != r.alice_sifted);
  CHECK(r.verdict == Verdict{Verdict::Kind::DishonestFlag, 1});
}

TEST_CASE("impersonation raises the error rate to the closed form") {
  SessionConfig c = honest(2, 0.5, 40'000, 11);
  c.adversary = Impersonate{};
  c.record_rounds = false;
  const auto r = run_session(c);
  const double expected = p_error_closed_form(6.0, 0.5);
  const auto est = bernoulli_estimate(r.receiver_errors[0], r.kept_rounds);
  CHECK(est.sigmas_from(expected) < 3.0);
  CHECK(r.verdict.kind != Verdict::Kind::Accept);
}

TEST_CASE("tag attack without countermeasure reads every attacked bit") {
  SessionConfig c = honest(2, 1.0, 5000, 12);
  c.adversary = TagPhoton{};
  const auto r = run_session(c);
  REQUIRE(r.eve.has_value());
  CHECK(r.eve->attempted > 0);
  CHECK(r.eve->correct == r.eve->attempted);
  CHECK(r.qber == 0.0);
}

TEST_CASE("configuration errors name the key") {
  const auto key_of = [](SessionConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string();
  };
  SessionConfig c;
  CHECK(key_of(c).empty());
  c.receivers = 0;
  CHECK(key_of(c) == "receivers");
  c = {};
  c.mean_photons = -1;
  CHECK(key_of(c) == "mu");
  c = {};
  c.link_transmissions = {0.5, 0.5};
  CHECK(key_of(c) == "transmission");
  c = {};
  c.link_transmissions = {0.5, 0.0, 1.0};
  CHECK(key_of(c) == "transmission");
  c = {};
  c.countermeasure_ratio = 0.0;
  CHECK(key_of(c) == "bs_ratio");
  c = {};
  c.dishonest_receiver = 3;
  CHECK(key_of(c) == "dishonest");
  c = {};
  c.adversary = PnsSplit{6};
  CHECK(key_of(c) == "adversary");
}
