#include "qss/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qss {

double PolarizationAngle::reduce(double radians) {
  double r = std::fmod(radians, kPi);
  if (r < 0.0) r += kPi;
  // fmod of a tiny negative value can round back up to exactly pi.
  if (r >= kPi) r = 0.0;
  return r;
}

double PolarizationAngle::distance(PolarizationAngle a, PolarizationAngle b) {
  const double d = std::fabs(a.radians_ - b.radians_);
  return std::min(d, kPi - d);
}

std::optional<DecisionAngle> DecisionAngle::from_polarization(PolarizationAngle angle, double tol) {
  for (int q = 0; q < 4; ++q) {
    const DecisionAngle candidate(q);
    if (approx_equal(angle, candidate.to_polarization(), tol)) return candidate;
  }
  return std::nullopt;
}

std::string DecisionAngle::label() const {
  switch (quarter_turns_) {
    case 0: return "0";
    case 1: return "pi/4";
    case 2: return "pi/2";
    default: return "-pi/4";
  }
}

std::optional<DecisionAngle> DecisionAngle::from_label(std::string_view text) {
  for (int q = 0; q < 4; ++q) {
    if (DecisionAngle(q).label() == text) return DecisionAngle(q);
  }
  return std::nullopt;
}

std::optional<MeasurementOutcome> MeasurementOutcome::from_label(std::string_view text) {
  if (text == "vacuum") return vacuum();
  if (text == "ambiguous") return ambiguous();
  if (const auto a = DecisionAngle::from_label(text)) return angle(*a);
  return std::nullopt;
}

std::string MeasurementOutcome::label() const {
  switch (kind_) {
    case Kind::Vacuum: return "vacuum";
    case Kind::Ambiguous: return "ambiguous";
    case Kind::Angle: break;
  }
  return angle_.label();
}

std::pair<DecisionAngle, DecisionAngle> basis_angles(MeasurementBasis basis) {
  if (basis == MeasurementBasis::Rectilinear) return {DecisionAngle(0), DecisionAngle(2)};
  return {DecisionAngle(1), DecisionAngle(3)};
}

CoherentPulse rotate(const CoherentPulse& pulse, PolarizationAngle delta) {
  return {pulse.mean_photons, pulse.polarization + delta};
}

PhotonBatch sample_photon_count(const CoherentPulse& pulse, Rng& rng) {
  if (pulse.mean_photons <= 0.0) return {0, pulse.polarization};
  std::poisson_distribution<std::uint64_t> poisson(pulse.mean_photons);
  return {poisson(rng), pulse.polarization};
}

std::pair<CoherentPulse, CoherentPulse> beam_split(const CoherentPulse& pulse, double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("beam splitter ratio must lie in [0, 1]");
  }
  const double transmitted = pulse.mean_photons * ratio;
  return {{transmitted, pulse.polarization},
          {pulse.mean_photons - transmitted, pulse.polarization}};
}

MeasurementOutcome pbs_measure(const PhotonBatch& batch, MeasurementBasis basis, Rng& rng) {
  if (batch.count == 0) return MeasurementOutcome::vacuum();
  const auto [reference, orthogonal] = basis_angles(basis);
  const double c = std::cos(batch.polarization.radians() - reference.to_polarization().radians());
  double p = c * c;
  // Residues from angle cancellation leave p within a few ulps of 0 or 1.
  constexpr double kSnap = 1e-15;
  if (p < kSnap) p = 0.0;
  if (p > 1.0 - kSnap) p = 1.0;

  std::binomial_distribution<std::uint64_t> clicks(batch.count, p);
  const std::uint64_t on_reference = clicks(rng);
  if (on_reference == batch.count) return MeasurementOutcome::angle(reference);
  if (on_reference == 0) return MeasurementOutcome::angle(orthogonal);
  return MeasurementOutcome::ambiguous();
}

PolarizationAngle random_polarization(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, kPi);
  return PolarizationAngle(u(rng));
}

DecisionAngle random_decision_angle(Rng& rng) {
  std::uniform_int_distribution<int> u(0, 3);
  return DecisionAngle(u(rng));
}

}  // namespace qss
