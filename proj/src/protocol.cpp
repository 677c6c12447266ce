#include "qss/protocol.hpp"

#include <stdexcept>

namespace qss {

DecisionAngle encode_map(int bit, int basis_choice) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("key bit must be 0 or 1");
  if (basis_choice == 1) return bit == 0 ? DecisionAngle::zero() : DecisionAngle::half();
  if (basis_choice == 2) return bit == 0 ? DecisionAngle::plus_quarter() : DecisionAngle::minus_quarter();
  throw std::invalid_argument("basis choice must be 1 or 2");
}

int angle_to_bit(DecisionAngle key_angle) {
  return key_angle.quarter_turns() <= 1 ? 0 : 1;
}

CoherentPulse alice_prepare(SenderState& state, double mean_photons, Rng& rng) {
  return alice_prepare(state, mean_photons, random_polarization(rng));
}

CoherentPulse alice_prepare(SenderState& state, double mean_photons, PolarizationAngle forced_theta) {
  state.hide_angle = forced_theta;
  state.mean_photons = mean_photons;
  return {mean_photons, forced_theta};
}

CoherentPulse alice_encode(SenderState& state, const CoherentPulse& pulse, int bit, Rng& rng) {
  std::uniform_int_distribution<int> coin(1, 2);
  return alice_encode(state, pulse, bit, coin(rng));
}

CoherentPulse alice_encode(SenderState& state, const CoherentPulse& pulse, int bit, int basis_choice) {
  const DecisionAngle key = encode_map(bit, basis_choice);
  state.basis_choices.push_back(basis_choice);
  state.key_bits.push_back(bit);
  state.key_angles.push_back(key);
  return rotate(pulse, key.to_polarization() - state.hide_angle);
}

CoherentPulse receiver_forward(ReceiverState& state, const CoherentPulse& pulse, Rng& rng) {
  const PolarizationAngle phi = random_polarization(rng);
  const DecisionAngle shuffle = random_decision_angle(rng);
  return receiver_forward(state, pulse, phi, shuffle);
}

CoherentPulse receiver_forward(ReceiverState& state, const CoherentPulse& pulse,
                               PolarizationAngle phi, DecisionAngle shuffle) {
  state.hide_angle = phi;
  state.shuffle_angle = shuffle;
  state.shuffle_history.push_back(shuffle);
  return rotate(pulse, phi + shuffle.to_polarization());
}

CoherentPulse receiver_backward(const ReceiverState& state, const CoherentPulse& pulse) {
  return rotate(pulse, -state.hide_angle);
}

std::pair<MeasurementOutcome, MeasurementOutcome> rec1_measure(ReceiverState& state,
                                                               const CoherentPulse& pulse,
                                                               Rng& rng) {
  const auto [rect_arm, diag_arm] = beam_split(pulse, 0.5);
  const MeasurementOutcome rect =
      pbs_measure(sample_photon_count(rect_arm, rng), MeasurementBasis::Rectilinear, rng);
  const MeasurementOutcome diag =
      pbs_measure(sample_photon_count(diag_arm, rng), MeasurementBasis::Diagonal, rng);
  state.stored_outcomes.emplace_back(rect, diag);
  return {rect, diag};
}

MeasurementBasis measured_basis(int basis_choice, DecisionAngle shuffle_sum) {
  const bool diagonal = (basis_choice == 2) != shuffle_sum.is_diagonal();
  return diagonal ? MeasurementBasis::Diagonal : MeasurementBasis::Rectilinear;
}

SiftDecision sift_round(const std::pair<MeasurementOutcome, MeasurementOutcome>& outcomes,
                        int basis_choice, DecisionAngle shuffle_sum) {
  const MeasurementOutcome& chosen =
      measured_basis(basis_choice, shuffle_sum) == MeasurementBasis::Rectilinear ? outcomes.first
                                                                                  : outcomes.second;
  switch (chosen.kind()) {
    case MeasurementOutcome::Kind::Vacuum: return {SiftStatus::VacuumDiscard, std::nullopt};
    case MeasurementOutcome::Kind::Ambiguous: return {SiftStatus::AmbiguousDiscard, std::nullopt};
    case MeasurementOutcome::Kind::Angle: break;
  }
  return {SiftStatus::Kept, chosen.value()};
}

std::vector<SiftDecision> sift(
    std::span<const std::pair<MeasurementOutcome, MeasurementOutcome>> outcomes,
    std::span<const int> announced_basis_choices, std::span<const DecisionAngle> shuffle_sums) {
  if (outcomes.size() != announced_basis_choices.size() || outcomes.size() != shuffle_sums.size()) {
    throw std::invalid_argument("sift inputs must cover the same rounds");
  }
  std::vector<SiftDecision> decisions;
  decisions.reserve(outcomes.size());
  for (std::size_t m = 0; m < outcomes.size(); ++m) {
    decisions.push_back(sift_round(outcomes[m], announced_basis_choices[m], shuffle_sums[m]));
  }
  return decisions;
}

DecisionAngle cooperative_decode(DecisionAngle rec1_decision,
                                 std::span<const DecisionAngle> other_shuffles) {
  DecisionAngle key = rec1_decision;
  for (DecisionAngle s : other_shuffles) key -= s;
  return key;
}

std::array<std::array<DecisionAngle, 4>, 4> decode_table() {
  std::array<std::array<DecisionAngle, 4>, 4> table{};
  for (int s2 = 0; s2 < 4; ++s2) {
    for (int r1 = 0; r1 < 4; ++r1) {
      const DecisionAngle other[] = {DecisionAngle(s2)};
      table[s2][r1] = cooperative_decode(DecisionAngle(r1), other);
    }
  }
  return table;
}

}  // namespace qss
