#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qss/optics.hpp"

namespace qss {

/// Alice's key angle for `bit` under basis-shuffling factor j in {1, 2}:
/// (0,1) -> 0, (0,2) -> pi/4, (1,1) -> pi/2, (1,2) -> -pi/4.
/// Throws std::invalid_argument for other inputs.
DecisionAngle encode_map(int bit, int basis_choice);

/// {0, pi/4} -> 0, {pi/2, -pi/4} -> 1.
int angle_to_bit(DecisionAngle key_angle);

/// Basis that Alice's key angle lives in for factor j.
inline MeasurementBasis key_basis(int basis_choice) {
  return basis_choice == 2 ? MeasurementBasis::Diagonal : MeasurementBasis::Rectilinear;
}

struct SenderState {
  // Current round.
  PolarizationAngle hide_angle;
  double mean_photons = 0.0;

  // One entry per round.
  std::vector<int> basis_choices;
  std::vector<int> key_bits;
  std::vector<DecisionAngle> key_angles;
};

struct ReceiverState {
  std::size_t index = 1;  // 1-based, Rec-1 measures

  // Current round.
  PolarizationAngle hide_angle;
  DecisionAngle shuffle_angle;

  // One entry per round.
  std::vector<DecisionAngle> shuffle_history;
  std::vector<std::pair<MeasurementOutcome, MeasurementOutcome>> stored_outcomes;  // Rec-1 only
};

/// Draws a fresh hiding angle theta and emits |theta> with the configured
/// mean photon number.
CoherentPulse alice_prepare(SenderState& state, double mean_photons, Rng& rng);
CoherentPulse alice_prepare(SenderState& state, double mean_photons, PolarizationAngle forced_theta);

/// Removes theta and applies k = encode_map(bit, j), with j drawn uniformly.
CoherentPulse alice_encode(SenderState& state, const CoherentPulse& pulse, int bit, Rng& rng);
CoherentPulse alice_encode(SenderState& state, const CoherentPulse& pulse, int bit, int basis_choice);

/// Draws fresh phi_i (uniform) and s_i (uniform over the four angles) and
/// rotates by phi_i + s_i.
CoherentPulse receiver_forward(ReceiverState& state, const CoherentPulse& pulse, Rng& rng);
CoherentPulse receiver_forward(ReceiverState& state, const CoherentPulse& pulse,
                               PolarizationAngle phi, DecisionAngle shuffle);

/// Undoes phi_i only; the shuffle stays on the pulse.
CoherentPulse receiver_backward(const ReceiverState& state, const CoherentPulse& pulse);

/// 50:50 split, rectilinear measurement on one arm and diagonal on the
/// other. Both outcomes are stored on `state` and returned as (rect, diag).
std::pair<MeasurementOutcome, MeasurementOutcome> rec1_measure(ReceiverState& state,
                                                               const CoherentPulse& pulse,
                                                               Rng& rng);

enum class SiftStatus { Kept, VacuumDiscard, AmbiguousDiscard };

struct SiftDecision {
  SiftStatus status = SiftStatus::VacuumDiscard;
  std::optional<DecisionAngle> measured;  // l, present iff Kept
};

/// The basis of l = k_j + sum s_i, recoverable once j is public and the
/// receivers pool their shuffle parity.
MeasurementBasis measured_basis(int basis_choice, DecisionAngle shuffle_sum);

SiftDecision sift_round(const std::pair<MeasurementOutcome, MeasurementOutcome>& outcomes,
                        int basis_choice, DecisionAngle shuffle_sum);

/// Round-by-round sift. All three spans must have the same length.
std::vector<SiftDecision> sift(
    std::span<const std::pair<MeasurementOutcome, MeasurementOutcome>> outcomes,
    std::span<const int> announced_basis_choices, std::span<const DecisionAngle> shuffle_sums);

/// k = (l - s_1) - (s_2 + ... + s_N).
DecisionAngle cooperative_decode(DecisionAngle rec1_decision,
                                 std::span<const DecisionAngle> other_shuffles);

/// decode_table()[s2][r1] = cooperative_decode(r1, {s2}), indexed by
/// quarter turns.
std::array<std::array<DecisionAngle, 4>, 4> decode_table();

}  // namespace qss
