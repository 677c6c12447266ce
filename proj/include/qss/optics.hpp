#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>

namespace qss {

using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;

/// Linear polarization angle, kept reduced into [0, pi).
///
/// Linear polarization is invariant under a half turn, so every protocol
/// state and both measurement bases live on the circle R / pi.
class PolarizationAngle {
 public:
  constexpr PolarizationAngle() = default;
  explicit PolarizationAngle(double radians) : radians_(reduce(radians)) {}

  double radians() const { return radians_; }

  PolarizationAngle operator+(PolarizationAngle other) const {
    return PolarizationAngle(radians_ + other.radians_);
  }
  PolarizationAngle operator-(PolarizationAngle other) const {
    return PolarizationAngle(radians_ - other.radians_);
  }
  PolarizationAngle operator-() const { return PolarizationAngle(-radians_); }
  PolarizationAngle& operator+=(PolarizationAngle other) { return *this = *this + other; }
  PolarizationAngle& operator-=(PolarizationAngle other) { return *this = *this - other; }

  /// Exact comparison; use approx_equal for computed angles.
  bool operator==(const PolarizationAngle&) const = default;

  /// Shortest distance on the mod-pi circle, in [0, pi/2].
  static double distance(PolarizationAngle a, PolarizationAngle b);

  static double reduce(double radians);

 private:
  double radians_ = 0.0;
};

inline bool approx_equal(PolarizationAngle a, PolarizationAngle b, double tol = 1e-9) {
  return PolarizationAngle::distance(a, b) <= tol;
}

/// One of the four discrete angles {0, pi/4, pi/2, 3pi/4 = -pi/4}, as a
/// count of quarter turns. Addition is the cyclic group Z4.
class DecisionAngle {
 public:
  constexpr DecisionAngle() = default;
  constexpr explicit DecisionAngle(int quarter_turns)
      : quarter_turns_(static_cast<std::uint8_t>(((quarter_turns % 4) + 4) % 4)) {}

  static constexpr DecisionAngle zero() { return DecisionAngle(0); }
  static constexpr DecisionAngle plus_quarter() { return DecisionAngle(1); }
  static constexpr DecisionAngle half() { return DecisionAngle(2); }
  static constexpr DecisionAngle minus_quarter() { return DecisionAngle(3); }

  constexpr int quarter_turns() const { return quarter_turns_; }

  /// Rectilinear angles (0, pi/2) have even quarter turns.
  constexpr bool is_diagonal() const { return (quarter_turns_ & 1) != 0; }

  PolarizationAngle to_polarization() const {
    return PolarizationAngle(quarter_turns_ * kPi / 4.0);
  }

  /// Snaps a continuous angle onto the group; nullopt if it is further than
  /// `tol` from all four members.
  static std::optional<DecisionAngle> from_polarization(PolarizationAngle angle,
                                                        double tol = 1e-9);

  constexpr DecisionAngle operator+(DecisionAngle o) const {
    return DecisionAngle(quarter_turns_ + o.quarter_turns_);
  }
  constexpr DecisionAngle operator-(DecisionAngle o) const {
    return DecisionAngle(quarter_turns_ - o.quarter_turns_);
  }
  constexpr DecisionAngle operator-() const { return DecisionAngle(-quarter_turns_); }
  constexpr DecisionAngle& operator+=(DecisionAngle o) { return *this = *this + o; }
  constexpr DecisionAngle& operator-=(DecisionAngle o) { return *this = *this - o; }
  constexpr bool operator==(const DecisionAngle&) const = default;

  /// "0", "pi/4", "pi/2", "-pi/4".
  std::string label() const;
  /// Inverse of label(); nullopt for anything else.
  static std::optional<DecisionAngle> from_label(std::string_view text);

 private:
  std::uint8_t quarter_turns_ = 0;
};

constexpr DecisionAngle decision_add(DecisionAngle a, DecisionAngle b) { return a + b; }

struct CoherentPulse {
  double mean_photons = 0.0;
  PolarizationAngle polarization;

  bool is_vacuum() const { return mean_photons <= 0.0; }
};

struct PhotonBatch {
  std::uint64_t count = 0;
  PolarizationAngle polarization;
};

enum class MeasurementBasis { Rectilinear, Diagonal };

/// The two detector angles of a polarizing beam splitter in `basis`; the
/// first is the reference port used for the Malus-law probability.
std::pair<DecisionAngle, DecisionAngle> basis_angles(MeasurementBasis basis);

inline MeasurementBasis basis_of(DecisionAngle a) {
  return a.is_diagonal() ? MeasurementBasis::Diagonal : MeasurementBasis::Rectilinear;
}

class MeasurementOutcome {
 public:
  enum class Kind { Angle, Vacuum, Ambiguous };

  static MeasurementOutcome vacuum() { return MeasurementOutcome(Kind::Vacuum, {}); }
  static MeasurementOutcome ambiguous() { return MeasurementOutcome(Kind::Ambiguous, {}); }
  static MeasurementOutcome angle(DecisionAngle a) { return MeasurementOutcome(Kind::Angle, a); }

  Kind kind() const { return kind_; }
  bool has_angle() const { return kind_ == Kind::Angle; }
  /// Precondition: has_angle().
  DecisionAngle value() const { return angle_; }

  bool operator==(const MeasurementOutcome&) const = default;

  /// "0", "pi/4", ..., "vacuum" or "ambiguous".
  std::string label() const;
  static std::optional<MeasurementOutcome> from_label(std::string_view text);

 private:
  MeasurementOutcome(Kind k, DecisionAngle a) : kind_(k), angle_(a) {}
  Kind kind_;
  DecisionAngle angle_;
};

CoherentPulse rotate(const CoherentPulse& pulse, PolarizationAngle delta);

PhotonBatch sample_photon_count(const CoherentPulse& pulse, Rng& rng);

/// Splits a pulse into (transmitted, reflected) with mean photon numbers
/// (mu * ratio, mu * (1 - ratio)). Throws std::invalid_argument if ratio is
/// outside [0, 1].
std::pair<CoherentPulse, CoherentPulse> beam_split(const CoherentPulse& pulse, double ratio);

/// Per-photon Malus-law projection onto the two ports of a PBS. All clicks on
/// one port give that port's angle; clicks on both ports are Ambiguous.
MeasurementOutcome pbs_measure(const PhotonBatch& batch, MeasurementBasis basis, Rng& rng);

/// Uniform draw on [0, pi).
PolarizationAngle random_polarization(Rng& rng);

/// Uniform draw over the four decision angles.
DecisionAngle random_decision_angle(Rng& rng);

}  // namespace qss
