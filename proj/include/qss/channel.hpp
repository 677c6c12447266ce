#pragma once

#include <cstddef>
#include <vector>

#include "qss/optics.hpp"

namespace qss {

/// A fiber span with loss coefficient alpha [dB/km].
struct FiberLink {
  double length_km = 0.0;
  double loss_db_per_km = 0.2;
};

/// T = 10^(-alpha * l / 10). Throws std::invalid_argument on negative inputs.
double transmission(const FiberLink& link);

/// Scales mean photon number by t. Throws std::invalid_argument unless
/// 0 < t <= 1.
CoherentPulse attenuate(const CoherentPulse& pulse, double t);

/// The ring Alice -> Rec-1 -> ... -> Rec-N -> Alice. Link i (0-based)
/// joins Rec-i to Rec-(i+1), with Alice standing in as Rec-0 and Rec-(N+1).
/// The return leg Alice -> Rec-N -> ... -> Rec-1 reuses links N, N-1, ..., 1.
class Topology {
 public:
  /// Throws std::invalid_argument for fewer than two links or a
  /// transmission outside (0, 1].
  explicit Topology(std::vector<double> link_transmissions);

  static Topology from_links(const std::vector<FiberLink>& links);
  /// Every link has the same transmission `t`.
  static Topology uniform(std::size_t receivers, double t);

  std::size_t receivers() const { return links_.size() - 1; }
  std::size_t link_count() const { return links_.size(); }
  double link_transmission(std::size_t link) const { return links_.at(link); }

  /// Product of all link transmissions on the forward ring.
  double round_trip_transmission() const;

 private:
  std::vector<double> links_;
};

}  // namespace qss
