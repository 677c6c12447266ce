#pragma once

#include <cstddef>
#include <optional>

#include "qss/optics.hpp"

namespace qss {

/// What travels over one hop of the ring: the protocol pulse plus, during a
/// tagging attack, a single foreign photon riding alongside it.
struct Transit {
  CoherentPulse pulse;
  std::optional<PhotonBatch> tag;
};

/// Hops are numbered 1..2N+1 in travel order. For N = 2:
/// 1 A->R1, 2 R1->R2, 3 R2->A, 4 A->R2, 5 R2->R1.
inline constexpr std::size_t hop_count(std::size_t receivers) { return 2 * receivers + 1; }
inline constexpr std::size_t hop_into_alice(std::size_t receivers) { return receivers + 1; }
inline constexpr std::size_t hop_out_of_alice(std::size_t receivers) { return receivers + 2; }

/// Public-channel information for one round, available after Alice's
/// basis announcement.
struct PublicRound {
  std::size_t round = 0;
  int basis_choice = 1;
  bool kept = false;
};

/// Hook placed at the sending end of every hop, before fiber loss.
class Interceptor {
 public:
  virtual ~Interceptor() = default;

  virtual Transit on_hop(std::size_t round, std::size_t hop, Transit transit, Rng& rng) = 0;
  virtual void on_announcement(const PublicRound& info, Rng& rng) = 0;

  /// Whether Eve made an attempt on `round` that could give her the bit.
  virtual bool attempted(std::size_t round) const = 0;
  virtual std::optional<int> guess(std::size_t round) const = 0;
};

}  // namespace qss
