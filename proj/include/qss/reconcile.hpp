#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qss {

/// One bit per element, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Raised when post-processing leaves nothing to share and the parties must
/// run the protocol again.
class RestartRequired : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parity of each consecutive block of `block_size` bits; the final block
/// may be shorter.
std::vector<std::uint8_t> block_parities(std::span<const std::uint8_t> key, std::size_t block_size);

struct ParityFilterResult {
  Bits alice;
  std::vector<Bits> receivers;
  std::vector<bool> block_kept;
  std::size_t discarded_blocks = 0;
  std::size_t surviving_blocks = 0;
};

/// Alice announces her block parities. A block is dropped by every party as
/// soon as one receiver's parity disagrees with hers.
ParityFilterResult parity_filter(std::span<const std::uint8_t> alice,
                                 std::span<const Bits> receivers, std::size_t block_size);

/// y = T x over GF(2) with T an out_len x in_len Toeplitz matrix whose
/// diagonals come from a public seed.
Bits toeplitz_hash(std::span<const std::uint8_t> input, std::size_t out_len,
                   std::uint64_t public_seed);

struct ReconcileResult {
  Bits alice;
  std::vector<Bits> receivers;
  std::size_t surviving_bits = 0;
  std::size_t discarded_blocks = 0;
};

/// Block-parity filter followed by Toeplitz compression to
/// surviving_bits - surviving_blocks (one leaked parity per block).
/// Throws RestartRequired if that length is zero.
ReconcileResult reconcile_group(std::span<const std::uint8_t> alice,
                                std::span<const Bits> receivers, std::size_t block_size,
                                std::uint64_t public_seed);

std::pair<Bits, Bits> reconcile_and_amplify(std::span<const std::uint8_t> key_a,
                                            std::span<const std::uint8_t> key_b,
                                            std::size_t block_size, std::uint64_t public_seed);

using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 over the 8-byte big-endian bit count followed by the bits packed
/// MSB-first.
Digest key_digest(std::span<const std::uint8_t> key);

std::string to_hex(const Digest& digest);

struct Verdict {
  enum class Kind { Accept, AbortRetry, DishonestFlag };
  Kind kind = Kind::AbortRetry;
  std::optional<std::size_t> suspect;  // 1-based receiver index when flagged

  bool operator==(const Verdict&) const = default;
};

std::string to_string(Verdict::Kind kind);

/// All equal: Accept. Exactly one receiver agrees with Alice while another
/// does not: that receiver is flagged, since a liar keeps the true key.
/// Anything else: AbortRetry.
Verdict integrity_check(const Digest& alice, std::span<const Digest> receivers);

}  // namespace qss
