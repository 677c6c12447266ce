#include "qss/reconcile.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <bit>
#include <random>

namespace qss {

std::vector<std::uint8_t> block_parities(std::span<const std::uint8_t> key, std::size_t block_size) {
  if (block_size == 0) throw std::invalid_argument("parity block size must be positive");
  std::vector<std::uint8_t> parities((key.size() + block_size - 1) / block_size, 0);
  for (std::size_t i = 0; i < key.size(); ++i) parities[i / block_size] ^= key[i] & 1u;
  return parities;
}

ParityFilterResult parity_filter(std::span<const std::uint8_t> alice,
                                 std::span<const Bits> receivers, std::size_t block_size) {
  for (const auto& r : receivers) {
    if (r.size() != alice.size()) throw std::invalid_argument("reconciled keys must have equal length");
  }
  const auto reference = block_parities(alice, block_size);
  ParityFilterResult out;
  out.block_kept.assign(reference.size(), true);
  for (const auto& r : receivers) {
    const auto theirs = block_parities(r, block_size);
    for (std::size_t b = 0; b < reference.size(); ++b) {
      if (theirs[b] != reference[b]) out.block_kept[b] = false;
    }
  }

  out.receivers.resize(receivers.size());
  for (std::size_t i = 0; i < alice.size(); ++i) {
    if (!out.block_kept[i / block_size]) continue;
    out.alice.push_back(alice[i]);
    for (std::size_t r = 0; r < receivers.size(); ++r) out.receivers[r].push_back(receivers[r][i]);
  }
  out.surviving_blocks = static_cast<std::size_t>(
      std::count(out.block_kept.begin(), out.block_kept.end(), true));
  out.discarded_blocks = out.block_kept.size() - out.surviving_blocks;
  return out;
}

namespace {

using Words = std::vector<std::uint64_t>;

// 64 bits starting at bit `pos`, LSB-first; `words` carries one word of
// zero padding at the end.
std::uint64_t window64(const Words& words, std::size_t pos) {
  const std::size_t w = pos >> 6;
  const unsigned off = pos & 63u;
  if (off == 0) return words[w];
  return (words[w] >> off) | (words[w + 1] << (64 - off));
}

}  // namespace

Bits toeplitz_hash(std::span<const std::uint8_t> input, std::size_t out_len,
                   std::uint64_t public_seed) {
  if (out_len > input.size()) throw std::invalid_argument("hash output longer than input");
  if (out_len == 0) return {};

  // T[i][j] = diag[i + n - 1 - j], so y_i = <diag[i .. i+n), reversed input>.
  const std::size_t n = input.size();
  const std::size_t diag_len = out_len + n - 1;
  Words diag(diag_len / 64 + 3, 0);
  std::mt19937_64 gen(public_seed);
  for (std::size_t k = 0; k < diag_len; ++k) {
    diag[k >> 6] |= (gen() & 1u) << (k & 63u);
  }
  const std::size_t input_words = (n + 63) / 64;
  Words reversed(input_words, 0);
  for (std::size_t k = 0; k < n; ++k) {
    reversed[k >> 6] |= std::uint64_t{input[n - 1 - k] & 1u} << (k & 63u);
  }

  Bits out(out_len, 0);
  for (std::size_t i = 0; i < out_len; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < input_words; ++w) acc ^= window64(diag, i + 64 * w) & reversed[w];
    out[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

ReconcileResult reconcile_group(std::span<const std::uint8_t> alice,
                                std::span<const Bits> receivers, std::size_t block_size,
                                std::uint64_t public_seed) {
  auto filtered = parity_filter(alice, receivers, block_size);
  const std::size_t surviving = filtered.alice.size();
  if (surviving <= filtered.surviving_blocks) {
    throw RestartRequired("no key material survives reconciliation");
  }
  const std::size_t final_len = surviving - filtered.surviving_blocks;

  ReconcileResult out;
  out.surviving_bits = surviving;
  out.discarded_blocks = filtered.discarded_blocks;
  out.alice = toeplitz_hash(filtered.alice, final_len, public_seed);
  for (const auto& r : filtered.receivers) out.receivers.push_back(toeplitz_hash(r, final_len, public_seed));
  return out;
}

std::pair<Bits, Bits> reconcile_and_amplify(std::span<const std::uint8_t> key_a,
                                            std::span<const std::uint8_t> key_b,
                                            std::size_t block_size, std::uint64_t public_seed) {
  const Bits b(key_b.begin(), key_b.end());
  auto result = reconcile_group(key_a, std::span<const Bits>(&b, 1), block_size, public_seed);
  return {std::move(result.alice), std::move(result.receivers.front())};
}

Digest key_digest(std::span<const std::uint8_t> key) {
  std::vector<unsigned char> message(8 + (key.size() + 7) / 8, 0);
  const std::uint64_t length = key.size();
  for (int i = 0; i < 8; ++i) message[i] = static_cast<unsigned char>(length >> (56 - 8 * i));
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] & 1u) message[8 + i / 8] |= static_cast<unsigned char>(0x80u >> (i % 8));
  }
  Digest digest{};
  SHA256(message.data(), message.size(), digest.data());
  return digest;
}

std::string to_hex(const Digest& digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto byte : digest) {
    s.push_back(kHex[byte >> 4]);
    s.push_back(kHex[byte & 0xf]);
  }
  return s;
}

std::string to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Accept: return "accept";
    case Verdict::Kind::AbortRetry: return "abort-retry";
    case Verdict::Kind::DishonestFlag: return "dishonest";
  }
  return "unknown";
}

Verdict integrity_check(const Digest& alice, std::span<const Digest> receivers) {
  std::size_t matching = 0;
  std::size_t last_match = 0;
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    if (receivers[i] == alice) {
      ++matching;
      last_match = i + 1;
    }
  }
  if (matching == receivers.size()) return {Verdict::Kind::Accept, std::nullopt};
  if (matching == 1) return {Verdict::Kind::DishonestFlag, last_match};
  return {Verdict::Kind::AbortRetry, std::nullopt};
}

}  // namespace qss
