#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qss/reconcile.hpp"

using namespace qss;

namespace {

Bits random_bits(std::size_t n, std::mt19937_64& gen) {
  Bits b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(gen() & 1);
  return b;
}

// Straight matrix-vector product from the Toeplitz definition.
Bits naive_toeplitz(const Bits& x, std::size_t m, std::uint64_t seed) {
  const std::size_t n = x.size();
  std::mt19937_64 gen(seed);
  std::vector<int> diag(m + n - 1);
  for (auto& d : diag) d = int(gen() & 1);
  Bits y(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    int acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc ^= diag[i + n - 1 - j] & x[j];
    y[i] = std::uint8_t(acc);
  }
  return y;
}

}  // namespace

TEST_CASE("block parities") {
  const Bits key{1, 0, 1, 1, 0, 0, 1, 0, 1, 1};
  CHECK(block_parities(key, 4) == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(block_parities(key, 10) == std::vector<std::uint8_t>{0});
  CHECK(block_parities(Bits{}, 8).empty());
  CHECK_THROWS_AS(block_parities(key, 0), std::invalid_argument);
}

TEST_CASE("parity filter on identical keys keeps every bit") {
  std::mt19937_64 gen(1);
  for (std::size_t block : {1, 3, 8, 64}) {
    const Bits a = random_bits(200, gen);
    const std::vector<Bits> rs{a, a};
    const auto f = parity_filter(a, rs, block);
    CHECK(f.discarded_blocks == 0);
    CHECK(f.alice == a);
    CHECK(f.receivers[1] == a);
  }
}

TEST_CASE("a single flipped bit costs exactly one block") {
  std::mt19937_64 gen(2);
  const Bits a = random_bits(64, gen);
  Bits b = a;
  b[19] ^= 1;
  const std::vector<Bits> rs{b};
  const auto f = parity_filter(a, rs, 8);
  CHECK(f.discarded_blocks == 1);
  CHECK(f.surviving_blocks == 7);
  CHECK_FALSE(f.block_kept[2]);
  CHECK(f.alice.size() == 56);
  CHECK(f.alice == f.receivers[0]);
}

TEST_CASE("any receiver's mismatch drops the block for everyone") {
  std::mt19937_64 gen(3);
  const Bits a = random_bits(32, gen);
  Bits b = a;
  b[0] ^= 1;
  Bits c = a;
  c[31] ^= 1;
  const std::vector<Bits> rs{a, b, c};
  const auto f = parity_filter(a, rs, 8);
  CHECK(f.discarded_blocks == 2);
  for (const auto& r : f.receivers) CHECK(r == f.alice);
}

TEST_CASE("surviving fraction at 10% disagreement matches the even-error oracle") {
  std::mt19937_64 gen(4);
  std::bernoulli_distribution flip(0.1);
  const std::size_t block = 8;
  const std::size_t blocks = 50'000;
  const Bits a = random_bits(block * blocks, gen);
  Bits b = a;
  for (auto& x : b) x ^= flip(gen);
  const std::vector<Bits> rs{b};
  const auto f = parity_filter(a, rs, block);

  // A block passes when it holds an even number of errors.
  double p_even = 0.0;
  for (int k = 0; k <= 8; k += 2) p_even += std::tgamma(9) / (std::tgamma(k + 1) * std::tgamma(9 - k)) *
                                            std::pow(0.1, k) * std::pow(0.9, 8 - k);
  const double frac = double(f.surviving_blocks) / blocks;
  CHECK(std::abs(frac - p_even) < 3.0 * std::sqrt(p_even * (1 - p_even) / blocks));
  CHECK(f.alice.size() == f.surviving_blocks * block);
}

TEST_CASE("toeplitz hash agrees with the naive product") {
  std::mt19937_64 gen(5);
  for (std::size_t n : {1, 2, 63, 64, 65, 127, 200, 513}) {
    for (std::size_t m : {std::size_t{1}, n / 2 + 1, n}) {
      const Bits x = random_bits(n, gen);
      const std::uint64_t seed = gen();
      CHECK(toeplitz_hash(x, m, seed) == naive_toeplitz(x, m, seed));
    }
  }
  CHECK(toeplitz_hash(Bits{1, 0}, 0, 7).empty());
  CHECK_THROWS_AS(toeplitz_hash(Bits{1, 0}, 3, 7), std::invalid_argument);
}

TEST_CASE("toeplitz hash is linear") {
  std::mt19937_64 gen(6);
  const Bits x = random_bits(300, gen);
  const Bits y = random_bits(300, gen);
  Bits xy(300);
  for (std::size_t i = 0; i < 300; ++i) xy[i] = x[i] ^ y[i];
  const auto hx = toeplitz_hash(x, 120, 99);
  const auto hy = toeplitz_hash(y, 120, 99);
  const auto hxy = toeplitz_hash(xy, 120, 99);
  for (std::size_t i = 0; i < 120; ++i) CHECK(hxy[i] == (hx[i] ^ hy[i]));
}

TEST_CASE("reconcile and amplify") {
  std::mt19937_64 gen(7);
  const Bits a = random_bits(80, gen);
  Bits b = a;
  b[5] ^= 1;
  const auto [ka, kb] = reconcile_and_amplify(a, b, 8, 11);
  CHECK(ka == kb);
  // 72 surviving bits minus one leaked parity per surviving block.
  CHECK(ka.size() == 72 - 9);

  const std::vector<Bits> rs{a};
  const auto r = reconcile_group(a, rs, 8, 11);
  CHECK(r.surviving_bits == 80);
  CHECK(r.alice.size() == 70);

  CHECK_THROWS_AS(reconcile_and_amplify(Bits{1}, Bits{1}, 8, 1), RestartRequired);
  CHECK_THROWS_AS(reconcile_and_amplify(Bits{1, 0}, Bits{0, 0}, 8, 1), RestartRequired);
}

TEST_CASE("key digest") {
  CHECK(to_hex(key_digest(Bits{})) == "af5570f5a1810b7af78caf4bc70a660f0df51e42baf91d4de5b2328de0e83dfc");
  CHECK(to_hex(key_digest(Bits{1})) == "8a9e4e0c68c7dd5abdb5a5e83b5731ce49e09a9a6861a2d83124abf42285dc89");
  CHECK(to_hex(key_digest(Bits{1, 0, 1, 1, 0, 0, 1, 0, 1})) ==
        "a4341723cc291479c6a7db7c8de2335daffcfda02f756caf033f5bf9bc8b65ea");
  Bits every_third(100);
  for (std::size_t i = 0; i < 100; ++i) every_third[i] = i % 3 == 0;
  CHECK(to_hex(key_digest(every_third)) == "ac8c7b453ca8f3df94a3c45f28a69e25e191459843bf7742864c6948bb3e22d3");
  // Trailing zeros still change the digest through the length prefix.
  CHECK(key_digest(Bits{1}) != key_digest(Bits{1, 0}));
}

TEST_CASE("integrity verdicts") {
  const Digest h0 = key_digest(Bits{1, 0, 1});
  const Digest bad = key_digest(Bits{1, 1, 1});
  const Digest worse = key_digest(Bits{0, 0, 1});

  const std::vector<Digest> all_good{h0, h0};
  CHECK(integrity_check(h0, all_good) == Verdict{Verdict::Kind::Accept, std::nullopt});

  const std::vector<Digest> rec2_off{h0, bad};
  CHECK(integrity_check(h0, rec2_off) == Verdict{Verdict::Kind::DishonestFlag, 1});

  const std::vector<Digest> rec1_off{bad, h0};
  CHECK(integrity_check(h0, rec1_off) == Verdict{Verdict::Kind::DishonestFlag, 2});

  const std::vector<Digest> both_off{bad, worse};
  CHECK(integrity_check(h0, both_off).kind == Verdict::Kind::AbortRetry);

  const std::vector<Digest> three{h0, h0, bad};
  CHECK(integrity_check(h0, three).kind == Verdict::Kind::AbortRetry);

  CHECK(to_string(Verdict::Kind::DishonestFlag) == "dishonest");
}
