#include <gtest/gtest.h>

#include <atomic>
#include <thread>
#include <vector>

#include "hvseq/encoder.hpp"
#include "hvseq/rng.hpp"
#include "hvseq/similarity.hpp"

namespace {

using hvseq::EncoderConfig;
using hvseq::Item;
using hvseq::ItemMemory;
using hvseq::SequenceEncoder;
using hvseq::SparseHV;
using hvseq::SplitMix64;

EncoderConfig small_cfg() {
  EncoderConfig cfg;
  cfg.dim = 1000;
  cfg.ones = 5;
  cfg.radius = 3;
  cfg.seed = 99;
  return cfg;
}

std::u32string random_word(SplitMix64& rng, std::size_t max_len) {
  const std::size_t len = 1 + rng.below(max_len);
  std::u32string w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(U'a' + static_cast<char32_t>(rng.below(26)));
  return w;
}

TEST(ItemMemory, AtomicIsDeterministicAndCached) {
  ItemMemory mem(small_cfg());
  const auto a1 = mem.atomic(U'a');
  const auto a2 = mem.atomic(U'a');
  EXPECT_EQ(a1, a2);
  EXPECT_EQ(mem.size(), 1u);
}

TEST(ItemMemory, ContentIndependentOfInsertionOrder) {
  ItemMemory m1(small_cfg()), m2(small_cfg());
  const auto a1 = m1.atomic(U'a');
  const auto b1 = m1.atomic(U'b');
  const auto b2 = m2.atomic(U'b');
  const auto a2 = m2.atomic(U'a');
  EXPECT_EQ(a1, a2);
  EXPECT_EQ(b1, b2);
}

TEST(ItemMemory, AtomicHasExactlyMOnes) {
  ItemMemory mem(small_cfg());
  for (char32_t c = U'a'; c <= U'z'; ++c) {
    EXPECT_EQ(mem.atomic(c).cardinality(), 5u);
    EXPECT_TRUE(hvseq::is_valid(mem.atomic(c)));
  }
}

TEST(ItemMemory, ConcurrentLazyInsertionIsDeterministic) {
  EncoderConfig cfg = small_cfg();
  ItemMemory mem(cfg);
  std::vector<std::thread> pool;
  std::atomic<bool> mismatch{false};
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&mem, &mismatch, t] {
      ItemMemory solo(small_cfg());
      for (int rep = 0; rep < 50; ++rep) {
        const auto c = static_cast<char32_t>(U'a' + (rep * (t + 1)) % 26);
        if (mem.atomic(c) != solo.atomic(c)) mismatch = true;
      }
    });
  }
  for (auto& t : pool) t.join();
  EXPECT_FALSE(mismatch);
  EXPECT_EQ(mem.size(), 26u);
}

// Random-support intersections should match the hypergeometric expectation
// m^2/D; at m=11, D=10000 that is 0.0121.
TEST(ItemMemory, RandomAtomIntersectionMatchesExpectation) {
  EncoderConfig cfg;
  cfg.dim = 10000;
  cfg.ones = 11;
  cfg.radius = 7;
  cfg.seed = 2024;
  ItemMemory mem(cfg);
  double total = 0;
  for (char32_t c = 0; c < 1000; ++c) {
    const auto a = mem.atomic(0x4E00 + 2 * c);
    const auto b = mem.atomic(0x4E00 + 2 * c + 1);
    total += static_cast<double>(hvseq::overlap(a, b));
  }
  const double mean = total / 1000.0;
  EXPECT_NEAR(mean, 0.0121, 0.01);
}

TEST(SequenceEncoder, RadiusOneSymbolIsPermutedAtom) {
  EncoderConfig cfg = small_cfg();
  cfg.radius = 1;
  const SequenceEncoder enc(cfg);
  const auto atom = enc.atomic_hv(U'q');
  for (std::int64_t i : {-4, 0, 9}) {
    EXPECT_EQ(enc.symbol_hv(U'q', i), enc.perm().apply_power(atom, i));
  }
}

TEST(SequenceEncoder, SymbolCardinalityBounds) {
  const SequenceEncoder enc(small_cfg());
  for (char32_t c = U'a'; c <= U'j'; ++c) {
    for (std::int64_t i : {-7, 0, 3, 100}) {
      const auto hv = enc.symbol_hv(c, i);
      EXPECT_GE(hv.cardinality(), 5u);
      EXPECT_LE(hv.cardinality(), 15u);
    }
  }
}

TEST(SequenceEncoder, SingleItemEqualsSymbolHv) {
  const SequenceEncoder enc(small_cfg());
  EXPECT_EQ(enc.encode_sequence({Item{U'x', 4}}), enc.symbol_hv(U'x', 4));
}

TEST(SequenceEncoder, EmptySequenceIsZeroVector) {
  const SequenceEncoder enc(small_cfg());
  const auto hv = enc.encode_sequence({});
  EXPECT_TRUE(hv.empty());
  EXPECT_EQ(hv.dim, 1000u);
  EXPECT_TRUE(enc.encode_string(U"", 0).empty());
}

TEST(SequenceEncoder, RepeatedItemsAreIdempotent) {
  const SequenceEncoder enc(small_cfg());
  EXPECT_EQ(enc.encode_sequence({{U'x', 2}, {U'x', 2}, {U'y', -1}}),
            enc.encode_sequence({{U'y', -1}, {U'x', 2}}));
}

TEST(SequenceEncoder, NonContiguousPositionsAllowed) {
  const SequenceEncoder enc(small_cfg());
  const auto hv = enc.encode_sequence({{U'b', 3}, {U'c', 1}, {U'a', 4}, {U'a', -3}});
  EXPECT_FALSE(hv.empty());
  EXPECT_LE(hv.cardinality(), 4u * 5u * 3u);
}

TEST(SequenceEncoder, ShiftZeroIsIdentityAndInverseUndoes) {
  const SequenceEncoder enc(small_cfg());
  const auto h = enc.encode_string(U"abc", 0);
  EXPECT_EQ(enc.shift(h, 0), h);
  EXPECT_EQ(enc.shift(enc.shift(h, 2), -2), h);
}

TEST(SequenceEncoder, ShiftEquivariance) {
  EncoderConfig cfg;
  cfg.dim = 10000;
  cfg.ones = 11;
  cfg.radius = 7;
  cfg.seed = 5;
  const SequenceEncoder enc(cfg);
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = random_word(rng, 20);
    const auto s = static_cast<std::int64_t>(rng.below(11)) - 5;
    EXPECT_EQ(enc.shift(enc.encode_string(w, 0), s), enc.encode_string(w, s));
  }
}

TEST(SequenceEncoder, IdenticalConfigGivesIdenticalEncodings) {
  EncoderConfig cfg = small_cfg();
  const SequenceEncoder e1(cfg), e2(cfg);
  EXPECT_EQ(e1.encode_string(U"determinism", 0), e2.encode_string(U"determinism", 0));
}

// At low density the collision terms are negligible and the mean overlap
// between a symbol's hypervectors j positions apart follows the triangle
// m (R - |j|), with far positions at the random floor.
TEST(SequenceEncoder, TriangularSimilarityProfileLowDensity) {
  const int seeds = 50;
  const std::uint32_t m = 11, R = 5;
  std::vector<double> ratio(R, 0.0);
  double far_cos = 0.0;
  for (int s = 0; s < seeds; ++s) {
    EncoderConfig cfg;
    cfg.dim = 10000;
    cfg.ones = m;
    cfg.radius = R;
    cfg.seed = 300 + static_cast<std::uint64_t>(s);
    const SequenceEncoder enc(cfg);
    const auto h0 = enc.symbol_hv(U'a', 0);
    for (std::uint32_t j = 1; j < R; ++j) {
      ratio[j] += static_cast<double>(hvseq::overlap(h0, enc.symbol_hv(U'a', j))) / m;
    }
    for (std::uint32_t j = R; j <= 2 * R; j += 2) {
      far_cos += hvseq::sim(h0, enc.symbol_hv(U'a', j), hvseq::SimType::cosine);
    }
  }
  for (std::uint32_t j = 1; j < R; ++j) {
    const double want = static_cast<double>(R - j);
    EXPECT_NEAR(ratio[j] / seeds, want, 0.1 * want) << "j=" << j;
  }
  EXPECT_LT(far_cos / (seeds * 3), 0.05);
}

TEST(EncoderConfig, Validation) {
  EncoderConfig cfg = small_cfg();
  cfg.ones = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_cfg();
  cfg.ones = cfg.dim + 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_cfg();
  cfg.radius = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
