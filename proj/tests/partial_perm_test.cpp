#include <gtest/gtest.h>

#include "hvseq/partial_perm.hpp"
#include "hvseq/rng.hpp"
#include "hvseq/similarity.hpp"

namespace {

using hvseq::PartialPermConfig;
using hvseq::PartialPermEncoder;
using hvseq::SplitMix64;

PartialPermConfig cfg_with_seed(std::uint64_t seed) {
  PartialPermConfig cfg;
  cfg.dim = 10000;
  cfg.ones = 100;
  cfg.radius = 4;
  cfg.seed = seed;
  return cfg;
}

std::u32string random_word(SplitMix64& rng, std::size_t max_len) {
  const std::size_t len = 2 + rng.below(max_len - 1);
  std::u32string w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(U'a' + static_cast<char32_t>(rng.below(26)));
  return w;
}

TEST(PartialPerm, PositionZeroIsTheAtom) {
  const PartialPermEncoder enc(cfg_with_seed(1));
  EXPECT_EQ(enc.symbol_hv(U'a', 0), enc.memory().atomic(U'a'));
}

TEST(PartialPerm, FullBlockIsOneWholePermutation) {
  const PartialPermEncoder enc(cfg_with_seed(2));
  const auto atom = enc.memory().atomic(U'a');
  EXPECT_EQ(enc.symbol_hv(U'a', 4), enc.perm().apply_power(atom, 1));
  EXPECT_EQ(enc.symbol_hv(U'a', 8), enc.perm().apply_power(atom, 2));
}

TEST(PartialPerm, NegativePositionThrows) {
  const PartialPermEncoder enc(cfg_with_seed(3));
  EXPECT_THROW(enc.symbol_hv(U'a', -1), std::invalid_argument);
  EXPECT_THROW(enc.encode_string(U"ab", -2), std::invalid_argument);
}

TEST(PartialPerm, SingleCharStringEqualsSymbolHv) {
  const PartialPermEncoder enc(cfg_with_seed(4));
  EXPECT_EQ(enc.encode_string(U"q", 3), enc.symbol_hv(U'q', 3));
}

TEST(PartialPerm, Deterministic) {
  const PartialPermEncoder a(cfg_with_seed(5)), b(cfg_with_seed(5));
  EXPECT_EQ(a.encode_string(U"hello", 0), b.encode_string(U"hello", 0));
}

// Within a block the moved subset grows by inclusion, so the kept-in-place
// part of position i+1 is a subset of position i's.
TEST(PartialPerm, MovedSubsetIsNested) {
  PartialPermConfig cfg = cfg_with_seed(6);
  cfg.ones = 20;  // sparse enough that no moved image lands back in the atom
  const PartialPermEncoder enc(cfg);
  const auto atom = enc.memory().atomic(U'z');
  auto kept = [&](std::int64_t i) {
    const auto hv = enc.symbol_hv(U'z', i);
    std::vector<std::uint32_t> k;
    std::set_intersection(hv.active.begin(), hv.active.end(), atom.active.begin(),
                          atom.active.end(), std::back_inserter(k));
    return k;
  };
  for (std::int64_t i = 0; i + 1 < 4; ++i) {
    const auto ki = kept(i), kn = kept(i + 1);
    // Moved images occasionally collide back into the atom; allow none here
    // because D is large and the draw is fixed.
    EXPECT_TRUE(std::includes(ki.begin(), ki.end(), kn.begin(), kn.end()))
        << "kept set at " << i + 1 << " not nested in " << i;
  }
}

// Mean overlap across seeds follows the linear profile m(1 - j/R) inside a
// block and collapses to the random floor outside.
TEST(PartialPerm, LinearSimilarityProfile) {
  const int seeds = 50;
  const std::uint32_t m = 100, R = 4;
  std::vector<double> mean_ov(R, 0.0);
  double mean_far_cos = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const PartialPermEncoder enc(cfg_with_seed(1000 + s));
    const auto h0 = enc.symbol_hv(U'a', 0);
    for (std::uint32_t j = 1; j < R; ++j) {
      mean_ov[j] += static_cast<double>(hvseq::overlap(h0, enc.symbol_hv(U'a', j)));
    }
    const auto far = enc.symbol_hv(U'a', 8);
    mean_far_cos += hvseq::sim(h0, far, hvseq::SimType::cosine);
  }
  for (std::uint32_t j = 1; j < R; ++j) {
    const double expect = m * (1.0 - static_cast<double>(j) / R);
    EXPECT_NEAR(mean_ov[j] / seeds, expect, 0.1 * expect) << "j=" << j;
  }
  EXPECT_LT(mean_far_cos / seeds, 0.05);
}

// No hypervector transform realizes the string shift: permuting the encoded
// string misses the re-encoded shifted string by a wide margin for R >= 2.
TEST(PartialPerm, NotShiftEquivariant) {
  SplitMix64 rng(91);
  const PartialPermEncoder enc(cfg_with_seed(7));
  double mean_cos = 0.0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const auto w = random_word(rng, 10);
    const auto permuted = enc.perm().apply_power(enc.encode_string(w, 0), 1);
    const auto reencoded = enc.encode_string(w, 1);
    mean_cos += hvseq::sim(permuted, reencoded, hvseq::SimType::cosine);
  }
  mean_cos /= trials;
  EXPECT_LT(mean_cos, 0.95);
  EXPECT_GT(mean_cos, 0.0);
}

TEST(PartialPermConfig, Validation) {
  PartialPermConfig cfg = cfg_with_seed(1);
  cfg.ones = 0;
  EXPECT_THROW(PartialPermEncoder{cfg}, std::invalid_argument);
  cfg = cfg_with_seed(1);
  cfg.radius = 0;
  EXPECT_THROW(PartialPermEncoder{cfg}, std::invalid_argument);
}

}  // namespace
