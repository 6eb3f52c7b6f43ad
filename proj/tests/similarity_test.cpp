#include <gtest/gtest.h>

#include <cmath>

#include "hvseq/oracle.hpp"
#include "hvseq/rng.hpp"
#include "hvseq/similarity.hpp"

namespace {

using hvseq::DenseMask;
using hvseq::overlap;
using hvseq::ShiftSpec;
using hvseq::sim;
using hvseq::sim_shiftmax;
using hvseq::SimType;
using hvseq::SparseHV;
using hvseq::SplitMix64;

SparseHV random_hv(SplitMix64& rng, std::uint32_t dim, std::size_t ones) {
  std::vector<std::uint32_t> idx;
  for (std::size_t i = 0; i < ones; ++i) idx.push_back(static_cast<std::uint32_t>(rng.below(dim)));
  return hvseq::make_sparse_hv(dim, std::move(idx));
}

TEST(Overlap, SelfAndDisjoint) {
  const SparseHV x{10, {1, 4, 7}};
  EXPECT_EQ(overlap(x, x), 3u);
  const SparseHV y{10, {0, 2, 9}};
  EXPECT_EQ(overlap(x, y), 0u);
}

TEST(Overlap, DimensionMismatchThrows) {
  EXPECT_THROW(overlap(SparseHV{10, {1}}, SparseHV{11, {1}}), std::invalid_argument);
}

TEST(Overlap, BlockDisjointSymbolNeighbors) {
  // m(R - 1) = 4 * 2 shared atoms between adjacent positions.
  const auto oracle = hvseq::block_disjoint_config(U"ab", 5, 4, 3);
  const auto& enc = oracle.encoder();
  EXPECT_EQ(overlap(enc.symbol_hv(U'a', 0), enc.symbol_hv(U'a', 1)), 8u);
}

TEST(Sim, SelfCosineIsExactlyOne) {
  const SparseHV x{100, {5, 6, 97}};
  EXPECT_DOUBLE_EQ(sim(x, x, SimType::cosine), 1.0);
  EXPECT_DOUBLE_EQ(sim(x, x, SimType::jaccard), 1.0);
  EXPECT_DOUBLE_EQ(sim(x, x, SimType::simpson), 1.0);
}

TEST(Sim, SubsetSimpsonIsOne) {
  const SparseHV a{50, {3, 9}};
  const SparseHV b{50, {1, 3, 9, 20}};
  EXPECT_DOUBLE_EQ(sim(a, b, SimType::simpson), 1.0);
}

TEST(Sim, JaccardSmallExample) {
  const SparseHV a{10, {0, 1}};
  const SparseHV b{10, {1, 2}};
  EXPECT_DOUBLE_EQ(sim(a, b, SimType::jaccard), 1.0 / 3.0);
}

TEST(Sim, EmptyOperandGivesZero) {
  const SparseHV e{10, {}};
  const SparseHV x{10, {1}};
  for (auto t : {SimType::cosine, SimType::jaccard, SimType::simpson}) {
    EXPECT_DOUBLE_EQ(sim(e, x, t), 0.0);
    EXPECT_DOUBLE_EQ(sim(e, e, t), 0.0);
  }
  EXPECT_DOUBLE_EQ(sim(e, x, SimType::overlap), 0.0);
}

TEST(Sim, SymmetryBoundsAndCauchySchwarz) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_hv(rng, 500, 1 + rng.below(40));
    const auto b = random_hv(rng, 500, 1 + rng.below(40));
    const auto inter = overlap(a, b);
    EXPECT_LE(static_cast<double>(inter),
              std::sqrt(static_cast<double>(a.cardinality()) * b.cardinality()) + 1e-12);
    for (auto t : {SimType::overlap, SimType::cosine, SimType::jaccard, SimType::simpson}) {
      const double ab = sim(a, b, t);
      EXPECT_DOUBLE_EQ(ab, sim(b, a, t));
      if (t != SimType::overlap) {
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0);
      }
    }
  }
}

TEST(DenseMaskPath, MatchesSortedMerge) {
  SplitMix64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_hv(rng, 777, 1 + rng.below(60));
    const auto b = random_hv(rng, 777, 1 + rng.below(60));
    const DenseMask ma(a), mb(b);
    EXPECT_EQ(overlap(ma, b), overlap(a, b));
    EXPECT_EQ(overlap(ma, mb), overlap(a, b));
  }
}

TEST(ShiftSpec, RadiusOrderPrefersSmallMagnitudeThenNegative) {
  EXPECT_EQ(ShiftSpec::radius(2).ordered(), (std::vector<int>{0, -1, 1, -2, 2}));
  EXPECT_EQ(ShiftSpec::radius(0).ordered(), (std::vector<int>{0}));
  EXPECT_THROW(ShiftSpec::radius(-1), std::invalid_argument);
  EXPECT_EQ(ShiftSpec::explicit_set({3, -3, 0, 3}).ordered(), (std::vector<int>{0, -3, 3}));
}

TEST(ShiftMax, SingleShiftReducesToSim) {
  const auto oracle = hvseq::block_disjoint_config(U"abcd", 8, 2, 3);
  const auto& enc = oracle.encoder();
  const auto a = enc.encode_string(U"abc", 0);
  const auto b = enc.encode_string(U"abcd", 0);
  const auto r = sim_shiftmax(enc.perm(), a, b, ShiftSpec::radius(0), SimType::cosine);
  EXPECT_DOUBLE_EQ(r.value, sim(a, b, SimType::cosine));
  EXPECT_EQ(r.best_shift, 0);
}

TEST(ShiftMax, FindsEmbeddedSubstring) {
  // abc shifted by +3 matches the tail of dddabc exactly.
  const auto oracle = hvseq::block_disjoint_config(U"abcd", 9, 2, 3);
  const auto& enc = oracle.encoder();
  const auto a = enc.encode_string(U"abc", 0);
  const auto b = enc.encode_string(U"dddabc", 0);
  const auto r = sim_shiftmax(enc.perm(), a, b, ShiftSpec::radius(3), SimType::simpson);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  EXPECT_EQ(r.best_shift, 3);
}

TEST(ShiftMax, MonotoneInShiftSetGrowth) {
  SplitMix64 rng(33);
  const auto perm = hvseq::Permutation::random(8, 400);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_hv(rng, 400, 1 + rng.below(30));
    const auto b = random_hv(rng, 400, 1 + rng.below(30));
    const auto v1 = sim_shiftmax(perm, a, b, ShiftSpec::radius(1), SimType::cosine).value;
    const auto v2 = sim_shiftmax(perm, a, b, ShiftSpec::radius(2), SimType::cosine).value;
    EXPECT_LE(v1, v2);
  }
}

TEST(ShiftMax, ValueSymmetricUnderOperandSwap) {
  SplitMix64 rng(34);
  const auto perm = hvseq::Permutation::random(9, 400);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_hv(rng, 400, 1 + rng.below(30));
    const auto b = random_hv(rng, 400, 1 + rng.below(30));
    const auto ab = sim_shiftmax(perm, a, b, ShiftSpec::radius(3), SimType::jaccard);
    const auto ba = sim_shiftmax(perm, b, a, ShiftSpec::radius(3), SimType::jaccard);
    EXPECT_DOUBLE_EQ(ab.value, ba.value);
  }
}

TEST(ShiftMax, EmptyShiftSetThrows) {
  const auto perm = hvseq::Permutation::random(10, 50);
  const SparseHV x{50, {1}};
  EXPECT_THROW(sim_shiftmax(perm, x, x, ShiftSpec::explicit_set({}), SimType::cosine),
               std::invalid_argument);
}

}  // namespace
