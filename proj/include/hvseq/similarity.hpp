#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvseq/permutation.hpp"
#include "hvseq/sparse_hv.hpp"

namespace hvseq {

enum class SimType : std::uint8_t { overlap, cosine, jaccard, simpson };

inline std::string to_string(SimType t) {
  switch (t) {
    case SimType::overlap: return "overlap";
    case SimType::cosine: return "cos";
    case SimType::jaccard: return "jac";
    case SimType::simpson: return "simp";
  }
  return "?";
}

// |a ∧ b| by sorted merge over the active index lists.
inline std::size_t overlap(const SparseHV& a, const SparseHV& b) {
  require_same_dim(a, b);
  std::size_t count = 0, i = 0, j = 0;
  while (i < a.active.size() && j < b.active.size()) {
    const auto x = a.active[i], y = b.active[j];
    if (x < y) {
      ++i;
    } else if (y < x) {
      ++j;
    } else {
      ++count, ++i, ++j;
    }
  }
  return count;
}

// Similarity from precomputed |a ∧ b| and cardinalities. Empty operands give
// 0 for every normalized type (keeps batch evaluation NaN-free).
inline double sim_from_counts(std::size_t inter, std::size_t card_a, std::size_t card_b,
                              SimType t) {
  switch (t) {
    case SimType::overlap:
      return static_cast<double>(inter);
    case SimType::cosine:
      if (card_a == 0 || card_b == 0) return 0.0;
      return static_cast<double>(inter) /
             std::sqrt(static_cast<double>(card_a) * static_cast<double>(card_b));
    case SimType::jaccard: {
      const std::size_t uni = card_a + card_b - inter;
      if (uni == 0) return 0.0;
      return static_cast<double>(inter) / static_cast<double>(uni);
    }
    case SimType::simpson: {
      const std::size_t mn = card_a < card_b ? card_a : card_b;
      if (mn == 0) return 0.0;
      return static_cast<double>(inter) / static_cast<double>(mn);
    }
  }
  throw std::invalid_argument("unknown similarity type");
}

inline double sim(const SparseHV& a, const SparseHV& b, SimType t) {
  return sim_from_counts(overlap(a, b), a.cardinality(), b.cardinality(), t);
}

// Dense bit mask over one operand: the fixed-width bitset fast path for
// scanning many vectors against each other. Results are identical to the
// sorted merge (both count the exact integer intersection).
class DenseMask {
 public:
  explicit DenseMask(const SparseHV& h) : dim_(h.dim), words_((h.dim + 63) / 64, 0) {
    for (auto i : h.active) words_[i >> 6] |= (1ULL << (i & 63));
  }

  [[nodiscard]] std::uint32_t dim() const noexcept { return dim_; }
  [[nodiscard]] bool test(std::uint32_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }
  [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept { return words_; }

 private:
  std::uint32_t dim_;
  std::vector<std::uint64_t> words_;
};

inline std::size_t overlap(const DenseMask& mask, const SparseHV& b) {
  if (mask.dim() != b.dim) throw std::invalid_argument("hypervector dimension mismatch");
  std::size_t count = 0;
  for (auto i : b.active) count += mask.test(i);
  return count;
}

inline std::size_t overlap(const DenseMask& a, const DenseMask& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("hypervector dimension mismatch");
  std::size_t count = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w) {
    count += static_cast<std::size_t>(std::popcount(a.words()[w] & b.words()[w]));
  }
  return count;
}

// A finite set of shifts. The numeric form s spans {-s, ..., 0, ..., s}.
// Evaluation order is (|s| asc, negative first), which realizes the tie rule:
// equal-valued shifts resolve toward the smallest magnitude, then negative.
class ShiftSpec {
 public:
  static ShiftSpec radius(int s) {
    if (s < 0) throw std::invalid_argument("shift radius must be >= 0");
    std::vector<int> shifts{0};
    for (int k = 1; k <= s; ++k) {
      shifts.push_back(-k);
      shifts.push_back(k);
    }
    return ShiftSpec(std::move(shifts), false);
  }

  static ShiftSpec explicit_set(std::vector<int> shifts) {
    return ShiftSpec(std::move(shifts), true);
  }

  [[nodiscard]] const std::vector<int>& ordered() const noexcept { return shifts_; }
  [[nodiscard]] bool empty() const noexcept { return shifts_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return shifts_.size(); }

 private:
  ShiftSpec(std::vector<int> shifts, bool normalize) : shifts_(std::move(shifts)) {
    if (normalize) {
      std::sort(shifts_.begin(), shifts_.end(), preferred);
      shifts_.erase(std::unique(shifts_.begin(), shifts_.end()), shifts_.end());
    }
  }
  static bool preferred(int a, int b) {
    const auto aa = std::abs(a), ab = std::abs(b);
    return aa != ab ? aa < ab : a < b;
  }

  std::vector<int> shifts_;
};

struct ShiftMaxResult {
  double value = 0.0;
  int best_shift = 0;
};

// max over s of sim(S_s(a), b): the query-side operand is shifted through the
// permutation (equivariance), never re-encoded.
inline ShiftMaxResult sim_shiftmax(const Permutation& p, const SparseHV& a, const SparseHV& b,
                                   const ShiftSpec& shifts, SimType t) {
  require_same_dim(a, b);
  if (shifts.empty()) throw std::invalid_argument("empty shift set");
  ShiftMaxResult best{-1.0, 0};
  const DenseMask mask(b);
  for (int s : shifts.ordered()) {
    const SparseHV shifted = p.apply_power(a, s);
    const double v =
        sim_from_counts(overlap(mask, shifted), shifted.cardinality(), b.cardinality(), t);
    if (v > best.value) best = {v, s};
  }
  return best;
}

}  // namespace hvseq
