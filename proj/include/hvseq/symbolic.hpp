#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hvseq/similarity.hpp"

namespace hvseq {

// A string anchored at an integer start position: symbol t sits at start + t.
struct PositionedString {
  std::u32string symbols;
  std::int64_t start = 0;

  [[nodiscard]] std::size_t length() const noexcept { return symbols.size(); }
};

// Symbolic overlap: sum over same-symbol position pairs (i, j) with
// |i - j| <= R of (1 - |i - j|/R). Every contribution is a multiple of 1/R,
// so the value is kept exact as the integer sum of (R - |i - j|).
struct SymOv {
  std::int64_t scaled = 0;  // R * value
  std::uint32_t radius = 1;

  [[nodiscard]] double value() const { return static_cast<double>(scaled) / radius; }
};

// Per-symbol position buckets of one string; built once, probed many times.
// This is the per-symbol indexing that turns the naive O(len*len) pair sum
// into O(len(a) * occurrences-in-window).
class PositionIndex {
 public:
  explicit PositionIndex(const PositionedString& s) {
    at_.reserve(s.symbols.size());
    for (std::size_t t = 0; t < s.symbols.size(); ++t) {
      at_[s.symbols[t]].push_back(s.start + static_cast<std::int64_t>(t));
    }
  }

  [[nodiscard]] const std::vector<std::int64_t>* find(char32_t symbol) const {
    const auto it = at_.find(symbol);
    return it == at_.end() ? nullptr : &it->second;
  }

 private:
  std::unordered_map<char32_t, std::vector<std::int64_t>> at_;  // ascending positions
};

// R * SymOv(a, b): probe each a-position's window [i-R, i+R] in b's index.
inline std::int64_t symov_scaled(const PositionedString& a, const PositionIndex& b_index,
                                 std::uint32_t R) {
  if (R == 0) throw std::invalid_argument("R must be >= 1");
  const auto radius = static_cast<std::int64_t>(R);
  std::int64_t scaled = 0;
  for (std::size_t t = 0; t < a.symbols.size(); ++t) {
    const auto* js = b_index.find(a.symbols[t]);
    if (!js) continue;
    const std::int64_t i = a.start + static_cast<std::int64_t>(t);
    auto lo = std::lower_bound(js->begin(), js->end(), i - radius);
    for (; lo != js->end() && *lo <= i + radius; ++lo) {
      scaled += radius - std::llabs(i - *lo);
    }
  }
  return scaled;
}

inline SymOv symov(const PositionedString& a, const PositionedString& b, std::uint32_t R) {
  return SymOv{symov_scaled(a, PositionIndex(b), R), R};
}

// SymOv-norm |x|_R = symov(x, x, R).
inline SymOv symov_norm(const PositionedString& x, std::uint32_t R) { return symov(x, x, R); }

// Normalized symbolic similarity, defined by the same formulas as the
// hypervector measures with SymOv in place of the intersection count.
// Empty operand -> 0.
inline double sim_sym(const PositionedString& a, const PositionedString& b, std::uint32_t R,
                      SimType t) {
  if (a.symbols.empty() || b.symbols.empty()) return 0.0;
  const double s_ab = static_cast<double>(symov(a, b, R).scaled);
  if (t == SimType::overlap) return s_ab / R;
  const double s_aa = static_cast<double>(symov_norm(a, R).scaled);
  const double s_bb = static_cast<double>(symov_norm(b, R).scaled);
  switch (t) {
    case SimType::cosine:
      return s_ab / std::sqrt(s_aa * s_bb);
    case SimType::jaccard:
      return s_ab / (s_aa + s_bb - s_ab);
    case SimType::simpson:
      return s_ab / std::min(s_aa, s_bb);
    default:
      throw std::invalid_argument("unknown similarity type");
  }
}

// max over s of sim_sym(S_s(a), b); shifting a string is adding s to its
// start. Same tie rule as the hypervector shift-max.
inline ShiftMaxResult sim_sym_shiftmax(const PositionedString& a, const PositionedString& b,
                                       std::uint32_t R, const ShiftSpec& shifts, SimType t) {
  if (shifts.empty()) throw std::invalid_argument("empty shift set");
  ShiftMaxResult best{-1.0, 0};
  for (int s : shifts.ordered()) {
    const PositionedString shifted{a.symbols, a.start + s};
    const double v = sim_sym(shifted, b, R, t);
    if (v > best.value) best = {v, s};
  }
  return best;
}

// Levenshtein distance, unit-cost insert/delete/substitute. Two-row DP.
inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t saved = row[j];
      if (a[i - 1] == b[j - 1]) {
        row[j] = diag;
      } else {
        row[j] = 1 + std::min({row[j], row[j - 1], diag});
      }
      diag = saved;
    }
  }
  return row[b.size()];
}

// Lev divided by the longer length; 0/0 defined as 0.
inline double levenshtein_normalized(std::u32string_view a, std::u32string_view b) {
  const std::size_t mx = std::max(a.size(), b.size());
  if (mx == 0) return 0.0;
  return static_cast<double>(levenshtein(a, b)) / static_cast<double>(mx);
}

enum class HammingMode : std::uint8_t { sim_matches, dist_mismatches, shift_distance };

// Positional match/mismatch counts, plus the shift distance: the minimum
// Hamming distance between b and any cyclic rotation of a. All modes require
// equal lengths.
inline std::size_t hamming_and_shift(std::u32string_view a, std::u32string_view b,
                                     HammingMode mode) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming requires equal lengths");
  const std::size_t n = a.size();
  auto mismatches_rot = [&](std::size_t rot) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < n; ++i) d += a[(i + rot) % n] != b[i];
    return d;
  };
  switch (mode) {
    case HammingMode::sim_matches:
      return n - mismatches_rot(0);
    case HammingMode::dist_mismatches:
      return mismatches_rot(0);
    case HammingMode::shift_distance: {
      if (n == 0) return 0;
      std::size_t best = n;
      for (std::size_t rot = 0; rot < n; ++rot) best = std::min(best, mismatches_rot(rot));
      return best;
    }
  }
  throw std::invalid_argument("unknown hamming mode");
}

}  // namespace hvseq
