#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hvseq {

// D-dimensional binary hypervector stored as the sorted set of active indices.
// Sparse storage is the working regime: a few hundred ones against D ~ 10000.
struct SparseHV {
  std::uint32_t dim = 0;
  std::vector<std::uint32_t> active;  // strictly increasing, all < dim

  [[nodiscard]] std::size_t cardinality() const noexcept { return active.size(); }
  [[nodiscard]] bool empty() const noexcept { return active.empty(); }

  bool operator==(const SparseHV&) const = default;
};

inline void require_same_dim(const SparseHV& a, const SparseHV& b) {
  if (a.dim != b.dim) throw std::invalid_argument("hypervector dimension mismatch");
}

// Builds a SparseHV from possibly unsorted, possibly duplicated indices.
inline SparseHV make_sparse_hv(std::uint32_t dim, std::vector<std::uint32_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (!indices.empty() && indices.back() >= dim) {
    throw std::invalid_argument("active index out of range");
  }
  return SparseHV{dim, std::move(indices)};
}

// Invariant check, used by deserialization and tests.
inline bool is_valid(const SparseHV& h) {
  for (std::size_t i = 0; i < h.active.size(); ++i) {
    if (h.active[i] >= h.dim) return false;
    if (i > 0 && h.active[i] <= h.active[i - 1]) return false;
  }
  return true;
}

}  // namespace hvseq
