#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hvseq/rng.hpp"
#include "hvseq/sparse_hv.hpp"

namespace hvseq {

enum class PermKind : std::uint8_t { random = 0, cyclic_block = 1 };

// Bijection on [0, dim) with an eagerly built cycle decomposition, so the
// image of an index under the k-th power costs O(1) for any k (including
// negative k: inverse powers are offsets in the other direction along the
// cycle). Immutable after construction; safe to share across threads.
class Permutation {
 public:
  // Seeded uniform random permutation (Fisher-Yates over SplitMix64).
  static Permutation random(std::uint64_t seed, std::uint32_t dim) {
    require_dim(dim);
    std::vector<std::uint32_t> fwd(dim);
    std::iota(fwd.begin(), fwd.end(), 0u);
    SplitMix64 rng(mix_seed(seed, kPermStream));
    for (std::uint32_t i = dim - 1; i > 0; --i) {
      const auto j = static_cast<std::uint32_t>(rng.below(i + 1));
      std::swap(fwd[i], fwd[j]);
    }
    return Permutation(std::move(fwd));
  }

  // i -> (i + step) mod dim. step must lie in (0, dim).
  static Permutation cyclic_block(std::uint32_t dim, std::int64_t step) {
    require_dim(dim);
    if (step <= 0 || step >= static_cast<std::int64_t>(dim)) {
      throw std::invalid_argument("cyclic_block step must be in (0, dim)");
    }
    std::vector<std::uint32_t> fwd(dim);
    for (std::uint32_t i = 0; i < dim; ++i) {
      fwd[i] = static_cast<std::uint32_t>((i + static_cast<std::uint64_t>(step)) % dim);
    }
    return Permutation(std::move(fwd));
  }

  // From an explicit image array; validates bijectivity.
  static Permutation from_forward(std::vector<std::uint32_t> fwd) {
    require_dim(static_cast<std::uint32_t>(fwd.size()));
    std::vector<bool> seen(fwd.size(), false);
    for (auto v : fwd) {
      if (v >= fwd.size() || seen[v]) throw std::invalid_argument("not a bijection");
      seen[v] = true;
    }
    return Permutation(std::move(fwd));
  }

  [[nodiscard]] std::uint32_t dim() const noexcept { return dim_; }
  [[nodiscard]] const std::vector<std::uint32_t>& forward() const noexcept { return forward_; }

  [[nodiscard]] std::uint32_t image(std::uint32_t i) const { return forward_[i]; }

  // Image of i under the k-th power, via cycle-offset arithmetic.
  [[nodiscard]] std::uint32_t power_image(std::uint32_t i, std::int64_t k) const {
    const std::uint32_t c = cycle_id_[i];
    const std::uint32_t off = cycle_off_[c];
    const std::int64_t len = cycle_off_[c + 1] - off;
    std::int64_t p = (static_cast<std::int64_t>(cycle_pos_[i]) + k % len) % len;
    if (p < 0) p += len;
    return cycle_elems_[off + static_cast<std::uint32_t>(p)];
  }

  // Applies the k-th power to every active index; cost O(|active|),
  // independent of |k|. k = 0 returns x unchanged.
  [[nodiscard]] SparseHV apply_power(const SparseHV& x, std::int64_t k) const {
    if (x.dim != dim_) throw std::invalid_argument("hypervector dimension mismatch");
    if (k == 0) return x;
    std::vector<std::uint32_t> mapped;
    mapped.reserve(x.active.size());
    for (auto idx : x.active) mapped.push_back(power_image(idx, k));
    std::sort(mapped.begin(), mapped.end());
    return SparseHV{dim_, std::move(mapped)};
  }

 private:
  explicit Permutation(std::vector<std::uint32_t> fwd)
      : dim_(static_cast<std::uint32_t>(fwd.size())), forward_(std::move(fwd)) {
    build_cycles();
  }

  static void require_dim(std::uint32_t dim) {
    if (dim == 0) throw std::invalid_argument("permutation dimension must be >= 1");
  }

  void build_cycles() {
    cycle_id_.assign(dim_, 0);
    cycle_pos_.assign(dim_, 0);
    cycle_elems_.reserve(dim_);
    std::vector<bool> visited(dim_, false);
    for (std::uint32_t start = 0; start < dim_; ++start) {
      if (visited[start]) continue;
      const auto cid = static_cast<std::uint32_t>(cycle_off_.size());
      cycle_off_.push_back(static_cast<std::uint32_t>(cycle_elems_.size()));
      std::uint32_t pos = 0;
      for (std::uint32_t i = start; !visited[i]; i = forward_[i]) {
        visited[i] = true;
        cycle_id_[i] = cid;
        cycle_pos_[i] = pos++;
        cycle_elems_.push_back(i);
      }
    }
    cycle_off_.push_back(static_cast<std::uint32_t>(cycle_elems_.size()));
  }

  std::uint32_t dim_;
  std::vector<std::uint32_t> forward_;
  std::vector<std::uint32_t> cycle_elems_;  // cycles laid out back to back
  std::vector<std::uint32_t> cycle_off_;    // per cycle: start offset (+ sentinel)
  std::vector<std::uint32_t> cycle_id_;     // per index
  std::vector<std::uint32_t> cycle_pos_;    // per index: offset within its cycle
};

inline Permutation gen_permutation(std::uint64_t seed, std::uint32_t dim, PermKind kind,
                                   std::int64_t step = 0) {
  switch (kind) {
    case PermKind::random:
      return Permutation::random(seed, dim);
    case PermKind::cyclic_block:
      return Permutation::cyclic_block(dim, step);
  }
  throw std::invalid_argument("unknown permutation kind");
}

inline SparseHV apply_perm_power(const Permutation& p, std::int64_t k, const SparseHV& x) {
  return p.apply_power(x, k);
}

}  // namespace hvseq
