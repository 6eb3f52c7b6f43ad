#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "hvseq/encoder.hpp"
#include "hvseq/permutation.hpp"
#include "hvseq/rng.hpp"

namespace hvseq {

// Partial-permutation baseline. A symbol at position i is its atom permuted
// floor(i/R) whole times, with the fraction f = i/R - floor(i/R) of its
// 1-components additionally moved one permutation step. The moved subset is
// the ceil(f*m) active indices ranking highest in a fixed seeded priority
// order over dimensions, so the subset is deterministic and grows by
// inclusion within a block — that nesting is what produces the linear
// similarity decay 1 - |i-j|/R. Similarity-preserving but not
// shift-equivariant: there is no hypervector transform realizing the shift.
struct PartialPermConfig {
  std::uint32_t dim = 10000;
  std::uint32_t ones = 100;
  std::uint32_t radius = 4;
  std::uint64_t seed = 1;

  void validate() const {
    if (dim == 0 || ones == 0 || ones > dim || radius == 0) {
      throw std::invalid_argument("invalid partial-permutation config");
    }
  }
};

class PartialPermEncoder {
 public:
  explicit PartialPermEncoder(const PartialPermConfig& cfg)
      : cfg_(cfg), perm_(Permutation::random(cfg.seed, cfg.dim)) {
    cfg_.validate();
    EncoderConfig ecfg;
    ecfg.dim = cfg_.dim;
    ecfg.ones = cfg_.ones;
    ecfg.radius = cfg_.radius;
    ecfg.seed = cfg_.seed;
    mem_ = std::make_shared<ItemMemory>(ecfg);
    // Priority rank per dimension from a seeded shuffle; rank 0 moves first.
    std::vector<std::uint32_t> order(cfg_.dim);
    std::iota(order.begin(), order.end(), 0u);
    SplitMix64 rng(mix_seed(cfg_.seed, kPriorityStream));
    for (std::uint32_t i = cfg_.dim - 1; i > 0; --i) {
      const auto j = static_cast<std::uint32_t>(rng.below(i + 1));
      std::swap(order[i], order[j]);
    }
    rank_.resize(cfg_.dim);
    for (std::uint32_t r = 0; r < cfg_.dim; ++r) rank_[order[r]] = r;
  }

  const PartialPermConfig& config() const noexcept { return cfg_; }
  const Permutation& perm() const noexcept { return perm_; }
  ItemMemory& memory() noexcept { return *mem_; }
  const ItemMemory& memory() const noexcept { return *mem_; }

  SparseHV symbol_hv(char32_t symbol, std::int64_t i) const {
    if (i < 0) throw std::invalid_argument("partial permutation defined for positions >= 0");
    const std::int64_t whole = i / cfg_.radius;
    const std::uint32_t frac_steps = static_cast<std::uint32_t>(i % cfg_.radius);
    SparseHV base = perm_.apply_power(mem_->atomic(symbol), whole);
    if (frac_steps == 0) return base;

    // ceil(f * m) with f = frac_steps / R.
    const std::uint32_t moved_n =
        (frac_steps * cfg_.ones + cfg_.radius - 1) / cfg_.radius;
    std::vector<std::uint32_t> by_priority = base.active;
    std::sort(by_priority.begin(), by_priority.end(),
              [this](std::uint32_t a, std::uint32_t b) { return rank_[a] < rank_[b]; });
    std::vector<std::uint32_t> out;
    out.reserve(base.active.size());
    for (std::uint32_t k = 0; k < by_priority.size(); ++k) {
      out.push_back(k < moved_n ? perm_.image(by_priority[k]) : by_priority[k]);
    }
    return make_sparse_hv(cfg_.dim, std::move(out));
  }

  SparseHV encode_string(std::u32string_view s, std::int64_t start = 0) const {
    if (start < 0) throw std::invalid_argument("partial permutation defined for positions >= 0");
    std::vector<std::uint32_t> acc;
    acc.reserve(s.size() * cfg_.ones);
    for (std::size_t t = 0; t < s.size(); ++t) {
      const SparseHV hv = symbol_hv(s[t], start + static_cast<std::int64_t>(t));
      acc.insert(acc.end(), hv.active.begin(), hv.active.end());
    }
    return make_sparse_hv(cfg_.dim, std::move(acc));
  }

 private:
  PartialPermConfig cfg_;
  Permutation perm_;
  std::shared_ptr<ItemMemory> mem_;
  std::vector<std::uint32_t> rank_;
};

}  // namespace hvseq
