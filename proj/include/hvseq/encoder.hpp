#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hvseq/permutation.hpp"
#include "hvseq/rng.hpp"
#include "hvseq/sparse_hv.hpp"

namespace hvseq {

enum class Superposition : std::uint8_t { disjunction = 0, counting = 1 };

// Everything that determines an encoding. Two equal configs produce
// bit-identical hypervectors.
struct EncoderConfig {
  std::uint32_t dim = 10000;   // D
  std::uint32_t ones = 11;     // m, active bits per atomic hypervector
  std::uint32_t radius = 7;    // R, similarity radius
  std::uint64_t seed = 1;
  PermKind perm_kind = PermKind::random;
  std::int64_t perm_step = 0;  // cyclic_block only
  Superposition superposition = Superposition::disjunction;

  void validate() const {
    if (dim == 0) throw std::invalid_argument("D must be >= 1");
    if (ones == 0 || ones > dim) throw std::invalid_argument("m must satisfy 1 <= m <= D");
    if (radius == 0) throw std::invalid_argument("R must be >= 1");
  }

  bool operator==(const EncoderConfig&) const = default;
};

// A symbol of a sequence together with its (possibly negative) position.
struct Item {
  char32_t symbol;
  std::int64_t pos;
};

// Deterministic symbol -> atomic hypervector store. The atom is a pure
// function of (seed, symbol), so lazy insertion races cannot change content;
// the map plus a shared_mutex only make the caching safe.
class ItemMemory {
 public:
  explicit ItemMemory(const EncoderConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

  const EncoderConfig& config() const noexcept { return cfg_; }

  // Atomic hypervector e_{a0}: exactly m distinct indices, cached.
  SparseHV atomic(char32_t symbol) const {
    {
      std::shared_lock lock(mu_);
      if (auto it = table_.find(symbol); it != table_.end()) return it->second;
      if (sealed_) throw std::out_of_range("symbol outside the sealed alphabet");
    }
    SparseHV hv = sample_atom(symbol);
    std::unique_lock lock(mu_);
    auto [it, inserted] = table_.emplace(symbol, std::move(hv));
    return it->second;
  }

  // Installs an explicit atom (block-disjoint oracle construction).
  void preset(char32_t symbol, SparseHV hv) {
    if (hv.dim != cfg_.dim || hv.cardinality() != cfg_.ones || !is_valid(hv)) {
      throw std::invalid_argument("preset atom violates the config");
    }
    std::unique_lock lock(mu_);
    table_[symbol] = std::move(hv);
  }

  // After sealing, unknown symbols throw instead of being lazily created.
  void seal() {
    std::unique_lock lock(mu_);
    sealed_ = true;
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return table_.size();
  }

 private:
  // m distinct indices from [0, D) by partial Fisher-Yates over an implicit
  // identity array (sparse map holds only the displaced entries).
  SparseHV sample_atom(char32_t symbol) const {
    SplitMix64 rng(mix_seed(cfg_.seed, kAtomStream, static_cast<std::uint64_t>(symbol)));
    std::unordered_map<std::uint32_t, std::uint32_t> displaced;
    auto value_at = [&](std::uint32_t i) {
      auto it = displaced.find(i);
      return it == displaced.end() ? i : it->second;
    };
    std::vector<std::uint32_t> picked;
    picked.reserve(cfg_.ones);
    for (std::uint32_t i = 0; i < cfg_.ones; ++i) {
      const auto j = i + static_cast<std::uint32_t>(rng.below(cfg_.dim - i));
      picked.push_back(value_at(j));
      displaced[j] = value_at(i);
    }
    return make_sparse_hv(cfg_.dim, std::move(picked));
  }

  EncoderConfig cfg_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<char32_t, SparseHV> table_;
  bool sealed_ = false;
};

// Position-dependent symbol and sequence encoder.
//
// Symbol a at position i: a_i = e_{ai} v e_{a(i+1)} v ... v e_{a(i+R-1)},
// where e_{ai} = perm^i(e_{a0}). A sequence is the disjunction of its
// symbols' hypervectors at their positions. Shifting a sequence by s is,
// bit-exactly, applying perm^s to its hypervector.
class SequenceEncoder {
 public:
  explicit SequenceEncoder(const EncoderConfig& cfg)
      : SequenceEncoder(cfg, std::make_shared<ItemMemory>(cfg)) {}

  SequenceEncoder(const EncoderConfig& cfg, std::shared_ptr<ItemMemory> mem)
      : cfg_(cfg),
        perm_(gen_permutation(cfg.seed, cfg.dim, cfg.perm_kind, cfg.perm_step)),
        mem_(std::move(mem)) {
    cfg_.validate();
    if (!mem_ || mem_->config().dim != cfg_.dim || mem_->config().ones != cfg_.ones) {
      throw std::invalid_argument("item memory inconsistent with config");
    }
  }

  const EncoderConfig& config() const noexcept { return cfg_; }
  const Permutation& perm() const noexcept { return perm_; }
  ItemMemory& memory() noexcept { return *mem_; }
  const ItemMemory& memory() const noexcept { return *mem_; }
  std::shared_ptr<ItemMemory> memory_ptr() const noexcept { return mem_; }

  SparseHV atomic_hv(char32_t symbol) const { return mem_->atomic(symbol); }

  // Disjunction of R consecutive permuted atoms; cardinality in [m, m*R].
  SparseHV symbol_hv(char32_t symbol, std::int64_t i) const {
    std::vector<std::uint32_t> acc;
    acc.reserve(static_cast<std::size_t>(cfg_.ones) * cfg_.radius);
    append_symbol(symbol, i, acc);
    return make_sparse_hv(cfg_.dim, std::move(acc));
  }

  SparseHV encode_sequence(const std::vector<Item>& items) const {
    std::vector<std::uint32_t> acc;
    acc.reserve(items.size() * cfg_.ones * cfg_.radius);
    for (const auto& it : items) append_symbol(it.symbol, it.pos, acc);
    return make_sparse_hv(cfg_.dim, std::move(acc));
  }

  // Contiguous string: character t goes to position start + t.
  SparseHV encode_string(std::u32string_view s, std::int64_t start = 0) const {
    std::vector<std::uint32_t> acc;
    acc.reserve(s.size() * cfg_.ones * cfg_.radius);
    for (std::size_t t = 0; t < s.size(); ++t) {
      append_symbol(s[t], start + static_cast<std::int64_t>(t), acc);
    }
    return make_sparse_hv(cfg_.dim, std::move(acc));
  }

  // The equivariant transform: shift_hv(encode(q), s) == encode(S_s(q)).
  SparseHV shift(const SparseHV& h, std::int64_t s) const { return perm_.apply_power(h, s); }

 private:
  void append_symbol(char32_t symbol, std::int64_t i, std::vector<std::uint32_t>& acc) const {
    const SparseHV atom = mem_->atomic(symbol);
    for (std::uint32_t r = 0; r < cfg_.radius; ++r) {
      const std::int64_t power = i + static_cast<std::int64_t>(r);
      for (auto idx : atom.active) acc.push_back(perm_.power_image(idx, power));
    }
  }

  EncoderConfig cfg_;
  Permutation perm_;
  std::shared_ptr<ItemMemory> mem_;
};

inline SparseHV shift_hv(const Permutation& p, const SparseHV& h, std::int64_t s) {
  return p.apply_power(h, s);
}

}  // namespace hvseq
