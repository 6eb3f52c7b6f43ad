#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hvseq/encoder.hpp"
#include "hvseq/symbolic.hpp"

namespace hvseq {

// Nonnegative integer vector for the additive-superposition path, stored as
// sorted (index, count) pairs.
struct CountHV {
  std::uint32_t dim = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;  // index ascending

  [[nodiscard]] std::uint64_t total_mass() const {
    std::uint64_t m = 0;
    for (const auto& [_, c] : entries) m += c;
    return m;
  }

  bool operator==(const CountHV&) const = default;
};

inline std::uint64_t count_dot(const CountHV& x, const CountHV& y) {
  if (x.dim != y.dim) throw std::invalid_argument("count vector dimension mismatch");
  std::uint64_t acc = 0;
  std::size_t i = 0, j = 0;
  while (i < x.entries.size() && j < y.entries.size()) {
    const auto xi = x.entries[i].first, yj = y.entries[j].first;
    if (xi < yj) {
      ++i;
    } else if (yj < xi) {
      ++j;
    } else {
      acc += static_cast<std::uint64_t>(x.entries[i].second) * y.entries[j].second;
      ++i, ++j;
    }
  }
  return acc;
}

// Ideal construction under which hypervector arithmetic equals SymOv exactly:
// alphabet symbol a gets the atom [a*m, (a+1)*m), the permutation is the
// cyclic block shift by A*m over D = A*m*L, and sequences are superimposed by
// addition. Every (symbol, atomic position) pair inside the L-wide window then
// occupies its own disjoint block, so
//   count_dot(encode(a), encode(b)) == m * R * symov(a, b, R)
// as exact integers. Positions are window-checked: a cyclic wraparound would
// silently break the identity.
class BlockDisjointOracle {
 public:
  BlockDisjointOracle(std::u32string alphabet, std::uint32_t window, std::uint32_t ones,
                      std::uint32_t radius)
      : alphabet_(std::move(alphabet)), window_(window) {
    const auto a_count = static_cast<std::uint64_t>(alphabet_.size());
    if (a_count == 0) throw std::invalid_argument("alphabet must be nonempty");
    if (ones == 0) throw std::invalid_argument("m must be >= 1");
    if (radius == 0 || window < radius) throw std::invalid_argument("need L >= R >= 1");
    const std::uint64_t dim = a_count * ones * window;
    if (dim > (1ULL << 31)) throw std::invalid_argument("oracle dimension too large");

    EncoderConfig cfg;
    cfg.dim = static_cast<std::uint32_t>(dim);
    cfg.ones = ones;
    cfg.radius = radius;
    cfg.seed = 0;
    cfg.perm_kind = PermKind::cyclic_block;
    cfg.perm_step = static_cast<std::int64_t>(a_count * ones);
    cfg.superposition = Superposition::counting;

    auto mem = std::make_shared<ItemMemory>(cfg);
    for (std::size_t a = 0; a < alphabet_.size(); ++a) {
      std::vector<std::uint32_t> block(ones);
      std::iota(block.begin(), block.end(), static_cast<std::uint32_t>(a * ones));
      mem->preset(alphabet_[a], make_sparse_hv(cfg.dim, std::move(block)));
    }
    mem->seal();
    encoder_ = std::make_unique<SequenceEncoder>(cfg, std::move(mem));
  }

  [[nodiscard]] const SequenceEncoder& encoder() const noexcept { return *encoder_; }
  [[nodiscard]] const EncoderConfig& config() const noexcept { return encoder_->config(); }
  [[nodiscard]] const std::u32string& alphabet() const noexcept { return alphabet_; }
  [[nodiscard]] std::uint32_t window() const noexcept { return window_; }

  // Additive superposition of the R atomic indicators per item. Same encoder
  // front end as the disjunction path; only the superposition differs.
  [[nodiscard]] CountHV counting_encode(const std::vector<Item>& items) const {
    const auto& cfg = encoder_->config();
    std::vector<std::uint32_t> acc;
    acc.reserve(items.size() * cfg.ones * cfg.radius);
    for (const auto& it : items) {
      if (it.pos < 0 ||
          it.pos + static_cast<std::int64_t>(cfg.radius) > static_cast<std::int64_t>(window_)) {
        throw std::out_of_range("item position outside the oracle window");
      }
      const SparseHV atom = encoder_->memory().atomic(it.symbol);
      for (std::uint32_t r = 0; r < cfg.radius; ++r) {
        for (auto idx : atom.active) {
          acc.push_back(encoder_->perm().power_image(idx, it.pos + r));
        }
      }
    }
    std::sort(acc.begin(), acc.end());
    CountHV out{cfg.dim, {}};
    for (std::size_t i = 0; i < acc.size();) {
      std::size_t j = i;
      while (j < acc.size() && acc[j] == acc[i]) ++j;
      out.entries.emplace_back(acc[i], static_cast<std::uint32_t>(j - i));
      i = j;
    }
    return out;
  }

  [[nodiscard]] CountHV counting_encode_string(std::u32string_view s,
                                               std::int64_t start = 0) const {
    std::vector<Item> items;
    items.reserve(s.size());
    for (std::size_t t = 0; t < s.size(); ++t) {
      items.push_back({s[t], start + static_cast<std::int64_t>(t)});
    }
    return counting_encode(items);
  }

 private:
  std::u32string alphabet_;
  std::uint32_t window_;
  std::unique_ptr<SequenceEncoder> encoder_;
};

inline BlockDisjointOracle block_disjoint_config(std::u32string alphabet, std::uint32_t window,
                                                 std::uint32_t ones, std::uint32_t radius) {
  return BlockDisjointOracle(std::move(alphabet), window, ones, radius);
}

}  // namespace hvseq
