#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hvseq/encoder.hpp"
#include "hvseq/text.hpp"

namespace hvseq {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct version_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::ifstream open_or_throw(const std::string& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw io_error("cannot open " + path);
  return in;
}
}  // namespace detail

// One word per line; trimmed, ASCII-lowercased, deduplicated keeping first
// occurrence, blank lines skipped.
inline std::vector<std::u32string> load_dictionary(const std::string& path) {
  auto in = detail::open_or_throw(path, std::ios::in);
  std::vector<std::u32string> words;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    const std::string folded = ascii_lower(trim(line));
    if (folded.empty()) continue;
    if (seen.insert(folded).second) words.push_back(decode_utf8(folded));
  }
  return words;
}

struct SpellQuery {
  std::u32string query;    // misspelling
  std::u32string correct;  // target word
};

struct MisspellingSet {
  std::vector<SpellQuery> queries;
  std::size_t malformed = 0;  // skipped lines
};

enum class MissFormat : std::uint8_t { tab_pairs, dollar_groups, autodetect };

// tab_pairs: "misspelling<TAB>correct" per line (swap_columns flips the
// fields). dollar_groups: "$correct" headers followed by misspelling lines
// (Birkbeck style). Autodetect keys on a leading '$'.
inline MisspellingSet load_misspellings(const std::string& path,
                                        MissFormat format = MissFormat::autodetect,
                                        bool swap_columns = false) {
  auto in = detail::open_or_throw(path, std::ios::in);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);

  if (format == MissFormat::autodetect) {
    format = MissFormat::tab_pairs;
    for (const auto& l : lines) {
      const auto t = trim(l);
      if (t.empty()) continue;
      format = t.front() == '$' ? MissFormat::dollar_groups : MissFormat::tab_pairs;
      break;
    }
  }

  MisspellingSet out;
  if (format == MissFormat::tab_pairs) {
    // Some published pair files separate columns with spaces instead of a
    // tab; fall back to whitespace when the whole file is tab-free.
    bool any_tab = false;
    for (const auto& l : lines) any_tab = any_tab || l.find('\t') != std::string::npos;
    const char sep = any_tab ? '\t' : ' ';
    for (const auto& l : lines) {
      if (trim(l).empty()) continue;
      const auto cut = l.find(sep);
      if (cut == std::string::npos) {
        ++out.malformed;
        continue;
      }
      std::string first = ascii_lower(trim(std::string_view(l).substr(0, cut)));
      std::string second = ascii_lower(trim(std::string_view(l).substr(cut + 1)));
      if (const auto extra = second.find_first_of("\t "); extra != std::string::npos) {
        second = second.substr(0, extra);  // keep the first correction column
      }
      if (first.empty() || second.empty()) {
        ++out.malformed;
        continue;
      }
      if (swap_columns) std::swap(first, second);
      out.queries.push_back({decode_utf8(first), decode_utf8(second)});
    }
  } else {
    std::string correct;
    for (const auto& l : lines) {
      const auto t = trim(l);
      if (t.empty()) continue;
      if (t.front() == '$') {
        correct = ascii_lower(trim(t.substr(1)));
        if (correct.empty()) ++out.malformed;
        continue;
      }
      if (correct.empty()) {
        ++out.malformed;
        continue;
      }
      out.queries.push_back({decode_utf8(ascii_lower(t)), decode_utf8(correct)});
    }
  }
  if (out.queries.empty()) throw format_error("no queries parsed from " + path);
  return out;
}

struct LabeledSequence {
  std::string label;  // EI | IE | N
  std::string name;
  std::u32string sequence;
};

// UCI splice format: "LABEL, NAME, SEQUENCE" records. Whitespace inside the
// sequence is stripped; ambiguity codes (D, N, S, R) stay as ordinary
// alphabet symbols.
inline std::vector<LabeledSequence> load_splice(const std::string& path) {
  auto in = detail::open_or_throw(path, std::ios::in);
  std::vector<LabeledSequence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw format_error("splice line " + std::to_string(line_no) + ": expected 3 fields");
    }
    std::string label = ascii_upper(trim(std::string_view(line).substr(0, c1)));
    if (label == "NEITHER") label = "N";
    if (label != "EI" && label != "IE" && label != "N") {
      throw format_error("splice line " + std::to_string(line_no) + ": unknown label '" +
                         label + "'");
    }
    const std::string name{trim(std::string_view(line).substr(c1 + 1, c2 - c1 - 1))};
    std::string seq;
    for (char c : line.substr(c2 + 1)) {
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
      seq.push_back(ascii_upper(c));
    }
    if (seq.empty()) {
      throw format_error("splice line " + std::to_string(line_no) + ": empty sequence");
    }
    out.push_back({std::move(label), name, decode_utf8(seq)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hypervector index serialization. Self-describing binary:
//   magic "HVSQ1", config block, entry count, then per entry the UTF-8 word
//   and its active indices as delta-encoded LEB128 varints (first delta is
//   the first index itself). Round-trip is bit-exact.

struct DictionaryIndex {
  EncoderConfig config;
  std::vector<std::u32string> words;
  std::vector<SparseHV> hvs;
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}
inline void put_u64(std::string& out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}
inline void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7F) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

class Reader {
 public:
  Reader(const std::string& buf, std::string path) : buf_(buf), path_(std::move(path)) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(byte()); }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(byte()) << (8 * k);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(byte()) << (8 * k);
    return v;
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    int shift = 0;
    for (;;) {
      const auto b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if (!(b & 0x80)) return v;
      shift += 7;
      if (shift > 63) throw format_error("varint overflow in " + path_);
    }
  }
  std::string bytes(std::size_t n) {
    if (pos_ + n > buf_.size()) throw format_error("truncated index file " + path_);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  unsigned char byte() {
    if (pos_ >= buf_.size()) throw format_error("truncated index file " + path_);
    return static_cast<unsigned char>(buf_[pos_++]);
  }
  const std::string& buf_;
  std::string path_;
  std::size_t pos_ = 0;
};

inline constexpr char kIndexMagic[5] = {'H', 'V', 'S', 'Q', '1'};

}  // namespace detail

inline void save_index(const std::string& path, const DictionaryIndex& index) {
  if (index.words.size() != index.hvs.size()) {
    throw std::invalid_argument("index words/hvs size mismatch");
  }
  std::string out;
  out.append(detail::kIndexMagic, sizeof(detail::kIndexMagic));
  out.push_back(static_cast<char>(index.config.perm_kind));
  detail::put_u32(out, static_cast<std::uint32_t>(index.config.perm_step));
  out.push_back(static_cast<char>(index.config.superposition));
  detail::put_u32(out, index.config.dim);
  detail::put_u32(out, index.config.ones);
  detail::put_u32(out, index.config.radius);
  detail::put_u64(out, index.config.seed);
  detail::put_u64(out, index.words.size());
  for (std::size_t i = 0; i < index.words.size(); ++i) {
    const std::string utf8 = encode_utf8(index.words[i]);
    detail::put_varint(out, utf8.size());
    out.append(utf8);
    const auto& hv = index.hvs[i];
    if (hv.dim != index.config.dim || !is_valid(hv)) {
      throw std::invalid_argument("index entry violates the config");
    }
    detail::put_varint(out, hv.active.size());
    std::uint32_t prev = 0;
    for (std::size_t k = 0; k < hv.active.size(); ++k) {
      detail::put_varint(out, hv.active[k] - (k == 0 ? 0 : prev));
      prev = hv.active[k];
    }
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw io_error("write failed for " + path);
}

// expect, when given, must match the stored config exactly.
inline DictionaryIndex load_index(const std::string& path,
                                  const EncoderConfig* expect = nullptr) {
  auto in = detail::open_or_throw(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();
  detail::Reader r(buf, path);

  if (r.bytes(sizeof(detail::kIndexMagic)) !=
      std::string(detail::kIndexMagic, sizeof(detail::kIndexMagic))) {
    throw version_error("bad magic in " + path);
  }
  DictionaryIndex index;
  index.config.perm_kind = static_cast<PermKind>(r.u8());
  index.config.perm_step = r.u32();
  index.config.superposition = static_cast<Superposition>(r.u8());
  index.config.dim = r.u32();
  index.config.ones = r.u32();
  index.config.radius = r.u32();
  index.config.seed = r.u64();
  index.config.validate();
  if (expect && !(*expect == index.config)) {
    throw version_error("index config in " + path + " does not match the expected config");
  }
  const std::uint64_t n = r.u64();
  index.words.reserve(n);
  index.hvs.reserve(n);
  for (std::uint64_t e = 0; e < n; ++e) {
    const auto wlen = r.varint();
    index.words.push_back(decode_utf8(r.bytes(wlen)));
    const auto count = r.varint();
    SparseHV hv{index.config.dim, {}};
    hv.active.reserve(count);
    std::uint64_t cur = 0;
    for (std::uint64_t k = 0; k < count; ++k) {
      const auto delta = r.varint();
      if (k > 0 && delta == 0) throw format_error("non-increasing index in " + path);
      cur += delta;
      if (cur >= index.config.dim) throw format_error("active index out of range in " + path);
      hv.active.push_back(static_cast<std::uint32_t>(cur));
    }
    index.hvs.push_back(std::move(hv));
  }
  if (!r.done()) throw format_error("trailing bytes in " + path);
  return index;
}

}  // namespace hvseq
