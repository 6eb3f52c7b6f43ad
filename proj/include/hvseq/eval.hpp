#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hvseq/data_io.hpp"
#include "hvseq/encoder.hpp"
#include "hvseq/similarity.hpp"
#include "hvseq/symbolic.hpp"

namespace hvseq {

// ---------------------------------------------------------------------------
// Deterministic parallelism: contiguous index chunks, results written by
// index, sequential reduction afterwards. Reports are byte-identical for any
// worker count.

inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn, &failure, &failure_mu] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        const std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Fixed-point formatting for CSV output: 6 significant digits, '.' decimal.
inline std::string format_sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline constexpr std::uint64_t kFoldStream = 0x464F4C4400ULL;
inline constexpr std::uint64_t kSvmStream = 0x53564D00ULL;

// ---------------------------------------------------------------------------
// Pearson correlation.

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("pearson: need at least 2 points");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Top-n spellcheck evaluation.

enum class ScorerKind : std::uint8_t { hv, sym, lev, lev_max };

struct ScorerSpec {
  ScorerKind kind = ScorerKind::hv;
  EncoderConfig cfg{};                       // hv
  ShiftSpec shifts = ShiftSpec::radius(0);   // hv, sym; applied to the query
  SimType type = SimType::cosine;            // hv, sym
  std::uint32_t sym_radius = 7;              // sym
};

struct TopNReport {
  std::vector<int> ns;             // ascending
  std::size_t query_count = 0;     // t
  std::vector<std::size_t> hits;   // t_n per n
  std::size_t correct_missing = 0; // queries whose target is not in the dictionary

  struct Trace {
    std::u32string query;
    std::u32string correct;
    std::u32string best_word;
    std::size_t correct_rank = 0;  // 1-based; 0 when absent from the dictionary
  };
  std::vector<Trace> traces;       // filled only on request

  [[nodiscard]] double accuracy(std::size_t i) const {
    return query_count == 0 ? 0.0 : 100.0 * static_cast<double>(hits[i]) / query_count;
  }
};

namespace detail {

// Normalized symbolic similarity from scaled (integer) SymOv values; the 1/R
// scale cancels in every normalized type. Empty operands have norm 0.
inline double sym_sim_from_scaled(std::int64_t s_ab, std::int64_t s_aa, std::int64_t s_bb,
                                  SimType t, std::uint32_t radius) {
  if (t == SimType::overlap) return static_cast<double>(s_ab) / radius;
  if (s_aa == 0 || s_bb == 0) return 0.0;
  switch (t) {
    case SimType::cosine:
      return static_cast<double>(s_ab) /
             std::sqrt(static_cast<double>(s_aa) * static_cast<double>(s_bb));
    case SimType::jaccard:
      return static_cast<double>(s_ab) / static_cast<double>(s_aa + s_bb - s_ab);
    case SimType::simpson:
      return static_cast<double>(s_ab) / static_cast<double>(std::min(s_aa, s_bb));
    default:
      throw std::invalid_argument("unknown similarity type");
  }
}

// Per-query dictionary scores, higher is better. Ties in ranking break by
// ascending word order, so reports are independent of storage order and
// parallelism.
struct QueryOutcome {
  std::size_t correct_rank = 0;  // 0 = correct word absent
  std::size_t best_index = 0;
};

inline QueryOutcome rank_query(const std::vector<double>& scores,
                               const std::vector<std::u32string>& words,
                               std::size_t correct_idx) {
  QueryOutcome out;
  std::size_t best = 0;
  for (std::size_t w = 1; w < words.size(); ++w) {
    if (scores[w] > scores[best] || (scores[w] == scores[best] && words[w] < words[best])) {
      best = w;
    }
  }
  out.best_index = best;
  if (correct_idx >= words.size()) return out;  // rank 0: not present
  // Rank of the correct word under (score desc, word asc).
  std::size_t rank = 1;
  const double cs = scores[correct_idx];
  const std::u32string& correct = words[correct_idx];
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (w == correct_idx) continue;
    if (scores[w] > cs || (scores[w] == cs && words[w] < correct)) ++rank;
  }
  out.correct_rank = rank;
  return out;
}

}  // namespace detail

inline TopNReport topn_eval(const std::vector<std::u32string>& dict,
                            const std::vector<SpellQuery>& queries, std::vector<int> ns,
                            const ScorerSpec& spec, unsigned threads = 1,
                            bool want_traces = false) {
  if (dict.empty()) throw std::invalid_argument("topn_eval: empty dictionary");
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.empty() || ns.front() < 1) throw std::invalid_argument("topn_eval: bad n set");

  // Hypervector path: encode the dictionary once into packed bitsets and scan
  // with AND+popcount — exact integer overlaps, identical to the sparse merge.
  std::unique_ptr<SequenceEncoder> enc;
  std::vector<DenseMask> dict_masks;
  std::vector<std::size_t> dict_cards;
  // Symbolic path: per-word position indexes and SymOv self-norms, built once.
  std::vector<PositionIndex> dict_pos;
  std::vector<std::int64_t> dict_norms;
  if (spec.kind == ScorerKind::hv) {
    enc = std::make_unique<SequenceEncoder>(spec.cfg);
    dict_masks.reserve(dict.size());
    dict_cards.assign(dict.size(), 0);
    std::vector<SparseHV> hvs(dict.size());
    parallel_for(dict.size(), threads,
                 [&](std::size_t w) { hvs[w] = enc->encode_string(dict[w], 0); });
    for (std::size_t w = 0; w < dict.size(); ++w) {
      dict_cards[w] = hvs[w].cardinality();
      dict_masks.emplace_back(hvs[w]);
      hvs[w] = SparseHV{};  // packed form is all the scan needs
    }
  } else if (spec.kind == ScorerKind::sym) {
    dict_pos.reserve(dict.size());
    dict_norms.assign(dict.size(), 0);
    for (std::size_t w = 0; w < dict.size(); ++w) {
      const PositionedString b{dict[w], 0};
      dict_pos.emplace_back(b);
      dict_norms[w] = symov_scaled(b, dict_pos.back(), spec.sym_radius);
    }
  }

  std::unordered_map<std::u32string, std::size_t> word_at;
  word_at.reserve(dict.size());
  for (std::size_t w = 0; w < dict.size(); ++w) word_at.emplace(dict[w], w);

  std::vector<detail::QueryOutcome> outcomes(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t q) {
    std::vector<double> scores(dict.size());
    switch (spec.kind) {
      case ScorerKind::hv: {
        const SparseHV qhv = enc->encode_string(queries[q].query, 0);
        std::fill(scores.begin(), scores.end(), -1.0);
        for (int s : spec.shifts.ordered()) {
          const DenseMask mask(enc->shift(qhv, s));
          for (std::size_t w = 0; w < dict.size(); ++w) {
            const double v = sim_from_counts(overlap(mask, dict_masks[w]), qhv.cardinality(),
                                             dict_cards[w], spec.type);
            if (v > scores[w]) scores[w] = v;
          }
        }
        break;
      }
      case ScorerKind::sym: {
        const std::int64_t qnorm =
            symov_scaled({queries[q].query, 0}, PositionIndex({queries[q].query, 0}),
                         spec.sym_radius);
        std::fill(scores.begin(), scores.end(), -1.0);
        for (int s : spec.shifts.ordered()) {
          const PositionedString shifted{queries[q].query, s};
          for (std::size_t w = 0; w < dict.size(); ++w) {
            const std::int64_t s_ab = symov_scaled(shifted, dict_pos[w], spec.sym_radius);
            const double v = detail::sym_sim_from_scaled(s_ab, qnorm, dict_norms[w], spec.type,
                                                         spec.sym_radius);
            if (v > scores[w]) scores[w] = v;
          }
        }
        break;
      }
      case ScorerKind::lev:
        for (std::size_t w = 0; w < dict.size(); ++w) {
          scores[w] = -static_cast<double>(levenshtein(queries[q].query, dict[w]));
        }
        break;
      case ScorerKind::lev_max:
        for (std::size_t w = 0; w < dict.size(); ++w) {
          scores[w] = -levenshtein_normalized(queries[q].query, dict[w]);
        }
        break;
    }
    const auto hit = word_at.find(queries[q].correct);
    outcomes[q] =
        detail::rank_query(scores, dict, hit == word_at.end() ? dict.size() : hit->second);
  });

  TopNReport report;
  report.ns = ns;
  report.query_count = queries.size();
  report.hits.assign(ns.size(), 0);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& oc = outcomes[q];
    if (oc.correct_rank == 0) {
      ++report.correct_missing;  // counted as a miss for every n
    } else {
      for (std::size_t i = 0; i < ns.size(); ++i) {
        if (oc.correct_rank <= static_cast<std::size_t>(ns[i])) ++report.hits[i];
      }
    }
    if (want_traces) {
      report.traces.push_back({queries[q].query, queries[q].correct, dict[oc.best_index],
                               oc.correct_rank});
    }
  }
  return report;
}

// Means/stds over hypervector realizations r = 0..N-1, realization r encoded
// with seed + r. Deterministic scorers simply repeat.
struct TopNStats {
  std::vector<int> ns;
  std::vector<double> mean;   // percent
  std::vector<double> stdev;  // sample std, 0 for a single realization
  std::size_t realizations = 0;
  std::size_t query_count = 0;
};

inline TopNStats topn_eval_realizations(const std::vector<std::u32string>& dict,
                                        const std::vector<SpellQuery>& queries,
                                        const std::vector<int>& ns, const ScorerSpec& spec,
                                        std::size_t realizations, unsigned threads = 1) {
  if (realizations == 0) throw std::invalid_argument("need at least one realization");
  std::vector<std::vector<double>> acc;  // per realization, per n
  TopNStats stats;
  for (std::size_t r = 0; r < realizations; ++r) {
    ScorerSpec s = spec;
    s.cfg.seed = spec.cfg.seed + r;
    const TopNReport rep = topn_eval(dict, queries, ns, s, threads, false);
    if (r == 0) {
      stats.ns = rep.ns;
      stats.query_count = rep.query_count;
    }
    std::vector<double> row(rep.ns.size());
    for (std::size_t i = 0; i < rep.ns.size(); ++i) row[i] = rep.accuracy(i);
    acc.push_back(std::move(row));
  }
  stats.realizations = realizations;
  stats.mean.assign(stats.ns.size(), 0.0);
  stats.stdev.assign(stats.ns.size(), 0.0);
  for (std::size_t i = 0; i < stats.ns.size(); ++i) {
    double m = 0;
    for (const auto& row : acc) m += row[i];
    m /= static_cast<double>(realizations);
    stats.mean[i] = m;
    if (realizations > 1) {
      double ss = 0;
      for (const auto& row : acc) ss += (row[i] - m) * (row[i] - m);
      stats.stdev[i] = std::sqrt(ss / static_cast<double>(realizations - 1));
    }
  }
  return stats;
}

inline std::string topn_csv(const TopNStats& stats) {
  std::string out = "n,topn_percent,std_percent\n";
  for (std::size_t i = 0; i < stats.ns.size(); ++i) {
    out += std::to_string(stats.ns[i]) + "," + format_sig6(stats.mean[i]) + "," +
           format_sig6(stats.stdev[i]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification: kNN, class prototypes, linear SVM, cross-validation.

// Majority vote over the k best-scoring items. Score ties break by ascending
// item index; vote ties by the best-scoring item whose label is tied.
// knn_classify wrappers below compute the scores for the common cases.
inline std::string knn_vote(const std::vector<double>& scores,
                            const std::vector<std::string>& labels, std::size_t k) {
  if (scores.size() != labels.size()) throw std::invalid_argument("knn: size mismatch");
  if (scores.empty()) throw std::invalid_argument("knn: empty training set");
  if (k == 0 || k > scores.size()) throw std::invalid_argument("knn: bad k");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0u);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
                    });
  std::map<std::string, std::size_t> votes;
  for (std::size_t i = 0; i < k; ++i) ++votes[labels[order[i]]];
  std::size_t best_count = 0;
  for (const auto& [_, c] : votes) best_count = std::max(best_count, c);
  for (std::size_t i = 0; i < k; ++i) {
    if (votes[labels[order[i]]] == best_count) return labels[order[i]];
  }
  return labels[order[0]];  // unreachable
}

inline std::string knn_classify(const std::vector<SparseHV>& train,
                                const std::vector<std::string>& labels, const SparseHV& query,
                                std::size_t k, SimType type = SimType::cosine) {
  if (train.size() != labels.size()) throw std::invalid_argument("knn: size mismatch");
  std::vector<double> scores(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) scores[i] = sim(query, train[i], type);
  return knn_vote(scores, labels, k);
}

inline std::string knn_classify(const std::vector<std::u32string>& train,
                                const std::vector<std::string>& labels,
                                const std::u32string& query, std::uint32_t sym_radius,
                                std::size_t k, SimType type = SimType::cosine) {
  if (train.size() != labels.size()) throw std::invalid_argument("knn: size mismatch");
  std::vector<double> scores(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    scores[i] = sim_sym({query, 0}, {train[i], 0}, sym_radius, type);
  }
  return knn_vote(scores, labels, k);
}

// Integer class prototypes: component-wise sums of the training hypervectors.
struct ClassPrototypes {
  std::uint32_t dim = 0;
  std::vector<std::string> labels;                  // ascending
  std::vector<std::vector<std::uint32_t>> counts;   // dense, per label
  std::vector<double> norms;                        // sqrt(sum counts^2)
};

inline ClassPrototypes build_prototypes(const std::vector<SparseHV>& hvs,
                                        const std::vector<std::string>& labels) {
  if (hvs.empty() || hvs.size() != labels.size()) {
    throw std::invalid_argument("prototypes: bad training set");
  }
  ClassPrototypes p;
  p.dim = hvs[0].dim;
  p.labels.assign(labels.begin(), labels.end());
  std::sort(p.labels.begin(), p.labels.end());
  p.labels.erase(std::unique(p.labels.begin(), p.labels.end()), p.labels.end());
  p.counts.assign(p.labels.size(), std::vector<std::uint32_t>(p.dim, 0));
  std::unordered_map<std::string, std::size_t> at;
  for (std::size_t c = 0; c < p.labels.size(); ++c) at[p.labels[c]] = c;
  for (std::size_t i = 0; i < hvs.size(); ++i) {
    if (hvs[i].dim != p.dim) throw std::invalid_argument("prototypes: dimension mismatch");
    auto& vec = p.counts[at[labels[i]]];
    for (auto idx : hvs[i].active) ++vec[idx];
  }
  p.norms.resize(p.labels.size());
  for (std::size_t c = 0; c < p.labels.size(); ++c) {
    double ss = 0;
    for (auto v : p.counts[c]) ss += static_cast<double>(v) * v;
    p.norms[c] = std::sqrt(ss);
  }
  return p;
}

// Cosine between the integer prototype and the binary query; argmax label,
// ties toward the earlier label.
inline std::string prototype_classify(const ClassPrototypes& p, const SparseHV& query) {
  if (query.dim != p.dim) throw std::invalid_argument("prototypes: dimension mismatch");
  const double qn = std::sqrt(static_cast<double>(query.cardinality()));
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t c = 0; c < p.labels.size(); ++c) {
    std::uint64_t dot = 0;
    for (auto idx : query.active) dot += p.counts[c][idx];
    const double denom = p.norms[c] * qn;
    const double score = denom == 0.0 ? 0.0 : static_cast<double>(dot) / denom;
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return p.labels[best];
}

// One-vs-rest linear SVM trained by Pegasos-style hinge-loss SGD over sparse
// binary inputs. lambda = 1/(C n); step 1/(lambda (t+1)); the bias rides as a
// regularized always-on feature. Deterministic given the seed.
struct LinearModel {
  std::uint32_t dim = 0;
  std::vector<std::string> labels;            // ascending
  std::vector<std::vector<double>> weights;   // per label, size dim
  std::vector<double> bias;
  double c = 100.0;
  std::uint32_t epochs = 20;
  std::uint64_t seed = 0;
};

inline LinearModel train_linear(const std::vector<SparseHV>& hvs,
                                const std::vector<std::string>& labels, double c,
                                std::uint32_t epochs, std::uint64_t seed) {
  if (hvs.empty() || hvs.size() != labels.size()) {
    throw std::invalid_argument("svm: bad training set");
  }
  if (c <= 0) throw std::invalid_argument("svm: C must be positive");
  LinearModel model;
  model.dim = hvs[0].dim;
  model.labels.assign(labels.begin(), labels.end());
  std::sort(model.labels.begin(), model.labels.end());
  model.labels.erase(std::unique(model.labels.begin(), model.labels.end()),
                     model.labels.end());
  if (model.labels.size() < 2) throw std::invalid_argument("svm: need at least two classes");
  model.c = c;
  model.epochs = epochs;
  model.seed = seed;

  const std::size_t n = hvs.size();
  const double lambda = 1.0 / (c * static_cast<double>(n));
  model.weights.assign(model.labels.size(), {});
  model.bias.assign(model.labels.size(), 0.0);

  for (std::size_t cls = 0; cls < model.labels.size(); ++cls) {
    std::vector<double> w(model.dim, 0.0);
    double b = 0.0, scale = 1.0;
    SplitMix64 rng(mix_seed(seed, kSvmStream, cls));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::uint64_t t = 0;
    for (std::uint32_t e = 0; e < epochs; ++e) {
      for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(order[i], order[j]);
      }
      for (std::size_t oi = 0; oi < n; ++oi) {
        const std::size_t i = order[oi];
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t + 1));
        const double y = labels[i] == model.labels[cls] ? 1.0 : -1.0;
        double dot = b;
        for (auto idx : hvs[i].active) dot += w[idx];
        const double margin = y * scale * dot;
        scale *= 1.0 - eta * lambda;  // = t/(t+1), never reaches zero
        if (margin < 1.0) {
          const double step = eta * y / scale;
          for (auto idx : hvs[i].active) w[idx] += step;
          b += step;
        }
      }
    }
    for (auto& v : w) v *= scale;
    model.weights[cls] = std::move(w);
    model.bias[cls] = b * scale;
  }
  return model;
}

inline double linear_score(const LinearModel& m, std::size_t cls, const SparseHV& x) {
  double dot = m.bias[cls];
  for (auto idx : x.active) dot += m.weights[cls][idx];
  return dot;
}

inline std::string linear_predict(const LinearModel& m, const SparseHV& x) {
  if (x.dim != m.dim) throw std::invalid_argument("svm: dimension mismatch");
  std::size_t best = 0;
  double best_score = linear_score(m, 0, x);
  for (std::size_t c = 1; c < m.labels.size(); ++c) {
    const double s = linear_score(m, c, x);
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return m.labels[best];
}

// ---------------------------------------------------------------------------
// Stratified k-fold cross-validation.

struct ClassifierSpec {
  enum class Method : std::uint8_t { hv_knn, hv_proto, hv_svm, sym_knn, lev_knn };
  Method method = Method::sym_knn;
  EncoderConfig cfg{};                      // hv_* methods
  std::uint32_t sym_radius = 1;             // sym_knn
  std::uint32_t k = 1;                      // *_knn
  SimType type = SimType::cosine;
  ShiftSpec shifts = ShiftSpec::radius(0);  // applied to the query side
  double svm_c = 100.0;
  std::uint32_t svm_epochs = 20;
};

struct ClassReport {
  double total_accuracy = 0.0;              // percent, mean over folds
  std::vector<std::string> labels;          // ascending
  std::vector<double> per_class_accuracy;   // percent, mean over folds
  std::vector<std::vector<std::size_t>> confusion;  // [true][pred], pooled
  std::vector<std::uint32_t> fold_of;       // per input item
  std::uint64_t seed = 0;
  std::uint32_t folds = 0;
};

inline ClassReport crossval(const std::vector<LabeledSequence>& data, std::uint32_t folds,
                            std::uint64_t seed, const ClassifierSpec& spec,
                            unsigned threads = 1) {
  if (folds < 2) throw std::invalid_argument("crossval: folds must be >= 2");
  if (data.empty()) throw std::invalid_argument("crossval: empty data");

  ClassReport report;
  report.seed = seed;
  report.folds = folds;
  for (const auto& d : data) report.labels.push_back(d.label);
  std::sort(report.labels.begin(), report.labels.end());
  report.labels.erase(std::unique(report.labels.begin(), report.labels.end()),
                      report.labels.end());
  std::unordered_map<std::string, std::size_t> label_at;
  for (std::size_t c = 0; c < report.labels.size(); ++c) label_at[report.labels[c]] = c;

  // Seeded stratified assignment: shuffle each class's index list (classes in
  // label order), deal round-robin. Depends only on (seed, data order, folds).
  report.fold_of.assign(data.size(), 0);
  SplitMix64 rng(mix_seed(seed, kFoldStream));
  for (const auto& label : report.labels) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i].label == label) members.push_back(i);
    }
    if (members.size() < folds) {
      throw std::invalid_argument("crossval: class '" + label + "' has fewer members than folds");
    }
    for (std::size_t i = members.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(members[i], members[j]);
    }
    for (std::size_t t = 0; t < members.size(); ++t) {
      report.fold_of[members[t]] = static_cast<std::uint32_t>(t % folds);
    }
  }

  const bool is_knn = spec.method == ClassifierSpec::Method::hv_knn ||
                      spec.method == ClassifierSpec::Method::sym_knn ||
                      spec.method == ClassifierSpec::Method::lev_knn;
  if (is_knn) {
    std::vector<std::size_t> fold_size(folds, 0);
    for (auto f : report.fold_of) ++fold_size[f];
    const std::size_t largest = *std::max_element(fold_size.begin(), fold_size.end());
    if (spec.k == 0 || spec.k > data.size() - largest) {
      throw std::invalid_argument("crossval: k exceeds the smallest training fold");
    }
  }

  const bool uses_hv = spec.method == ClassifierSpec::Method::hv_knn ||
                       spec.method == ClassifierSpec::Method::hv_proto ||
                       spec.method == ClassifierSpec::Method::hv_svm;
  std::unique_ptr<SequenceEncoder> enc;
  std::vector<SparseHV> hvs;
  std::vector<DenseMask> masks;  // hv_knn single-shift scan
  if (uses_hv) {
    enc = std::make_unique<SequenceEncoder>(spec.cfg);
    hvs.resize(data.size());
    parallel_for(data.size(), threads,
                 [&](std::size_t i) { hvs[i] = enc->encode_string(data[i].sequence, 0); });
    if (spec.method == ClassifierSpec::Method::hv_knn && spec.shifts.size() == 1) {
      masks.reserve(data.size());
      for (const auto& hv : hvs) masks.emplace_back(hv);
    }
  }
  // sym_knn: position indexes and SymOv self-norms once per item.
  std::vector<PositionIndex> pos;
  std::vector<std::int64_t> norms;
  if (spec.method == ClassifierSpec::Method::sym_knn) {
    pos.reserve(data.size());
    norms.assign(data.size(), 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const PositionedString s{data[i].sequence, 0};
      pos.emplace_back(s);
      norms[i] = symov_scaled(s, pos.back(), spec.sym_radius);
    }
  }

  const std::size_t nclasses = report.labels.size();
  report.confusion.assign(nclasses, std::vector<std::size_t>(nclasses, 0));
  std::vector<double> fold_acc(folds, 0.0);
  std::vector<std::vector<double>> class_acc(folds, std::vector<double>(nclasses, 0.0));

  for (std::uint32_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
      (report.fold_of[i] == f ? test_idx : train_idx).push_back(i);
    }
    std::vector<std::string> train_labels;
    train_labels.reserve(train_idx.size());
    for (auto i : train_idx) train_labels.push_back(data[i].label);

    ClassPrototypes protos;
    LinearModel model;
    std::vector<SparseHV> train_hvs;
    if (spec.method == ClassifierSpec::Method::hv_proto ||
        spec.method == ClassifierSpec::Method::hv_svm) {
      train_hvs.reserve(train_idx.size());
      for (auto i : train_idx) train_hvs.push_back(hvs[i]);
      if (spec.method == ClassifierSpec::Method::hv_proto) {
        protos = build_prototypes(train_hvs, train_labels);
      } else {
        model = train_linear(train_hvs, train_labels, spec.svm_c, spec.svm_epochs,
                             mix_seed(seed, f));
      }
    }

    std::vector<std::size_t> predicted(test_idx.size());
    parallel_for(test_idx.size(), threads, [&](std::size_t q) {
      const std::size_t item = test_idx[q];
      std::string label;
      switch (spec.method) {
        case ClassifierSpec::Method::hv_knn: {
          std::vector<double> scores(train_idx.size());
          for (std::size_t j = 0; j < train_idx.size(); ++j) {
            if (spec.shifts.size() == 1) {
              scores[j] = sim_from_counts(overlap(masks[item], masks[train_idx[j]]),
                                          hvs[item].cardinality(),
                                          hvs[train_idx[j]].cardinality(), spec.type);
            } else {
              scores[j] = sim_shiftmax(enc->perm(), hvs[item], hvs[train_idx[j]], spec.shifts,
                                       spec.type)
                              .value;
            }
          }
          label = knn_vote(scores, train_labels, spec.k);
          break;
        }
        case ClassifierSpec::Method::sym_knn: {
          std::vector<double> scores(train_idx.size());
          for (int s : spec.shifts.ordered()) {
            const PositionedString shifted{data[item].sequence, s};
            for (std::size_t j = 0; j < train_idx.size(); ++j) {
              const std::int64_t s_ab =
                  symov_scaled(shifted, pos[train_idx[j]], spec.sym_radius);
              const double v = detail::sym_sim_from_scaled(s_ab, norms[item],
                                                           norms[train_idx[j]], spec.type,
                                                           spec.sym_radius);
              if (s == spec.shifts.ordered().front() || v > scores[j]) scores[j] = v;
            }
          }
          label = knn_vote(scores, train_labels, spec.k);
          break;
        }
        case ClassifierSpec::Method::lev_knn: {
          std::vector<double> scores(train_idx.size());
          for (std::size_t j = 0; j < train_idx.size(); ++j) {
            scores[j] =
                -static_cast<double>(levenshtein(data[item].sequence, data[train_idx[j]].sequence));
          }
          label = knn_vote(scores, train_labels, spec.k);
          break;
        }
        case ClassifierSpec::Method::hv_proto:
          label = prototype_classify(protos, hvs[item]);
          break;
        case ClassifierSpec::Method::hv_svm:
          label = linear_predict(model, hvs[item]);
          break;
      }
      predicted[q] = label_at.at(label);
    });

    std::size_t correct = 0;
    std::vector<std::size_t> class_total(nclasses, 0), class_correct(nclasses, 0);
    for (std::size_t q = 0; q < test_idx.size(); ++q) {
      const std::size_t truth = label_at.at(data[test_idx[q]].label);
      ++report.confusion[truth][predicted[q]];
      ++class_total[truth];
      if (predicted[q] == truth) {
        ++correct;
        ++class_correct[truth];
      }
    }
    fold_acc[f] = 100.0 * static_cast<double>(correct) / static_cast<double>(test_idx.size());
    for (std::size_t c = 0; c < nclasses; ++c) {
      class_acc[f][c] =
          100.0 * static_cast<double>(class_correct[c]) / static_cast<double>(class_total[c]);
    }
  }

  report.total_accuracy =
      std::accumulate(fold_acc.begin(), fold_acc.end(), 0.0) / static_cast<double>(folds);
  report.per_class_accuracy.assign(nclasses, 0.0);
  for (std::size_t c = 0; c < nclasses; ++c) {
    double s = 0;
    for (std::uint32_t f = 0; f < folds; ++f) s += class_acc[f][c];
    report.per_class_accuracy[c] = s / static_cast<double>(folds);
  }
  return report;
}

inline std::string classify_csv(const ClassReport& r) {
  std::string out = "metric,value\n";
  out += "total," + format_sig6(r.total_accuracy) + "\n";
  for (std::size_t c = 0; c < r.labels.size(); ++c) {
    out += r.labels[c] + "," + format_sig6(r.per_class_accuracy[c]) + "\n";
  }
  for (std::size_t a = 0; a < r.labels.size(); ++a) {
    for (std::size_t b = 0; b < r.labels.size(); ++b) {
      out += "confusion_" + r.labels[a] + "_" + r.labels[b] + "," +
             std::to_string(r.confusion[a][b]) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Similarity-profile sweep: CSV rows (R, shift, sim), computed by shifting
// the encoded hypervector (never re-encoding).

inline std::string emit_profile(const EncoderConfig& base, std::u32string_view a,
                                std::u32string_view b, std::uint32_t r_lo, std::uint32_t r_hi,
                                int shift_lo, int shift_hi, SimType type) {
  if (r_lo == 0 || r_hi < r_lo || shift_hi < shift_lo) {
    throw std::invalid_argument("emit_profile: bad ranges");
  }
  std::string out = "R,shift,sim\n";
  for (std::uint32_t r = r_lo; r <= r_hi; ++r) {
    EncoderConfig cfg = base;
    cfg.radius = r;
    const SequenceEncoder enc(cfg);
    const SparseHV ahv = enc.encode_string(a, 0);
    const SparseHV bhv = enc.encode_string(b, 0);
    for (int s = shift_lo; s <= shift_hi; ++s) {
      const double v = sim(enc.shift(ahv, s), bhv, type);
      out += std::to_string(r) + "," + std::to_string(s) + "," + format_sig6(v) + "\n";
    }
  }
  return out;
}

}  // namespace hvseq
