// hvseq: sequence hypervector encoding, similarity, and experiment drivers.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hvseq/hvseq.hpp"

namespace {

struct Range {
  int lo = 0;
  int hi = 0;
};

// "3" -> [3,3]; "1..12" -> [1,12].
Range parse_range(const std::string& text) {
  const auto dots = text.find("..");
  Range r;
  if (dots == std::string::npos) {
    r.lo = r.hi = std::stoi(text);
  } else {
    r.lo = std::stoi(text.substr(0, dots));
    r.hi = std::stoi(text.substr(dots + 2));
  }
  if (r.hi < r.lo) throw CLI::ValidationError("range upper bound below lower bound: " + text);
  return r;
}

hvseq::SimType parse_sim_type(const std::string& name) {
  if (name == "cos") return hvseq::SimType::cosine;
  if (name == "jac") return hvseq::SimType::jaccard;
  if (name == "simp") return hvseq::SimType::simpson;
  if (name == "overlap") return hvseq::SimType::overlap;
  throw CLI::ValidationError("unknown similarity type: " + name);
}

hvseq::MissFormat parse_miss_format(const std::string& name) {
  if (name == "tab") return hvseq::MissFormat::tab_pairs;
  if (name == "dollar") return hvseq::MissFormat::dollar_groups;
  return hvseq::MissFormat::autodetect;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw hvseq::io_error("cannot write " + path);
  out << content;
}

unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

int run_encode(const std::string& dict_path, std::uint32_t D, std::uint32_t m, std::uint32_t R,
               std::uint64_t seed, const std::string& out_path, unsigned threads) {
  const auto words = hvseq::load_dictionary(dict_path);
  hvseq::EncoderConfig cfg;
  cfg.dim = D;
  cfg.ones = m;
  cfg.radius = R;
  cfg.seed = seed;
  cfg.validate();
  const hvseq::SequenceEncoder enc(cfg);
  hvseq::DictionaryIndex index;
  index.config = cfg;
  index.words = words;
  index.hvs.resize(words.size());
  hvseq::parallel_for(words.size(), threads,
                      [&](std::size_t w) { index.hvs[w] = enc.encode_string(words[w], 0); });
  hvseq::save_index(out_path, index);
  std::printf("encoded %zu words (D=%u m=%u R=%u seed=%llu) -> %s\n", words.size(), D, m, R,
              static_cast<unsigned long long>(seed), out_path.c_str());
  return 0;
}

int run_spellcheck(const std::string& index_path, const std::string& tests_path,
                   const std::string& format, const std::string& sim_name, int shifts,
                   const std::string& topn_csv_arg, std::size_t realizations,
                   const std::string& csv_path, bool swap_columns, unsigned threads) {
  const auto index = hvseq::load_index(index_path);
  const auto tests = hvseq::load_misspellings(tests_path, parse_miss_format(format), swap_columns);
  if (tests.malformed > 0) {
    std::fprintf(stderr, "warning: skipped %zu malformed lines in %s\n", tests.malformed,
                 tests_path.c_str());
  }
  std::vector<int> ns;
  std::stringstream ss(topn_csv_arg);
  for (std::string field; std::getline(ss, field, ',');) ns.push_back(std::stoi(field));

  hvseq::ScorerSpec spec;
  spec.kind = hvseq::ScorerKind::hv;
  spec.cfg = index.config;
  spec.type = parse_sim_type(sim_name);
  spec.shifts = hvseq::ShiftSpec::radius(shifts);
  const auto stats =
      hvseq::topn_eval_realizations(index.words, tests.queries, ns, spec, realizations, threads);

  std::printf("queries %zu, realizations %zu\n", stats.query_count, stats.realizations);
  for (std::size_t i = 0; i < stats.ns.size(); ++i) {
    std::printf("Top-%d: %s%%", stats.ns[i], hvseq::format_sig6(stats.mean[i]).c_str());
    if (stats.realizations > 1) {
      std::printf(" (std %s)", hvseq::format_sig6(stats.stdev[i]).c_str());
    }
    std::printf("\n");
  }
  if (!csv_path.empty()) write_file(csv_path, hvseq::topn_csv(stats));
  return 0;
}

int run_classify(const std::string& data_path, const std::string& method, std::uint32_t R,
                 std::uint32_t k, std::uint32_t folds, std::uint64_t seed, std::uint32_t D,
                 std::uint32_t m, double c, const std::string& csv_path, unsigned threads) {
  const auto data = hvseq::load_splice(data_path);
  hvseq::ClassifierSpec spec;
  if (method == "knn") {
    spec.method = hvseq::ClassifierSpec::Method::hv_knn;
  } else if (method == "proto") {
    spec.method = hvseq::ClassifierSpec::Method::hv_proto;
  } else if (method == "svm") {
    spec.method = hvseq::ClassifierSpec::Method::hv_svm;
  } else if (method == "sym-knn") {
    spec.method = hvseq::ClassifierSpec::Method::sym_knn;
  } else if (method == "lev-knn") {
    spec.method = hvseq::ClassifierSpec::Method::lev_knn;
  } else {
    throw CLI::ValidationError("unknown method: " + method);
  }
  spec.cfg.dim = D;
  spec.cfg.ones = m;
  spec.cfg.radius = R;
  spec.cfg.seed = seed;
  spec.sym_radius = R;
  spec.k = k;
  spec.svm_c = c;
  const auto report = hvseq::crossval(data, folds, seed, spec, threads);
  std::printf("records %zu, %u-fold CV, seed %llu\n", data.size(), folds,
              static_cast<unsigned long long>(seed));
  std::printf("total: %s%%\n", hvseq::format_sig6(report.total_accuracy).c_str());
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    std::printf("%s: %s%%\n", report.labels[i].c_str(),
                hvseq::format_sig6(report.per_class_accuracy[i]).c_str());
  }
  if (!csv_path.empty()) write_file(csv_path, hvseq::classify_csv(report));
  return 0;
}

int run_sim(const std::string& a_utf8, const std::string& b_utf8, const std::string& mode,
            std::uint32_t R, int shifts, const std::string& type_name, std::uint32_t D,
            std::uint32_t m, std::uint64_t seed) {
  const auto a = hvseq::decode_utf8(a_utf8);
  const auto b = hvseq::decode_utf8(b_utf8);
  const auto type = parse_sim_type(type_name);
  if (mode == "hv") {
    hvseq::EncoderConfig cfg;
    cfg.dim = D;
    cfg.ones = m;
    cfg.radius = R;
    cfg.seed = seed;
    const hvseq::SequenceEncoder enc(cfg);
    const auto r = hvseq::sim_shiftmax(enc.perm(), enc.encode_string(a, 0),
                                       enc.encode_string(b, 0),
                                       hvseq::ShiftSpec::radius(shifts), type);
    std::printf("sim=%s best_shift=%d\n", hvseq::format_sig6(r.value).c_str(), r.best_shift);
  } else if (mode == "sym") {
    const auto r = hvseq::sim_sym_shiftmax({a, 0}, {b, 0}, R, hvseq::ShiftSpec::radius(shifts),
                                           type);
    std::printf("sim=%s best_shift=%d\n", hvseq::format_sig6(r.value).c_str(), r.best_shift);
  } else if (mode == "lev") {
    std::printf("lev=%zu lev_max=%s\n", hvseq::levenshtein(a, b),
                hvseq::format_sig6(hvseq::levenshtein_normalized(a, b)).c_str());
  } else if (mode == "hamming") {
    std::printf("matches=%zu mismatches=%zu shift_distance=%zu\n",
                hvseq::hamming_and_shift(a, b, hvseq::HammingMode::sim_matches),
                hvseq::hamming_and_shift(a, b, hvseq::HammingMode::dist_mismatches),
                hvseq::hamming_and_shift(a, b, hvseq::HammingMode::shift_distance));
  } else {
    throw CLI::ValidationError("unknown mode: " + mode);
  }
  return 0;
}

int run_profile(const std::string& a_utf8, const std::string& b_utf8, const std::string& r_range,
                const std::string& shift_range, const std::string& csv_path,
                const std::string& type_name, std::uint32_t D, std::uint32_t m,
                std::uint64_t seed) {
  const Range rr = parse_range(r_range);
  const Range sr = parse_range(shift_range);
  hvseq::EncoderConfig cfg;
  cfg.dim = D;
  cfg.ones = m;
  cfg.seed = seed;
  const auto csv = hvseq::emit_profile(cfg, hvseq::decode_utf8(a_utf8),
                                       hvseq::decode_utf8(b_utf8),
                                       static_cast<std::uint32_t>(rr.lo),
                                       static_cast<std::uint32_t>(rr.hi), sr.lo, sr.hi,
                                       parse_sim_type(type_name));
  write_file(csv_path, csv);
  std::printf("wrote %s\n", csv_path.c_str());
  return 0;
}

// CSV rows prime,target,time (header optional). Correlation between the
// hypervector similarity of each pair and the recorded time.
int run_corr(const std::string& pairs_path, std::uint32_t R, int shifts,
             const std::string& type_name, std::uint32_t D, std::uint32_t m, std::uint64_t seed,
             std::size_t realizations) {
  std::ifstream in(pairs_path);
  if (!in) throw hvseq::io_error("cannot open " + pairs_path);
  std::vector<std::pair<std::u32string, std::u32string>> pairs;
  std::vector<double> times;
  std::string line;
  while (std::getline(in, line)) {
    if (hvseq::trim(line).empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw hvseq::format_error("expected prime,target,time rows");
    const std::string third{hvseq::trim(std::string_view(line).substr(c2 + 1))};
    char* end = nullptr;
    const double t = std::strtod(third.c_str(), &end);
    if (end == third.c_str() || *end != '\0') continue;  // header or junk row
    pairs.emplace_back(hvseq::decode_utf8(std::string(hvseq::trim(
                           std::string_view(line).substr(0, c1)))),
                       hvseq::decode_utf8(std::string(
                           hvseq::trim(std::string_view(line).substr(c1 + 1, c2 - c1 - 1)))));
    times.push_back(t);
  }
  if (pairs.size() < 2) throw hvseq::format_error("need at least 2 data rows");

  const auto type = parse_sim_type(type_name);
  double mean_r = 0;
  for (std::size_t real = 0; real < realizations; ++real) {
    hvseq::EncoderConfig cfg;
    cfg.dim = D;
    cfg.ones = m;
    cfg.radius = R;
    cfg.seed = seed + real;
    const hvseq::SequenceEncoder enc(cfg);
    std::vector<double> sims;
    sims.reserve(pairs.size());
    for (const auto& [prime, target] : pairs) {
      sims.push_back(hvseq::sim_shiftmax(enc.perm(), enc.encode_string(prime, 0),
                                         enc.encode_string(target, 0),
                                         hvseq::ShiftSpec::radius(shifts), type)
                         .value);
    }
    mean_r += hvseq::pearson(sims, times);
  }
  mean_r /= static_cast<double>(realizations);
  std::printf("corr=%s n=%zu realizations=%zu\n", hvseq::format_sig6(mean_r).c_str(),
              pairs.size(), realizations);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse hypervector sequence encoding and similarity toolkit"};
  app.require_subcommand(1);

  // encode
  auto* encode = app.add_subcommand("encode", "encode a dictionary into a hypervector index");
  std::string dict_path, out_path;
  std::uint32_t D = 10000, m = 11, R = 7;
  std::uint64_t seed = 1;
  unsigned threads = default_threads();
  encode->add_option("--dict", dict_path, "word list, one per line")->required();
  encode->add_option("--D", D, "hypervector dimension");
  encode->add_option("--m", m, "active bits per atomic hypervector");
  encode->add_option("--R", R, "similarity radius");
  encode->add_option("--seed", seed, "master seed");
  encode->add_option("--out", out_path, "output index path")->required();
  encode->add_option("--threads", threads, "worker threads");

  // spellcheck
  auto* spell = app.add_subcommand("spellcheck", "Top-n evaluation against an encoded index");
  std::string index_path, tests_path, format = "auto", sim_name = "cos", topn = "1,3,5,10";
  std::string spell_csv;
  int shifts = 0;
  std::size_t realizations = 1;
  bool swap_columns = false;
  spell->add_option("--index", index_path, "index from 'encode'")->required();
  spell->add_option("--tests", tests_path, "misspelling file")->required();
  spell->add_option("--format", format, "tab|dollar|auto");
  spell->add_option("--sim", sim_name, "cos|jac|simp");
  spell->add_option("--shifts", shifts, "shift radius s, evaluates {-s..s}");
  spell->add_option("--topn", topn, "comma-separated n values");
  spell->add_option("--realizations", realizations, "hypervector realizations (seed+i)");
  spell->add_option("--csv", spell_csv, "write report CSV here");
  spell->add_flag("--swap-columns", swap_columns, "tab files ordered correct<TAB>misspelling");
  spell->add_option("--threads", threads, "worker threads");

  // classify
  auto* classify = app.add_subcommand("classify", "cross-validated sequence classification");
  std::string data_path, method = "sym-knn", class_csv;
  std::uint32_t k = 1, folds = 10, cR = 1, cD = 10000, cm = 11;
  std::uint64_t cseed = 1;
  double svm_c = 100.0;
  classify->add_option("--data", data_path, "labeled sequence file")->required();
  classify->add_option("--method", method, "knn|proto|svm|sym-knn|lev-knn");
  classify->add_option("--R", cR, "similarity radius");
  classify->add_option("--k", k, "neighbors for knn methods");
  classify->add_option("--folds", folds, "cross-validation folds");
  classify->add_option("--seed", cseed, "seed for folds/encoding/SVM");
  classify->add_option("--m", cm, "active bits per atomic hypervector");
  classify->add_option("--D", cD, "hypervector dimension");
  classify->add_option("--C", svm_c, "SVM regularization C");
  classify->add_option("--csv", class_csv, "write report CSV here");
  classify->add_option("--threads", threads, "worker threads");

  // sim
  auto* simc = app.add_subcommand("sim", "similarity of two strings");
  std::string a_str, b_str, mode = "hv", type_name = "cos";
  std::uint32_t sD = 10000, sm = 111, sR = 3;
  std::uint64_t sseed = 1;
  int sim_shifts = 0;
  simc->add_option("--a", a_str, "first string")->required();
  simc->add_option("--b", b_str, "second string")->required();
  simc->add_option("--mode", mode, "hv|sym|lev|hamming");
  simc->add_option("--R", sR, "similarity radius");
  simc->add_option("--shifts", sim_shifts, "shift radius s");
  simc->add_option("--type", type_name, "cos|jac|simp|overlap");
  simc->add_option("--D", sD, "hypervector dimension (hv mode)");
  simc->add_option("--m", sm, "active bits per atom (hv mode)");
  simc->add_option("--seed", sseed, "seed (hv mode)");

  // profile
  auto* profile = app.add_subcommand("profile", "similarity sweep over R and shift ranges");
  std::string pa, pb, pr = "1..8", pshifts = "-5..5", pcsv, ptype = "cos";
  std::uint32_t pD = 10000, p2m = 111;
  std::uint64_t pseed = 1;
  profile->add_option("--a", pa, "first string")->required();
  profile->add_option("--b", pb, "second string")->required();
  profile->add_option("--R", pr, "R range, e.g. 1..12 or 3");
  profile->add_option("--shifts", pshifts, "shift range, e.g. -5..5");
  profile->add_option("--csv", pcsv, "output CSV path")->required();
  profile->add_option("--type", ptype, "cos|jac|simp|overlap");
  profile->add_option("--D", pD, "hypervector dimension");
  profile->add_option("--m", p2m, "active bits per atom");
  profile->add_option("--seed", pseed, "seed");

  // corr
  auto* corr = app.add_subcommand("corr", "Pearson correlation of pair similarities vs times");
  std::string pairs_path, corr_type = "cos";
  std::uint32_t corr_R = 3, corr_D = 10000, corr_m = 111;
  std::uint64_t corr_seed = 1;
  int corr_shifts = 2;
  std::size_t corr_realizations = 1;
  corr->add_option("--pairs", pairs_path, "CSV with prime,target,time rows")->required();
  corr->add_option("--R", corr_R, "similarity radius");
  corr->add_option("--shifts", corr_shifts, "shift radius s");
  corr->add_option("--type", corr_type, "cos|jac|simp");
  corr->add_option("--D", corr_D, "hypervector dimension");
  corr->add_option("--m", corr_m, "active bits per atom");
  corr->add_option("--seed", corr_seed, "seed");
  corr->add_option("--realizations", corr_realizations, "realizations to average over");

  CLI11_PARSE(app, argc, argv);

  try {
    if (encode->parsed()) return run_encode(dict_path, D, m, R, seed, out_path, threads);
    if (spell->parsed()) {
      return run_spellcheck(index_path, tests_path, format, sim_name, shifts, topn, realizations,
                            spell_csv, swap_columns, threads);
    }
    if (classify->parsed()) {
      return run_classify(data_path, method, cR, k, folds, cseed, cD, cm, svm_c, class_csv,
                          threads);
    }
    if (simc->parsed()) {
      return run_sim(a_str, b_str, mode, sR, sim_shifts, type_name, sD, sm, sseed);
    }
    if (profile->parsed()) {
      return run_profile(pa, pb, pr, pshifts, pcsv, ptype, pD, p2m, pseed);
    }
    if (corr->parsed()) {
      return run_corr(pairs_path, corr_R, corr_shifts, corr_type, corr_D, corr_m, corr_seed,
                      corr_realizations);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
