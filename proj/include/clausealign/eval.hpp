// Alignment evaluation (precision/recall/F1), corpus BLEU and grid search.
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "clausealign/aligner.hpp"

namespace clausealign {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long n_predicted = 0;
  long n_gold = 0;
  long n_correct = 0;
};

namespace detail {

inline std::string pair_key(const std::string& article,
                            const std::string& paragraph,
                            const AlignedPair& p) {
  std::string key = article;
  key += '\x1F';
  key += paragraph;
  key += '\x1F';
  for (int i : p.src_indices) key += std::to_string(i) + ",";
  key += '\x1F';
  for (int i : p.tgt_indices) key += std::to_string(i) + ",";
  return key;
}

inline bool is_drop_pair(const AlignedPair& p) {
  return p.mode == AlignmentMode::m1_0 || p.mode == AlignmentMode::m0_1;
}

}  // namespace detail

// A predicted pair is correct when some gold pair in the same paragraph has
// exactly the same source and target index sets. Drop pairs count as
// predictions by default; include_drops=false removes them from both sides.
inline PRF alignment_prf(const std::vector<CorpusAlignment>& predicted,
                         const std::vector<CorpusAlignment>& gold,
                         bool include_drops = true) {
  PRF r;
  std::unordered_map<std::string, long> gold_keys;
  for (const CorpusAlignment& g : gold) {
    for (const AlignedPair& p : g.pairs) {
      if (!include_drops && detail::is_drop_pair(p)) continue;
      ++gold_keys[detail::pair_key(g.article_id, g.paragraph_id, p)];
      ++r.n_gold;
    }
  }
  for (const CorpusAlignment& a : predicted) {
    for (const AlignedPair& p : a.pairs) {
      if (!include_drops && detail::is_drop_pair(p)) continue;
      ++r.n_predicted;
      auto it = gold_keys.find(detail::pair_key(a.article_id, a.paragraph_id, p));
      if (it != gold_keys.end() && it->second > 0) {
        --it->second;
        ++r.n_correct;
      }
    }
  }
  r.precision = r.n_predicted == 0
                    ? 0.0
                    : static_cast<double>(r.n_correct) /
                          static_cast<double>(r.n_predicted);
  r.recall = r.n_gold == 0 ? 0.0
                           : static_cast<double>(r.n_correct) /
                                 static_cast<double>(r.n_gold);
  r.f1 = (r.precision + r.recall) == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

// Cumulative corpus BLEU for n = 1..4 on a 0-100 scale, with the standard
// brevity penalty. Single reference per segment; tokenization is supplied by
// the caller.
struct BleuReport {
  std::array<double, 4> bleu = {0.0, 0.0, 0.0, 0.0};
  std::array<double, 4> precisions = {0.0, 0.0, 0.0, 0.0};
  double brevity_penalty = 1.0;
  long hyp_len = 0;
  long ref_len = 0;
};

inline BleuReport bleu(const std::vector<std::vector<std::string>>& hypotheses,
                       const std::vector<std::vector<std::string>>& references,
                       int max_n = 4) {
  if (hypotheses.size() != references.size())
    throw std::runtime_error("bleu: hypothesis/reference count mismatch: " +
                             std::to_string(hypotheses.size()) + " vs " +
                             std::to_string(references.size()));
  if (hypotheses.empty()) throw std::runtime_error("bleu: empty corpus");
  if (max_n < 1 || max_n > 4) throw std::runtime_error("bleu: max_n must be 1..4");

  BleuReport report;
  std::array<long, 4> matched{};
  std::array<long, 4> total{};
  std::unordered_map<std::string, long> hyp_counts, ref_counts;
  for (std::size_t seg = 0; seg < hypotheses.size(); ++seg) {
    const std::vector<std::string>& hyp = hypotheses[seg];
    const std::vector<std::string>& ref = references[seg];
    report.hyp_len += static_cast<long>(hyp.size());
    report.ref_len += static_cast<long>(ref.size());
    for (int n = 1; n <= max_n; ++n) {
      const auto count_ngrams = [n](const std::vector<std::string>& toks,
                                    std::unordered_map<std::string, long>& out) {
        out.clear();
        if (static_cast<int>(toks.size()) < n) return;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i) {
          std::string gram;
          for (int k = 0; k < n; ++k) {
            gram += toks[i + static_cast<std::size_t>(k)];
            gram += '\x1F';
          }
          ++out[gram];
        }
      };
      count_ngrams(hyp, hyp_counts);
      count_ngrams(ref, ref_counts);
      for (const auto& [gram, count] : hyp_counts) {
        total[static_cast<std::size_t>(n - 1)] += count;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end())
          matched[static_cast<std::size_t>(n - 1)] += std::min(count, it->second);
      }
    }
  }
  report.brevity_penalty =
      report.hyp_len >= report.ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(report.ref_len) /
                               static_cast<double>(std::max<long>(1, report.hyp_len)));
  for (int n = 1; n <= max_n; ++n) {
    const std::size_t k = static_cast<std::size_t>(n - 1);
    report.precisions[k] =
        total[k] == 0 ? 0.0
                      : static_cast<double>(matched[k]) /
                            static_cast<double>(total[k]);
  }
  for (int n = 1; n <= max_n; ++n) {
    double log_sum = 0.0;
    bool zero = false;
    for (int j = 0; j < n; ++j) {
      const double p = report.precisions[static_cast<std::size_t>(j)];
      if (p <= 0.0) {
        zero = true;
        break;
      }
      log_sum += std::log(p);
    }
    report.bleu[static_cast<std::size_t>(n - 1)] =
        zero ? 0.0
             : 100.0 * report.brevity_penalty *
                   std::exp(log_sum / static_cast<double>(n));
  }
  return report;
}

// --- grid search -----------------------------------------------------------

struct GridPoint {
  double beta = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  PRF prf;
  bool failed = false;
  std::string error;
};

struct GridSearchResult {
  AlignmentConfig best_config;
  PRF best_prf;
  std::vector<GridPoint> table;  // in (beta, gamma, lambda) lexicographic order
};

// Aligns the dev corpus at every (beta, gamma, lambda) grid point with the
// length model and mode priors taken from `base`, and returns the F1 argmax
// (ties resolved toward the lexicographically smallest point). A point whose
// alignment run throws is recorded as failed and the search continues.
inline GridSearchResult grid_search(const std::vector<CorpusRecord>& dev_records,
                                    const std::vector<CorpusAlignment>& gold,
                                    const std::vector<double>& betas,
                                    const std::vector<double>& gammas,
                                    const std::vector<double>& lambdas,
                                    const AlignmentConfig& base,
                                    const Lexicon& lexicon, const IdfTable& idf,
                                    const Segmenter& segmenter,
                                    const AlignOptions& align_opts = {},
                                    bool include_drops = true) {
  if (betas.empty() || gammas.empty() || lambdas.empty())
    throw std::runtime_error("grid_search: empty grid");
  GridSearchResult result;
  for (double b : betas)
    for (double g : gammas)
      for (double l : lambdas)
        result.table.push_back(GridPoint{b, g, l, PRF{}, false, ""});

  std::atomic<std::size_t> next{0};
  const auto work = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= result.table.size()) break;
      GridPoint& point = result.table[k];
      try {
        AlignmentConfig cfg = base;
        cfg.beta = point.beta;
        cfg.gamma = point.gamma;
        cfg.lambda = point.lambda;
        AlignOptions opts = align_opts;
        opts.jobs = 1;
        opts.progress = nullptr;
        const std::vector<CorpusAlignment> predicted =
            align_corpus(dev_records, cfg, lexicon, idf, segmenter, opts);
        for (const CorpusAlignment& a : predicted)
          if (!a.ok())
            throw std::runtime_error("record " + a.article_id + "/" +
                                     a.paragraph_id + ": " + a.error);
        point.prf = alignment_prf(predicted, gold, include_drops);
      } catch (const std::exception& e) {
        point.failed = true;
        point.error = e.what();
      }
    }
  };
  const int jobs = std::max(1, align_opts.jobs);
  if (jobs == 1 || result.table.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), result.table.size());
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  bool found = false;
  for (const GridPoint& point : result.table) {
    if (point.failed) continue;
    if (!found || point.prf.f1 > result.best_prf.f1) {
      found = true;
      result.best_prf = point.prf;
      result.best_config = base;
      result.best_config.beta = point.beta;
      result.best_config.gamma = point.gamma;
      result.best_config.lambda = point.lambda;
    }
  }
  if (!found) throw std::runtime_error("grid_search: every grid point failed");
  return result;
}

}  // namespace clausealign
