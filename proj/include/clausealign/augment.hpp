// Data augmentation (merging adjacent aligned pairs) and dataset splitting.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "clausealign/aligner.hpp"
#include "clausealign/corpus.hpp"
#include "clausealign/unicode.hpp"

namespace clausealign {

// A contiguous run of aligned clause pairs merged into one sample pair.
// Texts keep every delimiter between the merged clauses, so src_text is a
// byte-substring of the source paragraph.
struct SpanPair {
  std::string src_text;
  std::string tgt_text;
  int clause_pair_count = 1;
  std::string article_id;
  std::string paragraph_id;
  int start = 0;  // first and last pair index of the run, inclusive
  int end = 0;
};

struct AugmentOptions {
  int max_span = 4;          // longest run of pairs to merge
  std::size_t max_len = 50;  // scalar-length filter on the source text
  bool filter_both_sides = false;
};

// Emits every contiguous run of 1..max_span adjacent non-drop pairs, then
// filters runs whose source text exceeds max_len scalars. Drop pairs break
// contiguity: merging across a dropped clause would join unrelated text.
// Output is ordered by run width, then start position.
inline std::vector<SpanPair> augment_paragraph(
    const std::vector<AlignedPair>& pairs, const ClauseSeq& src,
    const ClauseSeq& tgt, const std::string& article_id,
    const std::string& paragraph_id, const AugmentOptions& opts = {}) {
  if (opts.max_span < 1)
    throw std::invalid_argument("augment: max_span must be >= 1");
  const auto is_drop = [](const AlignedPair& p) {
    return p.mode == AlignmentMode::m1_0 || p.mode == AlignmentMode::m0_1;
  };
  // Maximal drop-free runs as [first, last] pair-index ranges.
  std::vector<std::pair<int, int>> runs;
  int run_start = -1;
  for (int k = 0; k < static_cast<int>(pairs.size()); ++k) {
    if (is_drop(pairs[k])) {
      if (run_start >= 0) runs.emplace_back(run_start, k - 1);
      run_start = -1;
    } else if (run_start < 0) {
      run_start = k;
    }
  }
  if (run_start >= 0) runs.emplace_back(run_start, static_cast<int>(pairs.size()) - 1);

  const auto side_text = [](const std::vector<AlignedPair>& ps, int a, int b,
                            const ClauseSeq& seq, bool source) {
    std::string text;
    for (int k = a; k <= b; ++k) {
      const AlignedPair& p = ps[k];
      if (k > a) {
        // Delimiter after the previous pair's last clause on this side.
        const std::vector<int>& prev =
            source ? ps[k - 1].src_indices : ps[k - 1].tgt_indices;
        text += seq.clauses[static_cast<std::size_t>(prev.back())].trailing_delim;
      }
      text += source ? p.src_text : p.tgt_text;
    }
    return text;
  };

  std::vector<SpanPair> out;
  for (int width = 1; width <= opts.max_span; ++width) {
    for (const auto& [a, b] : runs) {
      for (int s = a; s + width - 1 <= b; ++s) {
        const int e = s + width - 1;
        SpanPair span;
        span.src_text = side_text(pairs, s, e, src, true);
        span.tgt_text = side_text(pairs, s, e, tgt, false);
        span.clause_pair_count = width;
        span.article_id = article_id;
        span.paragraph_id = paragraph_id;
        span.start = s;
        span.end = e;
        if (scalar_count(span.src_text) > opts.max_len) continue;
        if (opts.filter_both_sides && scalar_count(span.tgt_text) > opts.max_len)
          continue;
        out.push_back(std::move(span));
      }
    }
  }
  return out;
}

struct SplitOptions {
  std::array<double, 3> ratios = {0.8, 0.1, 0.1};  // train, dev, test
  std::uint64_t seed = 0;
};

struct DatasetSplit {
  std::vector<SpanPair> train, dev, test;
  std::uint64_t split_seed = 0;
};

namespace detail {

// Deterministic Fisher-Yates; std::shuffle's draw sequence is
// implementation-defined, this one is pinned to mt19937_64.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(gen() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace detail

// Shuffles articles with the seeded generator, then assigns each article to
// the split whose paragraph-count deficit against its target share is
// largest (ties prefer train, then dev). Articles never straddle splits.
inline DatasetSplit split_dataset(const std::vector<SpanPair>& spans,
                                  const SplitOptions& opts = {}) {
  for (double r : opts.ratios)
    if (!(r > 0.0))
      throw std::runtime_error("split_dataset: ratios must be positive");
  const double sum = opts.ratios[0] + opts.ratios[1] + opts.ratios[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::runtime_error("split_dataset: ratios must sum to 1");

  // Articles in first-appearance order, with distinct-paragraph counts.
  std::vector<std::string> articles;
  std::unordered_map<std::string, long> paragraphs_of;
  {
    std::unordered_map<std::string, std::unordered_set<std::string>> seen;
    for (const SpanPair& s : spans) {
      auto [it, inserted] = seen.try_emplace(s.article_id);
      if (inserted) articles.push_back(s.article_id);
      it->second.insert(s.paragraph_id);
    }
    for (const auto& [art, paras] : seen)
      paragraphs_of[art] = static_cast<long>(paras.size());
  }
  if (articles.size() < 3)
    throw std::runtime_error("split_dataset: need at least 3 articles, got " +
                             std::to_string(articles.size()));
  detail::seeded_shuffle(articles, opts.seed);

  long total = 0;
  for (const auto& [art, n] : paragraphs_of) total += n;
  std::array<double, 3> assigned = {0.0, 0.0, 0.0};
  std::unordered_map<std::string, int> split_of;
  for (const std::string& art : articles) {
    int best = 0;
    double best_deficit = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      const double deficit =
          opts.ratios[static_cast<std::size_t>(k)] * static_cast<double>(total) -
          assigned[static_cast<std::size_t>(k)];
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = k;
      }
    }
    split_of[art] = best;
    assigned[static_cast<std::size_t>(best)] +=
        static_cast<double>(paragraphs_of[art]);
  }

  DatasetSplit split;
  split.split_seed = opts.seed;
  for (const SpanPair& s : spans) {
    switch (split_of[s.article_id]) {
      case 0: split.train.push_back(s); break;
      case 1: split.dev.push_back(s); break;
      default: split.test.push_back(s); break;
    }
  }
  return split;
}

}  // namespace clausealign
