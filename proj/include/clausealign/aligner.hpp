// Parameter estimation and dynamic-programming clause alignment.
//
// D(i,j) is the best total score for aligning the first i ancient clauses
// with the first j modern clauses; each cell takes the maximum over the six
// transitions (drop either side, 1-1, 1-2, 2-1, 2-2), and the backtrace
// yields a monotone segmentation covering every clause exactly once.
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "clausealign/corpus.hpp"
#include "clausealign/lexicon.hpp"
#include "clausealign/scoring.hpp"
#include "clausealign/segmenter.hpp"

namespace clausealign {

struct AlignedPair {
  std::vector<int> src_indices;  // 0, 1 or 2 adjacent clause indices
  std::vector<int> tgt_indices;
  AlignmentMode mode = AlignmentMode::m1_1;
  ScoreBreakdown score;
  std::string src_text;  // span text, interior delimiters retained
  std::string tgt_text;
};

// A paragraph with clause texts decoded and the modern side segmented,
// ready for repeated span scoring. Merged spans keep the delimiter between
// the clauses they join; the word sequence of a merged modern span is the
// per-clause word sequences with the delimiter inserted between them, so
// externally injected segmentations are honored verbatim.
struct PreparedParagraph {
  std::vector<std::u32string> src_text, tgt_text;    // per clause
  std::vector<std::u32string> src_delim, tgt_delim;  // trailing runs
  std::vector<std::vector<std::u32string>> tgt_words;

  std::size_t src_size() const { return src_text.size(); }
  std::size_t tgt_size() const { return tgt_text.size(); }

  // Span of `arity` clauses starting at 0-based index `first`.
  std::u32string src_span(std::size_t first, int arity) const {
    return make_span(src_text, src_delim, first, arity);
  }
  std::u32string tgt_span(std::size_t first, int arity) const {
    return make_span(tgt_text, tgt_delim, first, arity);
  }
  std::vector<std::u32string> tgt_span_words(std::size_t first, int arity) const {
    std::vector<std::u32string> words = tgt_words[first];
    for (int k = 1; k < arity; ++k) {
      if (!tgt_delim[first + k - 1].empty())
        words.push_back(tgt_delim[first + k - 1]);
      words.insert(words.end(), tgt_words[first + k].begin(),
                   tgt_words[first + k].end());
    }
    return words;
  }

 private:
  static std::u32string make_span(const std::vector<std::u32string>& text,
                                  const std::vector<std::u32string>& delim,
                                  std::size_t first, int arity) {
    std::u32string span = text[first];
    for (int k = 1; k < arity; ++k) {
      span += delim[first + k - 1];
      span += text[first + k];
    }
    return span;
  }
};

namespace detail {

// Distributes pre-segmented tokens over the modern clauses. Tokens covering
// delimiter runs between clauses are dropped (delimiters are re-inserted
// when spans are merged); a token that crosses a text/delimiter boundary is
// an error.
inline std::vector<std::vector<std::u32string>> distribute_presegmented(
    const std::vector<std::string>& tokens, const ClauseSeq& modern) {
  std::vector<std::u32string> toks;
  toks.reserve(tokens.size());
  for (const std::string& t : tokens) toks.push_back(decode_utf8(t));
  std::vector<std::vector<std::u32string>> words(modern.clauses.size());
  std::size_t t = 0;
  for (std::size_t c = 0; c < modern.clauses.size(); ++c) {
    const std::u32string text = decode_utf8(modern.clauses[c].text);
    std::size_t consumed = 0;
    while (consumed < text.size()) {
      if (t >= toks.size())
        throw std::runtime_error("pre-segmented tokens exhausted mid-clause");
      const std::u32string& tok = toks[t];
      if (tok.size() <= text.size() - consumed &&
          text.compare(consumed, tok.size(), tok) == 0) {
        words[c].push_back(tok);
        consumed += tok.size();
        ++t;
      } else {
        throw std::runtime_error(
            "pre-segmented token crosses a clause boundary: " +
            encode_utf8(tok));
      }
    }
    const std::u32string delim = decode_utf8(modern.clauses[c].trailing_delim);
    std::size_t d = 0;
    while (d < delim.size()) {
      if (t >= toks.size())
        throw std::runtime_error("pre-segmented tokens exhausted at delimiter");
      const std::u32string& tok = toks[t];
      if (tok.size() <= delim.size() - d && delim.compare(d, tok.size(), tok) == 0) {
        d += tok.size();
        ++t;
      } else {
        throw std::runtime_error(
            "pre-segmented token crosses a clause boundary: " +
            encode_utf8(tok));
      }
    }
  }
  if (t != toks.size())
    throw std::runtime_error("pre-segmented tokens left over after last clause");
  return words;
}

}  // namespace detail

inline PreparedParagraph prepare_paragraph(const ClauseSeq& src,
                                           const ClauseSeq& tgt,
                                           const Segmenter& segmenter) {
  PreparedParagraph prep;
  for (const Clause& c : src.clauses) {
    prep.src_text.push_back(decode_utf8(c.text));
    prep.src_delim.push_back(decode_utf8(c.trailing_delim));
  }
  for (const Clause& c : tgt.clauses) {
    prep.tgt_text.push_back(decode_utf8(c.text));
    prep.tgt_delim.push_back(decode_utf8(c.trailing_delim));
    std::vector<std::u32string> words;
    for (const std::string& w : segmenter.segment(c.text))
      words.push_back(decode_utf8(w));
    prep.tgt_words.push_back(std::move(words));
  }
  return prep;
}

inline PreparedParagraph prepare_record(const CorpusRecord& rec,
                                        const Segmenter& segmenter,
                                        const DelimiterSet& delims) {
  const ClauseSeq src = split_clauses(rec.ancient, LanguageTag::ancient, delims);
  const ClauseSeq tgt = split_clauses(rec.modern, LanguageTag::modern, delims);
  PreparedParagraph prep = prepare_paragraph(src, tgt, segmenter);
  if (!rec.modern_seg.empty())
    prep.tgt_words = detail::distribute_presegmented(rec.modern_seg, tgt);
  return prep;
}

// Score of the transition ending at cell (i, j) with the given mode; i and j
// count clauses consumed so far (cell indices, 1-based ends).
inline ScoreBreakdown transition_score(const PreparedParagraph& prep,
                                       std::size_t i, std::size_t j,
                                       AlignmentMode mode,
                                       const AlignmentConfig& cfg,
                                       const Lexicon& lexicon,
                                       const IdfTable& idf,
                                       const ScorerOptions& opts = {}) {
  const int sa = src_arity(mode);
  const int ta = tgt_arity(mode);
  if (sa == 0 || ta == 0) return score_drop(mode, cfg, opts);
  const std::size_t s_first = i - static_cast<std::size_t>(sa);
  const std::size_t t_first = j - static_cast<std::size_t>(ta);
  return score_span_pair(prep.src_span(s_first, sa), prep.tgt_span(t_first, ta),
                         prep.tgt_span_words(t_first, ta), mode, cfg, lexicon,
                         idf, opts);
}

// Tie-break order: when two transitions reach the same total, the mode
// earlier in this list wins.
inline constexpr std::array<AlignmentMode, 6> kModePreference = {
    AlignmentMode::m1_1, AlignmentMode::m2_1, AlignmentMode::m1_2,
    AlignmentMode::m2_2, AlignmentMode::m1_0, AlignmentMode::m0_1};

inline std::vector<AlignedPair> align_paragraph(const PreparedParagraph& prep,
                                                const AlignmentConfig& cfg,
                                                const Lexicon& lexicon,
                                                const IdfTable& idf,
                                                const ScorerOptions& opts = {}) {
  cfg.validate();
  const std::size_t m = prep.src_size();
  const std::size_t n = prep.tgt_size();
  if (m == 0 || n == 0)
    throw std::runtime_error("align_paragraph: empty clause sequence");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> score((m + 1) * (n + 1), kNegInf);
  std::vector<signed char> back((m + 1) * (n + 1), -1);
  const auto at = [n](std::size_t i, std::size_t j) { return i * (n + 1) + j; };
  score[at(0, 0)] = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      if (i == 0 && j == 0) continue;
      double best = kNegInf;
      signed char best_mode = -1;
      for (AlignmentMode mode : kModePreference) {
        const std::size_t sa = static_cast<std::size_t>(src_arity(mode));
        const std::size_t ta = static_cast<std::size_t>(tgt_arity(mode));
        if (i < sa || j < ta) continue;
        const double prev = score[at(i - sa, j - ta)];
        if (prev == kNegInf) continue;
        const double total =
            prev +
            transition_score(prep, i, j, mode, cfg, lexicon, idf, opts).combined;
        if (total > best) {
          best = total;
          best_mode = static_cast<signed char>(mode);
        }
      }
      score[at(i, j)] = best;
      back[at(i, j)] = best_mode;
    }
  }
  std::vector<AlignedPair> pairs;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    const signed char bm = back[at(i, j)];
    if (bm < 0) throw std::logic_error("align_paragraph: broken backtrace");
    const AlignmentMode mode = static_cast<AlignmentMode>(bm);
    const std::size_t sa = static_cast<std::size_t>(src_arity(mode));
    const std::size_t ta = static_cast<std::size_t>(tgt_arity(mode));
    AlignedPair pair;
    pair.mode = mode;
    pair.score = transition_score(prep, i, j, mode, cfg, lexicon, idf, opts);
    for (std::size_t k = i - sa; k < i; ++k)
      pair.src_indices.push_back(static_cast<int>(k));
    for (std::size_t k = j - ta; k < j; ++k)
      pair.tgt_indices.push_back(static_cast<int>(k));
    if (sa > 0)
      pair.src_text = encode_utf8(prep.src_span(i - sa, static_cast<int>(sa)));
    if (ta > 0)
      pair.tgt_text = encode_utf8(prep.tgt_span(j - ta, static_cast<int>(ta)));
    pairs.push_back(std::move(pair));
    i -= sa;
    j -= ta;
  }
  std::reverse(pairs.begin(), pairs.end());
  return pairs;
}

inline std::vector<AlignedPair> align_paragraph(const ClauseSeq& src,
                                                const ClauseSeq& tgt,
                                                const AlignmentConfig& cfg,
                                                const Lexicon& lexicon,
                                                const IdfTable& idf,
                                                const Segmenter& segmenter,
                                                const ScorerOptions& opts = {}) {
  return align_paragraph(prepare_paragraph(src, tgt, segmenter), cfg, lexicon,
                         idf, opts);
}

// Total DP score of an alignment, accumulated in path order (matches the
// DP's own summation order exactly).
inline double alignment_total(const std::vector<AlignedPair>& pairs) {
  double total = 0.0;
  for (const AlignedPair& p : pairs) total += p.score.combined;
  return total;
}

// --- parameter estimation --------------------------------------------------

// Sample mean / standard deviation (n-1) of the per-paragraph ratio
// ancient_len / modern_len measured in Unicode scalar values.
inline LengthModel estimate_length_model(const std::vector<CorpusRecord>& records) {
  if (records.size() < 2)
    throw std::runtime_error(
        "estimate_length_model: need at least 2 records, got " +
        std::to_string(records.size()));
  std::vector<double> ratios;
  ratios.reserve(records.size());
  for (const CorpusRecord& rec : records) {
    const std::size_t a = scalar_count(rec.ancient);
    const std::size_t b = scalar_count(rec.modern);
    if (b == 0)
      throw std::runtime_error(
          "estimate_length_model: empty modern paragraph in record " +
          rec.key());
    ratios.push_back(static_cast<double>(a) / static_cast<double>(b));
  }
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double ss = 0.0;
  for (double r : ratios) ss += (r - mean) * (r - mean);
  const double sigma = std::sqrt(ss / static_cast<double>(ratios.size() - 1));
  if (!(sigma > 0.0))
    throw std::runtime_error("estimate_length_model: degenerate sigma");
  return LengthModel{mean, sigma};
}

// Raw count ratios per mode over gold pairs; modes absent from the gold get
// the floor eps so the DP can still propose them.
inline ModeProbs estimate_mode_probs(const std::vector<AlignedPair>& gold,
                                     double eps = 1e-4) {
  if (gold.empty())
    throw std::runtime_error("estimate_mode_probs: empty gold alignment");
  std::array<long, 6> counts{};
  for (const AlignedPair& p : gold)
    ++counts[static_cast<std::size_t>(p.mode)];
  ModeProbs probs;
  for (AlignmentMode m : kAllModes) {
    const long c = counts[static_cast<std::size_t>(m)];
    probs.set(m, c == 0 ? eps
                        : static_cast<double>(c) /
                              static_cast<double>(gold.size()));
  }
  return probs;
}

// --- corpus-level alignment ------------------------------------------------

struct CorpusAlignment {
  std::string article_id;
  std::string paragraph_id;
  std::vector<AlignedPair> pairs;
  std::string error;  // non-empty if this record failed

  bool ok() const { return error.empty(); }
};

struct AlignOptions {
  ScorerOptions scorer;
  DelimiterSet delimiters;
  int jobs = 1;
  // Invoked with the number of completed records every progress_step
  // records; must be thread-safe when jobs > 1.
  std::function<void(std::size_t)> progress;
  std::size_t progress_step = 1000;
};

// Aligns each record independently. Per-record failures are reported in the
// result slot and never abort the rest; output order matches input order
// regardless of the worker count.
inline std::vector<CorpusAlignment> align_corpus(
    const std::vector<CorpusRecord>& records, const AlignmentConfig& cfg,
    const Lexicon& lexicon, const IdfTable& idf, const Segmenter& segmenter,
    const AlignOptions& opts = {}) {
  cfg.validate();
  std::vector<CorpusAlignment> out(records.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  const auto work = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= records.size()) break;
      CorpusAlignment& slot = out[k];
      slot.article_id = records[k].article_id;
      slot.paragraph_id = records[k].paragraph_id;
      try {
        const PreparedParagraph prep =
            prepare_record(records[k], segmenter, opts.delimiters);
        slot.pairs = align_paragraph(prep, cfg, lexicon, idf, opts.scorer);
      } catch (const std::exception& e) {
        slot.error = e.what();
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (opts.progress && d % opts.progress_step == 0) opts.progress(d);
    }
  };
  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || records.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(jobs), records.size()));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return out;
}

}  // namespace clausealign
