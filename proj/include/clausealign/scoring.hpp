// Clause-pair scoring: the three factor scores and their interpolation.
//
// A candidate pair (s, t) of ancient/modern clause spans is scored as
//
//   d(s, t) = L(s, t) + gamma * S(s, t) + lambda * E(s, t)
//
// where L is lexical matching coverage of the ancient span (exact matching
// against segmented modern words, with an IDF-weighted dictionary backoff
// for unmatched characters), S is a length-ratio normal density times an
// alignment-mode prior, and E is a normalized edit-distance similarity.
// An LCS similarity is available as a drop-in baseline scorer.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clausealign/lexicon.hpp"
#include "clausealign/segmenter.hpp"
#include "clausealign/unicode.hpp"

namespace clausealign {

// The six supported alignment modes: n source clauses paired with m target
// clauses. 1-0 / 0-1 drop a clause on one side.
enum class AlignmentMode { m1_0, m0_1, m1_1, m1_2, m2_1, m2_2 };

inline constexpr std::array<AlignmentMode, 6> kAllModes = {
    AlignmentMode::m1_0, AlignmentMode::m0_1, AlignmentMode::m1_1,
    AlignmentMode::m1_2, AlignmentMode::m2_1, AlignmentMode::m2_2};

constexpr int src_arity(AlignmentMode m) {
  switch (m) {
    case AlignmentMode::m1_0:
    case AlignmentMode::m1_1:
    case AlignmentMode::m1_2:
      return 1;
    case AlignmentMode::m0_1:
      return 0;
    case AlignmentMode::m2_1:
    case AlignmentMode::m2_2:
      return 2;
  }
  return 0;
}

constexpr int tgt_arity(AlignmentMode m) {
  switch (m) {
    case AlignmentMode::m0_1:
    case AlignmentMode::m1_1:
    case AlignmentMode::m2_1:
      return 1;
    case AlignmentMode::m1_0:
      return 0;
    case AlignmentMode::m1_2:
    case AlignmentMode::m2_2:
      return 2;
  }
  return 0;
}

inline const char* mode_name(AlignmentMode m) {
  switch (m) {
    case AlignmentMode::m1_0: return "1-0";
    case AlignmentMode::m0_1: return "0-1";
    case AlignmentMode::m1_1: return "1-1";
    case AlignmentMode::m1_2: return "1-2";
    case AlignmentMode::m2_1: return "2-1";
    case AlignmentMode::m2_2: return "2-2";
  }
  return "?";
}

inline AlignmentMode parse_mode(std::string_view name) {
  for (AlignmentMode m : kAllModes)
    if (name == mode_name(m)) return m;
  throw std::runtime_error("unknown alignment mode: " + std::string(name));
}

// Normal model of the ancient-to-modern character-length ratio.
struct LengthModel {
  double mu = 0.6;
  double sigma = 0.2;
};

// Prior probability per alignment mode. Slots start out unestimated;
// scoring a mode that was never estimated or loaded is an error.
class ModeProbs {
 public:
  ModeProbs() { probs_.fill(std::numeric_limits<double>::quiet_NaN()); }

  bool has(AlignmentMode m) const {
    return !std::isnan(probs_[static_cast<std::size_t>(m)]);
  }
  double get(AlignmentMode m) const {
    const double p = probs_[static_cast<std::size_t>(m)];
    if (std::isnan(p))
      throw std::runtime_error(std::string("unestimated mode: ") +
                               mode_name(m));
    return p;
  }
  void set(AlignmentMode m, double p) {
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument(std::string("mode probability out of [0,1] for ") +
                                  mode_name(m));
    probs_[static_cast<std::size_t>(m)] = p;
  }
  bool complete() const {
    for (AlignmentMode m : kAllModes)
      if (!has(m)) return false;
    return true;
  }

  // Priors used by the CLI when nothing was estimated: mostly 1-1, small
  // mass on merges, drops rare.
  static ModeProbs defaults() {
    ModeProbs p;
    p.set(AlignmentMode::m1_1, 0.90);
    p.set(AlignmentMode::m1_2, 0.03);
    p.set(AlignmentMode::m2_1, 0.03);
    p.set(AlignmentMode::m2_2, 0.02);
    p.set(AlignmentMode::m1_0, 0.01);
    p.set(AlignmentMode::m0_1, 0.01);
    return p;
  }

 private:
  std::array<double, 6> probs_;
};

struct AlignmentConfig {
  double beta = 5.0;     // dictionary-score normalizer
  double gamma = 0.05;   // weight of the statistical score
  double lambda = 0.05;  // weight of the edit-distance score
  LengthModel length;
  ModeProbs mode_probs;

  void validate() const {
    if (!(beta > 0.0)) throw std::runtime_error("config: beta must be > 0");
    if (gamma < 0.0) throw std::runtime_error("config: gamma must be >= 0");
    if (lambda < 0.0) throw std::runtime_error("config: lambda must be >= 0");
    if (!(length.sigma > 0.0))
      throw std::runtime_error("config: sigma must be > 0");
  }
};

struct ScoreBreakdown {
  double lexical = 0.0;
  double statistical = 0.0;
  double edit = 0.0;
  double combined = 0.0;
};

inline double combine_terms(double lexical, double statistical, double edit,
                            const AlignmentConfig& cfg) {
  return lexical + cfg.gamma * statistical + cfg.lambda * edit;
}

enum class ScorerKind { standard, lcs };

// Ablation switches and scorer selection. Zeroing a factor zeroes the
// corresponding slot of the breakdown, so combined = L + gamma*S + lambda*E
// stays an exact identity under every setting.
struct ScorerOptions {
  bool use_lexical = true;
  bool use_statistical = true;
  bool use_edit = true;
  bool use_dictionary = true;
  ScorerKind scorer = ScorerKind::standard;
};

// --- factor scores -------------------------------------------------------

inline double normal_pdf(double z) {
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

// Lexical matching coverage of the ancient span s against the segmented
// modern span t_words.
//
// Exact pass: scanning s left to right, a character matches the leftmost
// remaining word that contains it, and that word is then removed. Dictionary
// pass: each still-unmatched character looks up its definition; definition
// characters found among the remaining modern characters contribute their
// IDF (each remaining character consumable once per ancient character), the
// sum is scaled by beta and capped at 1. Result is in [0,1].
inline double lexical_score(std::u32string_view s,
                            const std::vector<std::u32string>& t_words,
                            const Lexicon& lexicon, const IdfTable& idf,
                            double beta, bool use_dictionary = true) {
  if (s.empty()) throw std::invalid_argument("lexical_score: empty ancient span");
  if (!(beta > 0.0)) throw std::invalid_argument("lexical_score: beta must be > 0");
  std::vector<char> used(t_words.size(), 0);
  std::size_t exact = 0;
  std::u32string unmatched;
  for (char32_t c : s) {
    bool hit = false;
    for (std::size_t w = 0; w < t_words.size(); ++w) {
      if (used[w]) continue;
      if (t_words[w].find(c) != std::u32string::npos) {
        used[w] = 1;
        ++exact;
        hit = true;
        break;
      }
    }
    if (!hit) unmatched.push_back(c);
  }
  // The two terms are accumulated separately and added once, keeping the
  // arithmetic identical to the straight-line formulation.
  double dict = 0.0;
  if (use_dictionary && !unmatched.empty()) {
    std::unordered_map<char32_t, int> remaining;
    for (std::size_t w = 0; w < t_words.size(); ++w) {
      if (used[w]) continue;
      for (char32_t c : t_words[w]) ++remaining[c];
    }
    for (char32_t c : unmatched) {
      const std::u32string* def = lexicon.definition(c);
      if (!def || remaining.empty()) continue;
      std::unordered_map<char32_t, int> avail = remaining;
      double sum = 0.0;
      for (char32_t d : *def) {
        auto it = avail.find(d);
        if (it != avail.end() && it->second > 0) {
          --it->second;
          sum += idf.value(d);
        }
      }
      dict += std::min(1.0, beta * sum);
    }
  }
  return (static_cast<double>(exact) + dict) / static_cast<double>(s.size());
}

inline double lexical_score(std::string_view s, const WordSeq& t_words,
                            const Lexicon& lexicon, const IdfTable& idf,
                            double beta, bool use_dictionary = true) {
  std::vector<std::u32string> words;
  words.reserve(t_words.size());
  for (const std::string& w : t_words) words.push_back(decode_utf8(w));
  return lexical_score(decode_utf8(s), words, lexicon, idf, beta,
                       use_dictionary);
}

// Length-ratio density times the mode prior. Spans must be non-empty; drop
// modes are handled by the combined scorer, not here.
inline double statistical_score(std::size_t s_len, std::size_t t_len,
                                AlignmentMode mode,
                                const AlignmentConfig& cfg) {
  if (s_len == 0 || t_len == 0)
    throw std::invalid_argument("statistical_score: zero-length span");
  const double pr = cfg.mode_probs.get(mode);
  const double ratio = static_cast<double>(s_len) / static_cast<double>(t_len);
  return normal_pdf((ratio - cfg.length.mu) / cfg.length.sigma) * pr;
}

// Unit-cost edit distance over Unicode scalar values; two-row DP.
inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t prev = row[0];
    row[0] = i + 1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t cur = row[j + 1];
      if (a[i] == b[j])
        row[j + 1] = prev;
      else
        row[j + 1] = 1 + std::min({prev, cur, row[j]});
      prev = cur;
    }
  }
  return row[b.size()];
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(decode_utf8(a), decode_utf8(b));
}

// E(s,t) = 1 - EditDis(s,t)/max(|s|,|t|); undefined for two empty strings.
inline double edit_score(std::u32string_view s, std::u32string_view t) {
  const std::size_t denom = std::max(s.size(), t.size());
  if (denom == 0)
    throw std::invalid_argument("edit_score: both strings empty");
  return 1.0 - static_cast<double>(levenshtein(s, t)) /
                   static_cast<double>(denom);
}

inline double edit_score(std::string_view s, std::string_view t) {
  return edit_score(decode_utf8(s), decode_utf8(t));
}

// Longest-common-subsequence similarity, normalized by the longer span.
// Used as the baseline scorer in place of d(s,t).
inline double lcs_score(std::u32string_view s, std::u32string_view t) {
  const std::size_t denom = std::max(s.size(), t.size());
  if (denom == 0) throw std::invalid_argument("lcs_score: both strings empty");
  if (s.empty() || t.empty()) return 0.0;
  std::vector<std::size_t> row(t.size() + 1, 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t prev = 0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      const std::size_t cur = row[j + 1];
      if (s[i] == t[j])
        row[j + 1] = prev + 1;
      else
        row[j + 1] = std::max(cur, row[j]);
      prev = cur;
    }
  }
  return static_cast<double>(row[t.size()]) / static_cast<double>(denom);
}

inline double lcs_score(std::string_view s, std::string_view t) {
  return lcs_score(decode_utf8(s), decode_utf8(t));
}

// --- combined scoring ----------------------------------------------------

// Score of a drop transition: L = E = 0 and S = Pr(mode), so dropping
// competes on the mode prior alone.
inline ScoreBreakdown score_drop(AlignmentMode mode, const AlignmentConfig& cfg,
                                 const ScorerOptions& opts = {}) {
  if (mode != AlignmentMode::m1_0 && mode != AlignmentMode::m0_1)
    throw std::invalid_argument("score_drop: not a drop mode");
  ScoreBreakdown b;
  // The LCS baseline keeps the drop prior so the DP retains finite drop
  // transitions; ablations only apply to the standard scorer.
  if (opts.scorer == ScorerKind::lcs || opts.use_statistical)
    b.statistical = cfg.mode_probs.get(mode);
  b.combined = combine_terms(b.lexical, b.statistical, b.edit, cfg);
  return b;
}

// Core scorer over pre-decoded spans. Target words must concatenate to the
// target span text.
inline ScoreBreakdown score_span_pair(std::u32string_view src_text,
                                      std::u32string_view tgt_text,
                                      const std::vector<std::u32string>& tgt_words,
                                      AlignmentMode mode,
                                      const AlignmentConfig& cfg,
                                      const Lexicon& lexicon,
                                      const IdfTable& idf,
                                      const ScorerOptions& opts = {}) {
  ScoreBreakdown b;
  if (opts.scorer == ScorerKind::lcs) {
    b.lexical = lcs_score(src_text, tgt_text);
  } else {
    if (opts.use_lexical)
      b.lexical = lexical_score(src_text, tgt_words, lexicon, idf, cfg.beta,
                                opts.use_dictionary);
    if (opts.use_statistical)
      b.statistical = statistical_score(src_text.size(), tgt_text.size(), mode, cfg);
    if (opts.use_edit) b.edit = edit_score(src_text, tgt_text);
  }
  b.combined = combine_terms(b.lexical, b.statistical, b.edit, cfg);
  return b;
}

// Spec-level entry point over UTF-8 spans. A span is NULL exactly when the
// mode drops that side; the modern span is segmented as a whole here.
inline ScoreBreakdown combined_score(const std::optional<std::string>& src_span,
                                     const std::optional<std::string>& tgt_span,
                                     AlignmentMode mode,
                                     const AlignmentConfig& cfg,
                                     const Lexicon& lexicon,
                                     const IdfTable& idf,
                                     const Segmenter& segmenter,
                                     const ScorerOptions& opts = {}) {
  if (!src_span && !tgt_span)
    throw std::invalid_argument("combined_score: both spans NULL");
  const bool src_null = mode == AlignmentMode::m0_1;
  const bool tgt_null = mode == AlignmentMode::m1_0;
  if (src_span.has_value() == src_null || tgt_span.has_value() == tgt_null)
    throw std::invalid_argument(
        std::string("combined_score: span nullness inconsistent with mode ") +
        mode_name(mode));
  if (src_null || tgt_null) return score_drop(mode, cfg, opts);
  std::vector<std::u32string> words;
  for (const std::string& w : segmenter.segment(*tgt_span))
    words.push_back(decode_utf8(w));
  return score_span_pair(decode_utf8(*src_span), decode_utf8(*tgt_span), words,
                         mode, cfg, lexicon, idf, opts);
}

}  // namespace clausealign
