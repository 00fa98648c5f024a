// Modern-Chinese word segmentation behind a pluggable interface.
//
// The alignment algorithm only consumes word sequences, so any external
// segmenter can be injected (see CorpusRecord::modern_seg for bit-exact
// pre-segmented input). The built-in default is forward maximum matching
// over a user-supplied wordlist with a single-character fallback, which
// keeps runs deterministic and self-contained.
#pragma once

#include <algorithm>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "clausealign/unicode.hpp"

namespace clausealign {

// Ordered words whose concatenation equals the segmented clause text.
using WordSeq = std::vector<std::string>;

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual WordSeq segment(std::string_view clause_text) const = 0;
};

// Forward maximum matching: at each position take the longest wordlist word
// starting there, else emit a single character. Total by construction.
class MaxMatchSegmenter final : public Segmenter {
 public:
  MaxMatchSegmenter() = default;
  explicit MaxMatchSegmenter(const std::vector<std::string>& wordlist) {
    for (const std::string& w : wordlist) {
      std::u32string cps = decode_utf8(w);
      if (cps.empty()) continue;
      max_len_ = std::max(max_len_, cps.size());
      words_.insert(std::move(cps));
    }
  }

  WordSeq segment(std::string_view clause_text) const override {
    if (clause_text.empty())
      throw std::runtime_error("segment: empty clause text");
    const std::u32string cps = decode_utf8(clause_text);
    WordSeq out;
    std::size_t i = 0;
    while (i < cps.size()) {
      std::size_t take = 1;
      const std::size_t limit = std::min(max_len_, cps.size() - i);
      for (std::size_t len = limit; len >= 2; --len) {
        if (words_.count(cps.substr(i, len)) != 0) {
          take = len;
          break;
        }
      }
      out.push_back(encode_utf8(std::u32string_view(cps).substr(i, take)));
      i += take;
    }
    return out;
  }

  bool contains(std::string_view word) const {
    return words_.count(decode_utf8(word)) != 0;
  }

 private:
  std::unordered_set<std::u32string> words_;
  std::size_t max_len_ = 0;
};

// Wordlist file: UTF-8, one word per line.
inline std::vector<std::string> load_wordlist(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open wordlist file: " + path);
  std::vector<std::string> words;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      detail::strip_bom(line);
      first = false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

}  // namespace clausealign
