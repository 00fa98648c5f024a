// Ancient-character dictionary and IDF statistics for dictionary matching.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "clausealign/unicode.hpp"

namespace clausealign {

// Definitions are stored as character sequences with stop words removed.
// Single-character headwords drive dictionary matching; multi-character
// headwords are retained but flagged and never consulted by the scorer.
struct Lexicon {
  std::unordered_map<char32_t, std::u32string> defs;
  std::map<std::string, std::string> multichar_entries;

  const std::u32string* definition(char32_t headword) const {
    auto it = defs.find(headword);
    return it == defs.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return defs.size() + multichar_entries.size(); }
};

namespace detail {

// Removes stop-word substrings (and whitespace) from a character sequence.
// Each pass scans left to right taking the longest stop word at each
// position; passes repeat until a fixed point, which makes removal
// idempotent even when deleting one occurrence exposes another.
inline std::u32string remove_stopwords(std::u32string text,
                                       const std::vector<std::u32string>& stops) {
  std::unordered_map<char32_t, std::vector<const std::u32string*>> by_first;
  std::size_t max_len = 0;
  for (const std::u32string& s : stops) {
    if (s.empty()) continue;
    by_first[s[0]].push_back(&s);
    max_len = std::max(max_len, s.size());
  }
  for (auto& [first, list] : by_first)
    std::sort(list.begin(), list.end(),
              [](const std::u32string* a, const std::u32string* b) {
                return a->size() > b->size();
              });
  while (true) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
      if (is_space_cp(text[i])) {
        ++i;
        continue;
      }
      const std::u32string* hit = nullptr;
      auto it = by_first.find(text[i]);
      if (it != by_first.end()) {
        for (const std::u32string* s : it->second) {
          if (text.compare(i, s->size(), *s) == 0) {
            hit = s;
            break;
          }
        }
      }
      if (hit) {
        i += hit->size();
      } else {
        out.push_back(text[i]);
        ++i;
      }
    }
    if (out == text) return out;
    text = std::move(out);
  }
}

}  // namespace detail

// Stopword file: one token per line, '#'-prefixed comment lines ignored.
inline std::vector<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path);
  std::vector<std::string> stops;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      detail::strip_bom(line);
      first = false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    stops.push_back(line);
  }
  return stops;
}

// Dictionary file: TSV, one "headword\tdefinition" per line. Duplicate
// headwords merge their definitions in order. An entry whose definition is
// empty after stop-word removal is kept (it just matches nothing).
inline Lexicon load_dictionary(const std::string& dict_path,
                               const std::vector<std::string>& stopwords) {
  std::ifstream in(dict_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dictionary file: " + dict_path);
  std::vector<std::u32string> stops;
  stops.reserve(stopwords.size());
  for (const std::string& s : stopwords) stops.push_back(decode_utf8(s));

  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) detail::strip_bom(line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("dictionary line " + std::to_string(line_no) +
                               ": missing TAB separator");
    const std::string head_utf8 = line.substr(0, tab);
    const std::u32string head = decode_utf8(head_utf8);
    if (head.empty())
      throw std::runtime_error("dictionary line " + std::to_string(line_no) +
                               ": empty headword");
    const std::u32string def =
        detail::remove_stopwords(decode_utf8(line.substr(tab + 1)), stops);
    if (head.size() == 1) {
      lex.defs[head[0]] += def;
    } else {
      lex.multichar_entries[head_utf8] += encode_utf8(def);
    }
  }
  return lex;
}

inline Lexicon load_dictionary(const std::string& dict_path,
                               const std::string& stopword_path) {
  return load_dictionary(dict_path, load_stopwords(stopword_path));
}

// Smoothed inverse document frequency over word strings:
//   idf(w) = ln((N+1)/(df(w)+1)),
// so unseen words get the maximum value ln(N+1) and nothing is negative.
struct IdfTable {
  long doc_count = 0;
  std::unordered_map<std::string, long> df;
  std::unordered_map<std::string, double> idf;
  double unseen_idf = 0.0;

  double value(std::string_view word) const {
    auto it = idf.find(std::string(word));
    return it == idf.end() ? unseen_idf : it->second;
  }
  double value(char32_t cp) const { return value(encode_utf8(cp)); }
};

inline IdfTable build_idf(const std::vector<std::vector<std::string>>& documents) {
  if (documents.empty())
    throw std::runtime_error("build_idf: empty document list");
  IdfTable table;
  table.doc_count = static_cast<long>(documents.size());
  std::unordered_set<std::string> in_doc;
  for (const std::vector<std::string>& doc : documents) {
    in_doc.clear();
    for (const std::string& w : doc) in_doc.insert(w);
    for (const std::string& w : in_doc) ++table.df[w];
  }
  const double n1 = static_cast<double>(table.doc_count) + 1.0;
  table.unseen_idf = std::log(n1);
  table.idf.reserve(table.df.size());
  for (const auto& [word, count] : table.df)
    table.idf[word] = std::log(n1 / (static_cast<double>(count) + 1.0));
  return table;
}

}  // namespace clausealign
