// Paragraph-aligned corpus records and clause splitting.
//
// A corpus is a sequence of bilingual paragraph pairs identified by
// (article_id, paragraph_id). Paragraphs are decomposed into clauses at a
// fixed delimiter set; joining the clause texts with their recorded
// delimiters reproduces the paragraph byte for byte.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "clausealign/unicode.hpp"

#include <json.hpp>

namespace clausealign {

enum class LanguageTag { ancient, modern };

struct CorpusRecord {
  std::string article_id;
  std::string paragraph_id;
  std::string ancient;
  std::string modern;
  // Optional externally pre-segmented modern words; empty means "use the
  // configured segmenter". Tokens concatenate exactly to `modern`.
  std::vector<std::string> modern_seg;

  std::string key() const { return article_id + "/" + paragraph_id; }
};

struct Clause {
  std::string text;            // no delimiter except a possible leading run
  std::string trailing_delim;  // "", or a run of delimiter marks
  std::size_t char_len = 0;    // scalar count of text
};

struct ClauseSeq {
  std::vector<Clause> clauses;
  LanguageTag language_tag = LanguageTag::ancient;

  std::string reconstruct() const {
    std::string out;
    for (const Clause& c : clauses) {
      out += c.text;
      out += c.trailing_delim;
    }
    return out;
  }
};

// Clause delimiters: fullwidth comma/semicolon/period/exclamation and their
// ASCII forms by default.
class DelimiterSet {
 public:
  DelimiterSet() : DelimiterSet(kDefault) {}
  explicit DelimiterSet(std::string_view utf8_marks) {
    for (char32_t cp : decode_utf8(utf8_marks)) marks_.insert(cp);
    if (marks_.empty())
      throw std::invalid_argument("delimiter set must not be empty");
  }
  bool contains(char32_t cp) const { return marks_.count(cp) != 0; }

  static constexpr std::string_view kDefault = "，；。！,;.!";

 private:
  std::unordered_set<char32_t> marks_;
};

// Splits a paragraph into clauses after each delimiter. Empty segments
// between consecutive delimiters are dropped and the extra delimiter joins
// the preceding clause's trailing run; a delimiter run before any content is
// prepended to the first clause's text. Throws if the paragraph is empty or
// contains no clause content.
inline ClauseSeq split_clauses(std::string_view paragraph, LanguageTag tag,
                               const DelimiterSet& delims = DelimiterSet()) {
  if (paragraph.empty()) throw std::runtime_error("empty paragraph");
  ClauseSeq seq;
  seq.language_tag = tag;
  std::string prefix;   // delimiters seen before the first clause content
  std::string current;  // bytes of the pending clause
  std::size_t current_len = 0;
  std::size_t pos = 0;
  while (pos < paragraph.size()) {
    const std::size_t start = pos;
    const char32_t cp = decode_scalar(paragraph, pos);
    if (!delims.contains(cp)) {
      current.append(paragraph.substr(start, pos - start));
      ++current_len;
      continue;
    }
    const std::string mark(paragraph.substr(start, pos - start));
    if (!current.empty()) {
      Clause clause;
      if (!prefix.empty()) {
        clause.text = prefix + current;
        clause.char_len = scalar_count(prefix) + current_len;
        prefix.clear();
      } else {
        clause.text = std::move(current);
        clause.char_len = current_len;
      }
      clause.trailing_delim = mark;
      seq.clauses.push_back(std::move(clause));
      current.clear();
      current_len = 0;
    } else if (!seq.clauses.empty()) {
      seq.clauses.back().trailing_delim += mark;
    } else {
      prefix += mark;
    }
  }
  if (!current.empty()) {
    Clause clause;
    clause.text = prefix.empty() ? std::move(current) : prefix + current;
    clause.char_len = scalar_count(clause.text);
    seq.clauses.push_back(std::move(clause));
  }
  if (seq.clauses.empty()) throw std::runtime_error("no clause content");
  return seq;
}

namespace detail {

inline std::vector<std::string> split_ws_tokens(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : s) {
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

// Parses and validates one JSONL corpus line. line_no is 1-based.
inline CorpusRecord parse_corpus_line(const std::string& line,
                                      std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": malformed record: " + e.what());
  }
  auto field = [&](const char* key) -> std::string {
    if (!obj.contains(key) || !obj[key].is_string())
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": missing string field '" + key + "'");
    return obj[key].get<std::string>();
  };
  CorpusRecord rec;
  rec.article_id = field("article_id");
  rec.paragraph_id = field("paragraph_id");
  rec.ancient = trim_utf8(field("ancient"));
  rec.modern = trim_utf8(field("modern"));
  if (rec.article_id.empty() || rec.paragraph_id.empty())
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": empty article_id or paragraph_id");
  if (rec.ancient.empty() || rec.modern.empty())
    throw std::runtime_error("line " + std::to_string(line_no) + " (" +
                             rec.key() + "): empty paragraph text");
  if (obj.contains("modern_seg")) {
    if (!obj["modern_seg"].is_string())
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": modern_seg must be a string");
    rec.modern_seg = split_ws_tokens(obj["modern_seg"].get<std::string>());
    std::string joined;
    for (const std::string& t : rec.modern_seg) joined += t;
    if (joined != rec.modern)
      throw std::runtime_error(
          "line " + std::to_string(line_no) + " (" + rec.key() +
          "): modern_seg tokens do not concatenate to modern text");
  }
  return rec;
}

inline bool blank_line(const std::string& line) {
  for (char ch : line)
    if (ch != ' ' && ch != '\t' && ch != '\r') return false;
  return true;
}

}  // namespace detail

// Loads a JSON Lines corpus. Malformed lines, invalid UTF-8 and duplicate
// (article_id, paragraph_id) keys are hard errors naming the offending line.
inline std::vector<CorpusRecord> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::vector<CorpusRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) detail::strip_bom(line);
    if (detail::blank_line(line)) continue;
    CorpusRecord rec = detail::parse_corpus_line(line, line_no);
    if (!seen.insert(rec.key()).second)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": duplicate paragraph key " + rec.key());
    records.push_back(std::move(rec));
  }
  return records;
}

// Lenient loading used by the CLI: bad lines become per-record error
// messages instead of aborting the whole run.
struct CorpusLoadResult {
  std::vector<CorpusRecord> records;
  std::vector<std::string> errors;
};

inline CorpusLoadResult load_corpus_lenient(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  CorpusLoadResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) detail::strip_bom(line);
    if (detail::blank_line(line)) continue;
    try {
      CorpusRecord rec = detail::parse_corpus_line(line, line_no);
      if (!seen.insert(rec.key()).second)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": duplicate paragraph key " + rec.key());
      result.records.push_back(std::move(rec));
    } catch (const std::runtime_error& e) {
      result.errors.emplace_back(e.what());
    }
  }
  return result;
}

// Plain-text mode: two parallel files, one paragraph per line, line i of one
// aligned with line i of the other. Each line pair becomes its own article
// (no article structure is available), with synthetic ids a%05d / p1.
inline std::vector<CorpusRecord> load_corpus_parallel(
    const std::string& ancient_path, const std::string& modern_path) {
  std::ifstream fa(ancient_path, std::ios::binary);
  if (!fa) throw std::runtime_error("cannot open file: " + ancient_path);
  std::ifstream fm(modern_path, std::ios::binary);
  if (!fm) throw std::runtime_error("cannot open file: " + modern_path);
  std::vector<CorpusRecord> records;
  std::string la, lm;
  std::size_t line_no = 0;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(fa, la));
    const bool gm = static_cast<bool>(std::getline(fm, lm));
    if (!ga && !gm) break;
    ++line_no;
    if (ga != gm)
      throw std::runtime_error("parallel files differ in line count at line " +
                               std::to_string(line_no));
    if (line_no == 1) {
      detail::strip_bom(la);
      detail::strip_bom(lm);
    }
    if (!is_valid_utf8(la) || !is_valid_utf8(lm))
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": invalid UTF-8");
    CorpusRecord rec;
    char id[16];
    std::snprintf(id, sizeof(id), "a%05zu", line_no);
    rec.article_id = id;
    rec.paragraph_id = "p1";
    rec.ancient = trim_utf8(la);
    rec.modern = trim_utf8(lm);
    if (rec.ancient.empty() || rec.modern.empty())
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": empty paragraph text");
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace clausealign
