// JSON Lines readers/writers for alignments and augmented span pairs.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "clausealign/aligner.hpp"
#include "clausealign/augment.hpp"

#include <json.hpp>

namespace clausealign {

inline nlohmann::json pair_to_json(const std::string& article_id,
                                   const std::string& paragraph_id,
                                   const AlignedPair& p) {
  nlohmann::json obj;
  obj["article_id"] = article_id;
  obj["paragraph_id"] = paragraph_id;
  obj["src_indices"] = p.src_indices;
  obj["tgt_indices"] = p.tgt_indices;
  obj["mode"] = mode_name(p.mode);
  obj["src_text"] = p.src_text;
  obj["tgt_text"] = p.tgt_text;
  obj["score_lexical"] = p.score.lexical;
  obj["score_statistical"] = p.score.statistical;
  obj["score_edit"] = p.score.edit;
  obj["score_combined"] = p.score.combined;
  return obj;
}

// One line per pair; records that failed produce no lines.
inline void write_alignment_jsonl(std::ostream& out,
                                  const std::vector<CorpusAlignment>& alignments) {
  for (const CorpusAlignment& a : alignments) {
    if (!a.ok()) continue;
    for (const AlignedPair& p : a.pairs)
      out << pair_to_json(a.article_id, a.paragraph_id, p).dump() << "\n";
  }
}

inline std::string alignment_jsonl_string(const std::vector<CorpusAlignment>& alignments) {
  std::ostringstream out;
  write_alignment_jsonl(out, alignments);
  return out.str();
}

// Reads an alignment (or gold) file, grouping pairs by paragraph in first
// appearance order. Score and text fields are optional.
inline std::vector<CorpusAlignment> read_alignment_jsonl(std::istream& in,
                                                         const std::string& origin) {
  std::vector<CorpusAlignment> groups;
  std::unordered_map<std::string, std::size_t> index_of;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) detail::strip_bom(line);
    if (detail::blank_line(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": malformed JSON: " + e.what());
    }
    const auto bad = [&](const std::string& what) {
      return std::runtime_error(origin + " line " + std::to_string(line_no) +
                                ": " + what);
    };
    if (!obj.contains("article_id") || !obj.contains("paragraph_id") ||
        !obj.contains("src_indices") || !obj.contains("tgt_indices") ||
        !obj.contains("mode"))
      throw bad("missing required field");
    AlignedPair pair;
    try {
      pair.src_indices = obj["src_indices"].get<std::vector<int>>();
      pair.tgt_indices = obj["tgt_indices"].get<std::vector<int>>();
      pair.mode = parse_mode(obj["mode"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw bad(std::string("bad field type: ") + e.what());
    }
    if (pair.src_indices.size() != static_cast<std::size_t>(src_arity(pair.mode)) ||
        pair.tgt_indices.size() != static_cast<std::size_t>(tgt_arity(pair.mode)))
      throw bad("index count does not match mode " +
                std::string(mode_name(pair.mode)));
    for (const std::vector<int>& idx : {pair.src_indices, pair.tgt_indices})
      for (std::size_t k = 0; k + 1 < idx.size(); ++k)
        if (idx[k + 1] != idx[k] + 1) throw bad("indices not adjacent ascending");
    pair.src_text = obj.value("src_text", std::string());
    pair.tgt_text = obj.value("tgt_text", std::string());
    pair.score.lexical = obj.value("score_lexical", 0.0);
    pair.score.statistical = obj.value("score_statistical", 0.0);
    pair.score.edit = obj.value("score_edit", 0.0);
    pair.score.combined = obj.value("score_combined", 0.0);

    const std::string article = obj["article_id"].get<std::string>();
    const std::string paragraph = obj["paragraph_id"].get<std::string>();
    const std::string key = article + "\x1F" + paragraph;
    auto it = index_of.find(key);
    if (it == index_of.end()) {
      it = index_of.emplace(key, groups.size()).first;
      CorpusAlignment group;
      group.article_id = article;
      group.paragraph_id = paragraph;
      groups.push_back(std::move(group));
    }
    groups[it->second].pairs.push_back(std::move(pair));
  }
  return groups;
}

inline std::vector<CorpusAlignment> read_alignment_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open alignment file: " + path);
  return read_alignment_jsonl(in, path);
}

// --- augmented span pairs ----------------------------------------------------

inline nlohmann::json span_to_json(const SpanPair& s) {
  nlohmann::json obj;
  obj["src"] = s.src_text;
  obj["tgt"] = s.tgt_text;
  obj["article_id"] = s.article_id;
  obj["paragraph_id"] = s.paragraph_id;
  obj["span"] = std::vector<int>{s.start, s.end};
  obj["clause_pair_count"] = s.clause_pair_count;
  return obj;
}

inline void write_spans_jsonl(std::ostream& out, const std::vector<SpanPair>& spans) {
  for (const SpanPair& s : spans) out << span_to_json(s).dump() << "\n";
}

inline std::string spans_jsonl_string(const std::vector<SpanPair>& spans) {
  std::ostringstream out;
  write_spans_jsonl(out, spans);
  return out.str();
}

inline std::vector<SpanPair> read_spans_jsonl(std::istream& in,
                                              const std::string& origin) {
  std::vector<SpanPair> spans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) detail::strip_bom(line);
    if (detail::blank_line(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": malformed JSON: " + e.what());
    }
    try {
      SpanPair s;
      s.src_text = obj.at("src").get<std::string>();
      s.tgt_text = obj.at("tgt").get<std::string>();
      s.article_id = obj.at("article_id").get<std::string>();
      s.paragraph_id = obj.at("paragraph_id").get<std::string>();
      const std::vector<int> span = obj.at("span").get<std::vector<int>>();
      if (span.size() != 2)
        throw std::runtime_error("span must be [start, end]");
      s.start = span[0];
      s.end = span[1];
      s.clause_pair_count = obj.at("clause_pair_count").get<int>();
      spans.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return spans;
}

inline std::vector<SpanPair> read_spans_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open spans file: " + path);
  return read_spans_jsonl(in, path);
}

// --- clause-split output -------------------------------------------------

inline nlohmann::json clause_seq_to_json(const ClauseSeq& seq) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Clause& c : seq.clauses) {
    nlohmann::json obj;
    obj["text"] = c.text;
    obj["delim"] = c.trailing_delim;
    obj["char_len"] = c.char_len;
    arr.push_back(std::move(obj));
  }
  return arr;
}

}  // namespace clausealign
