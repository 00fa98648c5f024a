#include "clausealign/corpus.hpp"

#include <catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace clausealign;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("split_clauses on the delimiter set") {
  // "A，B。C！"
  const ClauseSeq seq =
      split_clauses("A\xEF\xBC\x8C"  "B\xE3\x80\x82"  "C\xEF\xBC\x81",
                    LanguageTag::ancient);
  REQUIRE(seq.clauses.size() == 3);
  CHECK(seq.clauses[0].text == "A");
  CHECK(seq.clauses[0].trailing_delim == "\xEF\xBC\x8C");
  CHECK(seq.clauses[1].text == "B");
  CHECK(seq.clauses[1].trailing_delim == "\xE3\x80\x82");
  CHECK(seq.clauses[2].text == "C");
  CHECK(seq.clauses[2].trailing_delim == "\xEF\xBC\x81");
  CHECK(seq.reconstruct() == "A\xEF\xBC\x8C" "B\xE3\x80\x82" "C\xEF\xBC\x81");
}

TEST_CASE("paragraph without delimiters is a single clause") {
  const ClauseSeq seq = split_clauses("ABC", LanguageTag::modern);
  REQUIRE(seq.clauses.size() == 1);
  CHECK(seq.clauses[0].text == "ABC");
  CHECK(seq.clauses[0].char_len == 3);
  CHECK(seq.clauses[0].trailing_delim.empty());
}

TEST_CASE("empty segment between delimiters is dropped") {
  // "A，，B": hand enumeration of split points gives segments A | (empty) | B;
  // the second delimiter joins A's trailing run.
  const ClauseSeq seq =
      split_clauses("A\xEF\xBC\x8C\xEF\xBC\x8C" "B", LanguageTag::ancient);
  REQUIRE(seq.clauses.size() == 2);
  CHECK(seq.clauses[0].text == "A");
  CHECK(seq.clauses[0].trailing_delim == "\xEF\xBC\x8C\xEF\xBC\x8C");
  CHECK(seq.clauses[1].text == "B");
  CHECK(seq.reconstruct() == "A\xEF\xBC\x8C\xEF\xBC\x8C" "B");
}

TEST_CASE("leading delimiters attach to the first clause") {
  const ClauseSeq seq = split_clauses(",A,B", LanguageTag::ancient);
  REQUIRE(seq.clauses.size() == 2);
  CHECK(seq.clauses[0].text == ",A");
  CHECK(seq.clauses[0].char_len == 2);
  CHECK(seq.reconstruct() == ",A,B");
}

TEST_CASE("delimiter-only and empty paragraphs are errors") {
  CHECK_THROWS_WITH(split_clauses("\xEF\xBC\x8C\xE3\x80\x82", LanguageTag::ancient),
                    "no clause content");
  CHECK_THROWS_AS(split_clauses("", LanguageTag::ancient), std::runtime_error);
}

TEST_CASE("ascii delimiters split too") {
  const ClauseSeq seq = split_clauses("a,b;c.d!e", LanguageTag::modern);
  REQUIRE(seq.clauses.size() == 5);
  CHECK(seq.clauses[3].trailing_delim == "!");
}

TEST_CASE("custom delimiter set") {
  const DelimiterSet only_comma("\xEF\xBC\x8C");
  const ClauseSeq seq =
      split_clauses("A\xEF\xBC\x8C" "B\xE3\x80\x82", LanguageTag::ancient, only_comma);
  REQUIRE(seq.clauses.size() == 2);
  CHECK(seq.clauses[1].text == "B\xE3\x80\x82");
}

TEST_CASE("round-trip and length bookkeeping on random paragraphs") {
  std::mt19937_64 gen(11);
  const std::u32string alphabet = U"学而时习abc";
  const std::u32string delims = U"，；。！,.";
  for (int iter = 0; iter < 300; ++iter) {
    std::u32string para;
    const int len = 1 + static_cast<int>(gen() % 24);
    for (int i = 0; i < len; ++i) {
      if (gen() % 4 == 0)
        para.push_back(delims[gen() % delims.size()]);
      else
        para.push_back(alphabet[gen() % alphabet.size()]);
    }
    const std::string utf8 = encode_utf8(para);
    ClauseSeq seq;
    try {
      seq = split_clauses(utf8, LanguageTag::ancient);
    } catch (const std::runtime_error&) {
      continue;  // delimiter-only draw
    }
    CHECK(seq.reconstruct() == utf8);
    std::size_t char_total = 0, delim_total = 0;
    for (const Clause& c : seq.clauses) {
      CHECK(c.char_len >= 1);
      CHECK(c.char_len == scalar_count(c.text));
      char_total += c.char_len;
      delim_total += scalar_count(c.trailing_delim);
    }
    CHECK(char_total + delim_total == para.size());
    // Re-splitting any single clause text is a no-op: one clause comes back
    // (a delimiter can only appear as a leading run, which re-attaches).
    for (const Clause& c : seq.clauses) {
      const ClauseSeq again = split_clauses(c.text, LanguageTag::ancient);
      CHECK(again.clauses.size() == 1);
      CHECK(again.clauses[0].text == c.text);
    }
  }
}

TEST_CASE("load_corpus reads records in order") {
  const std::string path = write_temp(
      "ca_corpus_ok.jsonl",
      R"({"article_id":"a1","paragraph_id":"p1","ancient":"X","modern":"Y"})"
      "\n"
      R"({"article_id":"a1","paragraph_id":"p2","ancient":"X2","modern":"Y2"})"
      "\n"
      R"({"article_id":"a2","paragraph_id":"p1","ancient":"X3","modern":"Y3"})"
      "\n");
  const auto records = load_corpus(path);
  REQUIRE(records.size() == 3);
  CHECK(records[0].key() == "a1/p1");
  CHECK(records[1].key() == "a1/p2");
  CHECK(records[2].key() == "a2/p1");
  CHECK(records[2].ancient == "X3");
}

TEST_CASE("load_corpus rejects duplicates naming the key") {
  const std::string path = write_temp(
      "ca_corpus_dup.jsonl",
      R"({"article_id":"a1","paragraph_id":"p1","ancient":"X","modern":"Y"})"
      "\n"
      R"({"article_id":"a1","paragraph_id":"p1","ancient":"X","modern":"Y"})"
      "\n");
  CHECK_THROWS_WITH(load_corpus(path),
                    Catch::Matchers::ContainsSubstring("a1/p1"));
}

TEST_CASE("empty corpus file loads as empty list") {
  const std::string path = write_temp("ca_corpus_empty.jsonl", "");
  CHECK(load_corpus(path).empty());
}

TEST_CASE("malformed line errors carry the line number") {
  const std::string path = write_temp(
      "ca_corpus_bad.jsonl",
      R"({"article_id":"a1","paragraph_id":"p1","ancient":"X","modern":"Y"})"
      "\n{oops\n");
  CHECK_THROWS_WITH(load_corpus(path), Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("invalid UTF-8 in corpus is an error") {
  const std::string path = write_temp(
      "ca_corpus_utf8.jsonl",
      "{\"article_id\":\"a1\",\"paragraph_id\":\"p1\",\"ancient\":\"\xC3(\",\"modern\":\"Y\"}\n");
  CHECK_THROWS_AS(load_corpus(path), std::runtime_error);
}

TEST_CASE("empty paragraph text is rejected") {
  const std::string path = write_temp(
      "ca_corpus_blankfield.jsonl",
      R"({"article_id":"a1","paragraph_id":"p1","ancient":"X","modern":"   "})"
      "\n");
  CHECK_THROWS_WITH(load_corpus(path),
                    Catch::Matchers::ContainsSubstring("empty paragraph text"));
  const CorpusLoadResult lenient = load_corpus_lenient(path);
  CHECK(lenient.records.empty());
  REQUIRE(lenient.errors.size() == 1);
}

TEST_CASE("modern_seg must concatenate to modern") {
  const std::string good = write_temp(
      "ca_corpus_seg_ok.jsonl",
      R"({"article_id":"a1","paragraph_id":"p1","ancient":"X","modern":"YZ","modern_seg":"Y Z"})"
      "\n");
  const auto records = load_corpus(good);
  REQUIRE(records.size() == 1);
  REQUIRE(records[0].modern_seg.size() == 2);
  CHECK(records[0].modern_seg[0] == "Y");

  const std::string bad = write_temp(
      "ca_corpus_seg_bad.jsonl",
      R"({"article_id":"a1","paragraph_id":"p1","ancient":"X","modern":"YZ","modern_seg":"Y Q"})"
      "\n");
  CHECK_THROWS_WITH(load_corpus(bad),
                    Catch::Matchers::ContainsSubstring("modern_seg"));
}

TEST_CASE("parallel plain-text mode synthesizes ids") {
  const std::string anc = write_temp("ca_par_a.txt", "A1\nA2\n");
  const std::string mod = write_temp("ca_par_m.txt", "M1\nM2\n");
  const auto records = load_corpus_parallel(anc, mod);
  REQUIRE(records.size() == 2);
  CHECK(records[0].article_id == "a00001");
  CHECK(records[1].article_id == "a00002");
  CHECK(records[1].modern == "M2");

  const std::string shorter = write_temp("ca_par_s.txt", "M1\n");
  CHECK_THROWS_WITH(load_corpus_parallel(anc, shorter),
                    Catch::Matchers::ContainsSubstring("line count"));
}
