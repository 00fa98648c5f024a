#include "clausealign/jsonl.hpp"

#include <catch_amalgamated.hpp>
#include <sstream>

#include "clausealign/manifest.hpp"

using namespace clausealign;

namespace {

std::vector<CorpusAlignment> parse(const std::string& text) {
  std::istringstream in(text);
  return read_alignment_jsonl(in, "test");
}

}  // namespace

TEST_CASE("alignment jsonl round-trips through write and read") {
  CorpusAlignment group;
  group.article_id = "a";
  group.paragraph_id = "p";
  AlignedPair p;
  p.mode = AlignmentMode::m2_1;
  p.src_indices = {0, 1};
  p.tgt_indices = {0};
  p.src_text = "甲，乙";
  p.tgt_text = "甲乙丙";
  p.score = {0.8, 0.1, 0.5, 0.8 + 0.05 * 0.1 + 0.05 * 0.5};
  group.pairs.push_back(p);
  const std::string text = alignment_jsonl_string({group});
  const auto back = parse(text);
  REQUIRE(back.size() == 1);
  REQUIRE(back[0].pairs.size() == 1);
  CHECK(back[0].pairs[0].mode == AlignmentMode::m2_1);
  CHECK(back[0].pairs[0].src_indices == std::vector<int>{0, 1});
  CHECK(back[0].pairs[0].src_text == "甲，乙");
  CHECK(back[0].pairs[0].score.combined == p.score.combined);
  // writing again is byte-stable
  CHECK(alignment_jsonl_string(back) == text);
}

TEST_CASE("gold files may omit text and score fields") {
  const auto groups = parse(
      R"({"article_id":"a","paragraph_id":"p","src_indices":[0],"tgt_indices":[0],"mode":"1-1"})"
      "\n");
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].pairs[0].src_text.empty());
  CHECK(groups[0].pairs[0].score.combined == 0.0);
}

TEST_CASE("pairs group by paragraph in first-appearance order") {
  const auto groups = parse(
      R"({"article_id":"a","paragraph_id":"p1","src_indices":[0],"tgt_indices":[0],"mode":"1-1"})"
      "\n"
      R"({"article_id":"a","paragraph_id":"p2","src_indices":[0],"tgt_indices":[0],"mode":"1-1"})"
      "\n"
      R"({"article_id":"a","paragraph_id":"p1","src_indices":[1],"tgt_indices":[1],"mode":"1-1"})"
      "\n");
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].paragraph_id == "p1");
  CHECK(groups[0].pairs.size() == 2);
  CHECK(groups[1].paragraph_id == "p2");
}

TEST_CASE("alignment reader rejects malformed pairs") {
  // index count inconsistent with the mode
  CHECK_THROWS_WITH(
      parse(R"({"article_id":"a","paragraph_id":"p","src_indices":[0,1],"tgt_indices":[0],"mode":"1-1"})"),
      Catch::Matchers::ContainsSubstring("does not match mode"));
  // non-adjacent indices
  CHECK_THROWS_WITH(
      parse(R"({"article_id":"a","paragraph_id":"p","src_indices":[0,2],"tgt_indices":[0],"mode":"2-1"})"),
      Catch::Matchers::ContainsSubstring("adjacent"));
  // unknown mode
  CHECK_THROWS_WITH(
      parse(R"({"article_id":"a","paragraph_id":"p","src_indices":[0],"tgt_indices":[0,1,2],"mode":"1-3"})"),
      Catch::Matchers::ContainsSubstring("unknown alignment mode"));
  // missing field, with the line number in the message
  CHECK_THROWS_WITH(
      parse("{\"article_id\":\"a\",\"paragraph_id\":\"p\",\"src_indices\":[0],\"tgt_indices\":[0],\"mode\":\"1-1\"}\n"
            "{\"article_id\":\"a\"}\n"),
      Catch::Matchers::ContainsSubstring("line 2"));
  // broken JSON
  CHECK_THROWS_WITH(parse("{nope"),
                    Catch::Matchers::ContainsSubstring("malformed JSON"));
}

TEST_CASE("manifest records the run and parses back as JSON") {
  RunManifest m;
  m.subcommand = "split-dataset";
  m.options["ratios"] = "0.8,0.1,0.1";
  m.inputs = {"spans.jsonl"};
  m.outputs = {"train.jsonl", "dev.jsonl", "test.jsonl"};
  m.has_seed = true;
  m.seed = 42;
  m.started_at = iso8601_utc_now();
  m.finished_at = iso8601_utc_now();
  const auto path =
      (std::filesystem::temp_directory_path() / "ca_manifest.json").string();
  write_manifest(path, m);
  std::ifstream in(path);
  const nlohmann::json obj = nlohmann::json::parse(in);
  CHECK(obj["subcommand"] == "split-dataset");
  CHECK(obj["seed"] == 42);
  CHECK(obj["tool_version"] == kVersion);
  CHECK(obj["outputs"].size() == 3);
}
