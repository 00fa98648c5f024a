// End-to-end tests driving the installed CLI binary over the shipped sample
// corpus: every stage feeds the next, outputs are deterministic, and the
// checked-in golden files reproduce byte for byte.

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>

#include "clausealign/config_io.hpp"
#include "clausealign/jsonl.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = CLAUSEALIGN_BIN;
const std::string kData = CLAUSEALIGN_DATA_DIR;

int run(const std::string& args) {
  const std::string cmd = "\"" + kBin + "\" " + args + " 2>>/tmp/clausealign_test.log";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

fs::path fresh_dir() {
  static std::mt19937_64 gen(std::random_device{}());
  const fs::path dir =
      fs::temp_directory_path() / ("ca_pipe_" + std::to_string(gen()));
  fs::create_directories(dir);
  return dir;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("split-clauses reproduces the checked-in golden output") {
  const fs::path dir = fresh_dir();
  const fs::path out = dir / "split.jsonl";
  REQUIRE(run("split-clauses --corpus " + q(fs::path(kData) / "sample_small.jsonl") +
              " --out " + q(out)) == 0);
  CHECK(slurp(out) == slurp(fs::path(kData) / "golden/split_clauses_small.jsonl"));
  CHECK(fs::exists(dir / "split.jsonl.manifest.json"));
}

TEST_CASE("a record with an empty modern side fails alone, exit code 3") {
  const fs::path dir = fresh_dir();
  const fs::path corpus = dir / "corpus.jsonl";
  spit(corpus,
       R"({"article_id":"a","paragraph_id":"p1","ancient":"甲，乙。","modern":"A，B。"})"
       "\n"
       R"({"article_id":"a","paragraph_id":"p2","ancient":"丙。","modern":"  "})"
       "\n");
  const fs::path out = dir / "split.jsonl";
  CHECK(run("split-clauses --corpus " + q(corpus) + " --out " + q(out)) == 3);
  const auto lines = slurp(out);
  CHECK(lines.find("\"p1\"") != std::string::npos);
  CHECK(lines.find("\"p2\"") == std::string::npos);
}

TEST_CASE("sample pipeline: align, estimate, re-align, augment, split, eval") {
  const fs::path dir = fresh_dir();
  const std::string corpus = q(fs::path(kData) / "sample_corpus.jsonl");
  const std::string lexicon_flags =
      " --dict " + q(fs::path(kData) / "sample_dict.tsv") + " --stopwords " +
      q(fs::path(kData) / "stopwords.txt") + " --wordlist " +
      q(fs::path(kData) / "wordlist.txt");
  const std::string gold = q(fs::path(kData) / "sample_gold.jsonl");

  // estimate a config from the corpus and the shipped gold alignment
  const fs::path config = dir / "estimated.conf";
  REQUIRE(run("estimate --corpus " + corpus + " --gold " + gold + " --out " +
              q(config)) == 0);
  const clausealign::AlignmentConfig cfg = clausealign::read_config(config.string());
  CHECK(cfg.beta == 5.0);
  CHECK(cfg.length.sigma > 0.0);

  // align with it; the result must reproduce the gold 1-1 structure
  const fs::path aligned = dir / "aligned.jsonl";
  REQUIRE(run("align --corpus " + corpus + lexicon_flags + " --config " +
              q(config) + " --out " + q(aligned)) == 0);
  const auto groups = clausealign::read_alignment_jsonl(aligned.string());
  CHECK(groups.size() == 10);

  const fs::path eval_out = dir / "prf.tsv";
  REQUIRE(run("eval-align --predicted " + q(aligned) + " --gold " + gold +
              " --out " + q(eval_out)) == 0);
  const std::string prf = slurp(eval_out);
  CHECK(prf.find("precision\trecall\tf1") != std::string::npos);
  CHECK(prf.find("\n1\t1\t1\t") != std::string::npos);

  // byte determinism across reruns and worker counts
  const fs::path aligned_again = dir / "aligned2.jsonl";
  REQUIRE(run("align --corpus " + corpus + lexicon_flags + " --config " +
              q(config) + " --jobs 4 --out " + q(aligned_again)) == 0);
  CHECK(slurp(aligned) == slurp(aligned_again));

  // augment and split
  const fs::path spans = dir / "spans.jsonl";
  REQUIRE(run("augment --corpus " + corpus + " --alignment " + q(aligned) +
              " --out " + q(spans)) == 0);
  const auto span_list = clausealign::read_spans_jsonl(spans.string());
  CHECK(span_list.size() == 80);  // sum of run counts over the ten paragraphs

  const fs::path ds1 = dir / "ds1";
  const fs::path ds2 = dir / "ds2";
  REQUIRE(run("split-dataset --spans " + q(spans) + " --out-dir " + q(ds1) +
              " --seed 42") == 0);
  REQUIRE(run("split-dataset --spans " + q(spans) + " --out-dir " + q(ds2) +
              " --seed 42") == 0);
  std::size_t total = 0;
  for (const char* part : {"train.jsonl", "dev.jsonl", "test.jsonl"}) {
    CHECK(slurp(ds1 / part) == slurp(ds2 / part));
    total += clausealign::read_spans_jsonl((ds1 / part).string()).size();
  }
  CHECK(total == span_list.size());
  std::unordered_set<std::string> train_articles, other_articles;
  for (const auto& s : clausealign::read_spans_jsonl((ds1 / "train.jsonl").string()))
    train_articles.insert(s.article_id);
  for (const char* part : {"dev.jsonl", "test.jsonl"})
    for (const auto& s : clausealign::read_spans_jsonl((ds1 / part).string()))
      other_articles.insert(s.article_id);
  for (const std::string& a : other_articles) CHECK(train_articles.count(a) == 0);

  // identical hyp/ref gives BLEU 100 across the board
  const fs::path hyp = dir / "hyp.txt";
  spit(hyp, "温习旧知识从而知道新道理\n只学习却不思考就会迷惑\n");
  const fs::path bleu_out = dir / "bleu.tsv";
  REQUIRE(run("eval-bleu --hyp " + q(hyp) + " --ref " + q(hyp) + " --out " +
              q(bleu_out)) == 0);
  CHECK(slurp(bleu_out).find("\n100\t100\t100\t100\t1\t") != std::string::npos);
}

TEST_CASE("lcs scorer emits the same output schema") {
  const fs::path dir = fresh_dir();
  const std::string corpus = q(fs::path(kData) / "sample_small.jsonl");
  const fs::path out = dir / "lcs.jsonl";
  REQUIRE(run("align --corpus " + corpus + " --scorer lcs --out " + q(out)) == 0);
  std::ifstream in(out);
  std::string line;
  REQUIRE(std::getline(in, line));
  const nlohmann::json obj = nlohmann::json::parse(line);
  for (const char* key :
       {"article_id", "paragraph_id", "src_indices", "tgt_indices", "mode",
        "src_text", "tgt_text", "score_lexical", "score_statistical",
        "score_edit", "score_combined"})
    CHECK(obj.contains(key));
}

TEST_CASE("grid-search writes the score table and best config") {
  const fs::path dir = fresh_dir();
  const std::string corpus = q(fs::path(kData) / "sample_corpus.jsonl");
  const std::string gold = q(fs::path(kData) / "sample_gold.jsonl");
  const std::string lexicon_flags =
      " --dict " + q(fs::path(kData) / "sample_dict.tsv") + " --stopwords " +
      q(fs::path(kData) / "stopwords.txt");
  const fs::path table = dir / "grid.tsv";
  const fs::path best = dir / "best.conf";
  REQUIRE(run("grid-search --corpus " + corpus + " --gold " + gold +
              lexicon_flags + " --estimate --beta-grid 3,5 --gamma-grid 0.05" +
              " --lambda-grid 0.05 --jobs 2 --out " + q(table) +
              " --best-out " + q(best)) == 0);
  const std::string tsv = slurp(table);
  CHECK(tsv.rfind("beta\tgamma\tlambda\tf1\tprecision\n", 0) == 0);
  CHECK(clausealign::read_config(best.string()).gamma == 0.05);
}

TEST_CASE("CLAUSEALIGN_CONFIG env var supplies the config path") {
  const fs::path dir = fresh_dir();
  const std::string corpus = q(fs::path(kData) / "sample_small.jsonl");
  const fs::path config = dir / "env.conf";
  clausealign::AlignmentConfig cfg;
  cfg.mode_probs = clausealign::ModeProbs::defaults();
  cfg.length = {0.5, 0.15};
  clausealign::write_config(config.string(), cfg);

  const fs::path with_flag = dir / "flag.jsonl";
  REQUIRE(run("align --corpus " + corpus + " --config " + q(config) +
              " --out " + q(with_flag)) == 0);
  const fs::path with_env = dir / "env.jsonl";
  const std::string cmd = "CLAUSEALIGN_CONFIG=" + q(config) + " \"" + kBin +
                          "\" align --corpus " + corpus + " --out " +
                          q(with_env) + " 2>>/tmp/clausealign_test.log";
  const int status = std::system(cmd.c_str());
  REQUIRE((WIFEXITED(status) && WEXITSTATUS(status) == 0));
  CHECK(slurp(with_flag) == slurp(with_env));
}

TEST_CASE("plain-text corpus mode synthesizes one article per line") {
  const fs::path dir = fresh_dir();
  const fs::path anc = dir / "anc.txt";
  const fs::path mod = dir / "mod.txt";
  spit(anc, "学而时习之，不亦说乎。\n温故而知新，可以为师矣。\n");
  spit(mod, "学了又按时温习它，不也很愉快吗。\n温习旧知识从而知道新道理，就可以做老师了。\n");
  const fs::path out = dir / "aligned.jsonl";
  REQUIRE(run("align --ancient " + q(anc) + " --modern " + q(mod) + " --out " +
              q(out)) == 0);
  const auto groups = clausealign::read_alignment_jsonl(out.string());
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].article_id == "a00001");
  CHECK(groups[1].article_id == "a00002");

  // --corpus and --ancient/--modern are mutually exclusive
  CHECK(run("align --corpus " + q(fs::path(kData) / "sample_small.jsonl") +
            " --ancient " + q(anc) + " --modern " + q(mod) + " --out " +
            q(dir / "x.jsonl")) == 2);
}

TEST_CASE("align reports bad records and keeps going, exit code 3") {
  const fs::path dir = fresh_dir();
  const fs::path corpus = dir / "corpus.jsonl";
  spit(corpus,
       R"({"article_id":"a","paragraph_id":"p1","ancient":"甲乙，丙。","modern":"甲乙，丙。"})"
       "\n"
       R"({"article_id":"a","paragraph_id":"p2","ancient":"。。。","modern":"甲。"})"
       "\n");
  const fs::path out = dir / "aligned.jsonl";
  CHECK(run("align --corpus " + q(corpus) + " --out " + q(out)) == 3);
  const auto groups = clausealign::read_alignment_jsonl(out.string());
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].paragraph_id == "p1");
}
