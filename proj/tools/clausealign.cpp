// clausealign: build clause-aligned parallel corpora from paragraph-aligned
// bilingual text, augment and split the result, and evaluate alignments and
// translations.
//
// Exit codes: 0 success, 1 input/processing error, 2 usage error,
// 3 partial failure (some records failed, output holds the rest).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "clausealign/aligner.hpp"
#include "clausealign/augment.hpp"
#include "clausealign/config_io.hpp"
#include "clausealign/corpus.hpp"
#include "clausealign/eval.hpp"
#include "clausealign/jsonl.hpp"
#include "clausealign/lexicon.hpp"
#include "clausealign/manifest.hpp"
#include "clausealign/scoring.hpp"
#include "clausealign/segmenter.hpp"
#include "clausealign/unicode.hpp"
#include "clausealign/version.hpp"

#include <CLI11.hpp>

namespace ca = clausealign;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

std::string format_num(double v) { return ca::detail::format_double(v); }

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(cur, &used);
      if (used != cur.size()) throw std::invalid_argument(cur);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("bad ") + what + " value: '" + cur + "'");
    }
  }
  if (out.empty())
    throw std::runtime_error(std::string("empty ") + what + " list");
  return out;
}

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  return out;
}

// --- shared option bundles -------------------------------------------------

struct CorpusInputOpts {
  std::string corpus;
  std::string ancient;
  std::string modern;

  void attach(CLI::App* cmd) {
    cmd->add_option("--corpus", corpus,
                    "JSON Lines corpus (article_id, paragraph_id, ancient, modern)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--ancient", ancient,
                    "plain-text mode: ancient paragraphs, one per line")
        ->check(CLI::ExistingFile);
    cmd->add_option("--modern", modern,
                    "plain-text mode: modern paragraphs, one per line")
        ->check(CLI::ExistingFile);
  }
  void validate() const {
    const bool plain = !ancient.empty() || !modern.empty();
    if (corpus.empty() && !plain)
      throw CLI::ValidationError("--corpus (or --ancient/--modern) is required");
    if (!corpus.empty() && plain)
      throw CLI::ValidationError("--corpus and --ancient/--modern are exclusive");
    if (plain && (ancient.empty() || modern.empty()))
      throw CLI::ValidationError("plain-text mode needs both --ancient and --modern");
  }
  // Lenient load: bad records are reported and skipped.
  ca::CorpusLoadResult load_lenient() const {
    validate();
    if (!corpus.empty()) return ca::load_corpus_lenient(corpus);
    ca::CorpusLoadResult r;
    r.records = ca::load_corpus_parallel(ancient, modern);
    return r;
  }
  std::vector<ca::CorpusRecord> load_strict() const {
    validate();
    if (!corpus.empty()) return ca::load_corpus(corpus);
    return ca::load_corpus_parallel(ancient, modern);
  }
  std::vector<std::string> paths() const {
    if (!corpus.empty()) return {corpus};
    return {ancient, modern};
  }
};

struct ConfigOpts {
  std::string config_path;
  std::optional<double> beta, gamma, lambda, mu, sigma;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "alignment config file (default: $CLAUSEALIGN_CONFIG if set, "
                    "else built-in defaults)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--beta", beta, "override beta (default 5)");
    cmd->add_option("--gamma", gamma, "override gamma (default 0.05)");
    cmd->add_option("--lambda", lambda, "override lambda (default 0.05)");
    cmd->add_option("--mu", mu, "override length-ratio mean");
    cmd->add_option("--sigma", sigma, "override length-ratio stddev");
  }
  ca::AlignmentConfig resolve(std::map<std::string, std::string>& manifest_opts) const {
    ca::AlignmentConfig cfg;
    std::string source = "defaults";
    std::string path = config_path;
    if (path.empty()) {
      const char* env = std::getenv("CLAUSEALIGN_CONFIG");
      if (env != nullptr && *env != '\0') path = env;
    }
    if (!path.empty()) {
      cfg = ca::read_config(path);
      source = path;
    } else {
      cfg.mode_probs = ca::ModeProbs::defaults();
    }
    if (beta) cfg.beta = *beta;
    if (gamma) cfg.gamma = *gamma;
    if (lambda) cfg.lambda = *lambda;
    if (mu) cfg.length.mu = *mu;
    if (sigma) cfg.length.sigma = *sigma;
    cfg.validate();
    manifest_opts["config_source"] = source;
    manifest_opts["beta"] = format_num(cfg.beta);
    manifest_opts["gamma"] = format_num(cfg.gamma);
    manifest_opts["lambda"] = format_num(cfg.lambda);
    manifest_opts["mu"] = format_num(cfg.length.mu);
    manifest_opts["sigma"] = format_num(cfg.length.sigma);
    for (ca::AlignmentMode m : ca::kAllModes)
      manifest_opts[ca::detail::config_mode_key(m)] =
          format_num(cfg.mode_probs.get(m));
    return cfg;
  }
};

struct LexiconOpts {
  std::string dict_path;
  std::string stopword_path;
  std::string wordlist_path;
  std::string idf_unit = "modern-paragraph";

  void attach(CLI::App* cmd) {
    cmd->add_option("--dict", dict_path,
                    "ancient-character dictionary, TSV headword<TAB>definition")
        ->check(CLI::ExistingFile);
    cmd->add_option("--stopwords", stopword_path,
                    "stop words removed from dictionary definitions")
        ->check(CLI::ExistingFile);
    cmd->add_option("--wordlist", wordlist_path,
                    "wordlist for maximum-matching segmentation (default: "
                    "single characters)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--idf-unit", idf_unit,
                    "IDF document unit: modern-paragraph, modern-clause or "
                    "ancient-paragraph")
        ->check(CLI::IsMember({"modern-paragraph", "modern-clause",
                               "ancient-paragraph"}));
  }
  ca::Lexicon load_lexicon() const {
    if (dict_path.empty()) return ca::Lexicon{};
    if (stopword_path.empty())
      return ca::load_dictionary(dict_path, std::vector<std::string>{});
    return ca::load_dictionary(dict_path, stopword_path);
  }
  ca::MaxMatchSegmenter load_segmenter() const {
    if (wordlist_path.empty()) return ca::MaxMatchSegmenter{};
    return ca::MaxMatchSegmenter(ca::load_wordlist(wordlist_path));
  }
};

struct ScorerFlagOpts {
  std::string scorer = "standard";
  bool no_lexical = false;
  bool no_statistical = false;
  bool no_edit = false;
  bool no_dictionary = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--scorer", scorer, "pair scorer: standard or lcs")
        ->check(CLI::IsMember({"standard", "lcs"}));
    cmd->add_flag("--no-lexical", no_lexical, "zero the lexical score");
    cmd->add_flag("--no-statistical", no_statistical, "zero the statistical score");
    cmd->add_flag("--no-edit", no_edit, "zero the edit-distance score");
    cmd->add_flag("--no-dictionary", no_dictionary,
                  "disable dictionary matching inside the lexical score");
  }
  ca::ScorerOptions resolve(std::map<std::string, std::string>& manifest_opts) const {
    ca::ScorerOptions opts;
    opts.scorer = scorer == "lcs" ? ca::ScorerKind::lcs : ca::ScorerKind::standard;
    opts.use_lexical = !no_lexical;
    opts.use_statistical = !no_statistical;
    opts.use_edit = !no_edit;
    opts.use_dictionary = !no_dictionary;
    manifest_opts["scorer"] = scorer;
    if (no_lexical) manifest_opts["no_lexical"] = "true";
    if (no_statistical) manifest_opts["no_statistical"] = "true";
    if (no_edit) manifest_opts["no_edit"] = "true";
    if (no_dictionary) manifest_opts["no_dictionary"] = "true";
    return opts;
  }
};

// IDF documents per the chosen unit. Records that fail clause splitting are
// skipped here; alignment reports them itself.
std::vector<std::vector<std::string>> idf_documents(
    const std::vector<ca::CorpusRecord>& records, const std::string& unit,
    const ca::Segmenter& segmenter, const ca::DelimiterSet& delims) {
  std::vector<std::vector<std::string>> docs;
  for (const ca::CorpusRecord& rec : records) {
    try {
      if (unit == "ancient-paragraph") {
        std::vector<std::string> doc;
        for (char32_t cp : ca::decode_utf8(rec.ancient))
          doc.push_back(ca::encode_utf8(cp));
        docs.push_back(std::move(doc));
        continue;
      }
      const ca::ClauseSeq seq =
          ca::split_clauses(rec.modern, ca::LanguageTag::modern, delims);
      std::vector<std::vector<std::u32string>> words;
      if (!rec.modern_seg.empty())
        words = ca::detail::distribute_presegmented(rec.modern_seg, seq);
      std::vector<std::string> paragraph_doc;
      for (std::size_t c = 0; c < seq.clauses.size(); ++c) {
        std::vector<std::string> clause_doc;
        if (!rec.modern_seg.empty()) {
          for (const std::u32string& w : words[c])
            clause_doc.push_back(ca::encode_utf8(w));
        } else {
          clause_doc = segmenter.segment(seq.clauses[c].text);
        }
        if (unit == "modern-clause")
          docs.push_back(std::move(clause_doc));
        else
          paragraph_doc.insert(paragraph_doc.end(), clause_doc.begin(),
                               clause_doc.end());
      }
      if (unit == "modern-paragraph") docs.push_back(std::move(paragraph_doc));
    } catch (const std::exception&) {
      // unreportable here; the aligner surfaces the per-record error
    }
  }
  if (docs.empty()) docs.push_back({});
  return docs;
}

void report_record_errors(const std::vector<std::string>& errors) {
  for (const std::string& e : errors) std::cerr << "error: " << e << "\n";
}

int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// --- subcommands -------------------------------------------------------------

int cmd_split_clauses(const CorpusInputOpts& input, const std::string& out_path,
                      const std::string& delimiters, std::string manifest_path) {
  ca::RunManifest manifest;
  manifest.subcommand = "split-clauses";
  manifest.started_at = ca::iso8601_utc_now();
  manifest.inputs = input.paths();
  manifest.outputs = {out_path};
  manifest.options["delimiters"] = delimiters;

  const ca::DelimiterSet delims(delimiters);
  ca::CorpusLoadResult loaded = input.load_lenient();
  report_record_errors(loaded.errors);
  std::size_t failures = loaded.errors.size();

  std::ofstream out = open_output(out_path);
  for (const ca::CorpusRecord& rec : loaded.records) {
    try {
      const ca::ClauseSeq ancient =
          ca::split_clauses(rec.ancient, ca::LanguageTag::ancient, delims);
      const ca::ClauseSeq modern =
          ca::split_clauses(rec.modern, ca::LanguageTag::modern, delims);
      nlohmann::json obj;
      obj["article_id"] = rec.article_id;
      obj["paragraph_id"] = rec.paragraph_id;
      obj["ancient"] = ca::clause_seq_to_json(ancient);
      obj["modern"] = ca::clause_seq_to_json(modern);
      out << obj.dump() << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error: record " << rec.key() << ": " << e.what() << "\n";
      ++failures;
    }
  }
  out.close();
  manifest.finished_at = ca::iso8601_utc_now();
  if (manifest_path.empty()) manifest_path = out_path + ".manifest.json";
  ca::write_manifest(manifest_path, manifest);
  return failures == 0 ? kExitOk : kExitPartial;
}

int cmd_estimate(const CorpusInputOpts& input, const std::string& gold_path,
                 const std::string& out_path, double beta, double gamma,
                 double lambda, double eps, std::string manifest_path) {
  ca::RunManifest manifest;
  manifest.subcommand = "estimate";
  manifest.started_at = ca::iso8601_utc_now();
  manifest.inputs = input.paths();
  manifest.inputs.push_back(gold_path);
  manifest.outputs = {out_path};

  const std::vector<ca::CorpusRecord> records = input.load_strict();
  const std::vector<ca::CorpusAlignment> gold = ca::read_alignment_jsonl(gold_path);
  std::vector<ca::AlignedPair> gold_pairs;
  for (const ca::CorpusAlignment& g : gold)
    gold_pairs.insert(gold_pairs.end(), g.pairs.begin(), g.pairs.end());

  ca::AlignmentConfig cfg;
  cfg.beta = beta;
  cfg.gamma = gamma;
  cfg.lambda = lambda;
  cfg.length = ca::estimate_length_model(records);
  cfg.mode_probs = ca::estimate_mode_probs(gold_pairs, eps);
  cfg.validate();
  ca::write_config(out_path, cfg);

  std::cerr << "estimated mu=" << format_num(cfg.length.mu)
            << " sigma=" << format_num(cfg.length.sigma) << " from "
            << records.size() << " paragraphs, mode priors from "
            << gold_pairs.size() << " gold pairs\n";
  manifest.options["beta"] = format_num(beta);
  manifest.options["gamma"] = format_num(gamma);
  manifest.options["lambda"] = format_num(lambda);
  manifest.options["eps"] = format_num(eps);
  manifest.options["mu"] = format_num(cfg.length.mu);
  manifest.options["sigma"] = format_num(cfg.length.sigma);
  manifest.finished_at = ca::iso8601_utc_now();
  if (manifest_path.empty()) manifest_path = out_path + ".manifest.json";
  ca::write_manifest(manifest_path, manifest);
  return kExitOk;
}

int cmd_align(const CorpusInputOpts& input, const ConfigOpts& config_opts,
              const LexiconOpts& lexicon_opts, const ScorerFlagOpts& scorer_opts,
              const std::string& out_path, const std::string& delimiters,
              int jobs, std::string manifest_path) {
  ca::RunManifest manifest;
  manifest.subcommand = "align";
  manifest.started_at = ca::iso8601_utc_now();
  manifest.inputs = input.paths();
  manifest.outputs = {out_path};
  manifest.options["delimiters"] = delimiters;
  manifest.options["jobs"] = std::to_string(jobs);
  manifest.options["idf_unit"] = lexicon_opts.idf_unit;
  if (!lexicon_opts.dict_path.empty())
    manifest.options["dict"] = lexicon_opts.dict_path;
  if (!lexicon_opts.stopword_path.empty())
    manifest.options["stopwords"] = lexicon_opts.stopword_path;
  if (!lexicon_opts.wordlist_path.empty())
    manifest.options["wordlist"] = lexicon_opts.wordlist_path;

  const ca::AlignmentConfig cfg = config_opts.resolve(manifest.options);
  const ca::ScorerOptions scorer = scorer_opts.resolve(manifest.options);
  const ca::Lexicon lexicon = lexicon_opts.load_lexicon();
  const ca::MaxMatchSegmenter segmenter = lexicon_opts.load_segmenter();
  const ca::DelimiterSet delims(delimiters);

  ca::CorpusLoadResult loaded = input.load_lenient();
  report_record_errors(loaded.errors);
  std::size_t failures = loaded.errors.size();

  const ca::IdfTable idf = ca::build_idf(
      idf_documents(loaded.records, lexicon_opts.idf_unit, segmenter, delims));

  ca::AlignOptions align_opts;
  align_opts.scorer = scorer;
  align_opts.delimiters = delims;
  align_opts.jobs = jobs;
  align_opts.progress = [total = loaded.records.size()](std::size_t done) {
    std::fprintf(stderr, "aligned %zu/%zu paragraphs\n", done, total);
  };
  const std::vector<ca::CorpusAlignment> results =
      ca::align_corpus(loaded.records, cfg, lexicon, idf, segmenter, align_opts);

  std::ofstream out = open_output(out_path);
  ca::write_alignment_jsonl(out, results);
  out.close();
  for (const ca::CorpusAlignment& r : results) {
    if (!r.ok()) {
      std::cerr << "error: record " << r.article_id << "/" << r.paragraph_id
                << ": " << r.error << "\n";
      ++failures;
    }
  }
  std::cerr << "aligned " << (results.size() - failures) << "/"
            << loaded.records.size() << " paragraphs -> " << out_path << "\n";
  manifest.finished_at = ca::iso8601_utc_now();
  if (manifest_path.empty()) manifest_path = out_path + ".manifest.json";
  ca::write_manifest(manifest_path, manifest);
  return failures == 0 ? kExitOk : kExitPartial;
}

int cmd_augment(const CorpusInputOpts& input, const std::string& alignment_path,
                const std::string& out_path, int max_span, std::size_t max_len,
                bool filter_both, const std::string& delimiters,
                std::string manifest_path) {
  ca::RunManifest manifest;
  manifest.subcommand = "augment";
  manifest.started_at = ca::iso8601_utc_now();
  manifest.inputs = input.paths();
  manifest.inputs.push_back(alignment_path);
  manifest.outputs = {out_path};
  manifest.options["max_span"] = std::to_string(max_span);
  manifest.options["max_len"] = std::to_string(max_len);
  manifest.options["filter_both_sides"] = filter_both ? "true" : "false";
  manifest.options["delimiters"] = delimiters;

  const ca::DelimiterSet delims(delimiters);
  ca::CorpusLoadResult loaded = input.load_lenient();
  report_record_errors(loaded.errors);
  std::size_t failures = loaded.errors.size();
  std::map<std::string, const ca::CorpusRecord*> by_key;
  for (const ca::CorpusRecord& rec : loaded.records) by_key[rec.key()] = &rec;

  const std::vector<ca::CorpusAlignment> alignment =
      ca::read_alignment_jsonl(alignment_path);
  ca::AugmentOptions opts;
  opts.max_span = max_span;
  opts.max_len = max_len;
  opts.filter_both_sides = filter_both;

  std::ofstream out = open_output(out_path);
  for (const ca::CorpusAlignment& group : alignment) {
    const std::string key = group.article_id + "/" + group.paragraph_id;
    try {
      auto it = by_key.find(key);
      if (it == by_key.end())
        throw std::runtime_error("paragraph not present in corpus");
      const ca::ClauseSeq src =
          ca::split_clauses(it->second->ancient, ca::LanguageTag::ancient, delims);
      const ca::ClauseSeq tgt =
          ca::split_clauses(it->second->modern, ca::LanguageTag::modern, delims);
      for (const ca::AlignedPair& p : group.pairs) {
        for (int idx : p.src_indices)
          if (idx < 0 || static_cast<std::size_t>(idx) >= src.clauses.size())
            throw std::runtime_error("source clause index out of range");
        for (int idx : p.tgt_indices)
          if (idx < 0 || static_cast<std::size_t>(idx) >= tgt.clauses.size())
            throw std::runtime_error("target clause index out of range");
      }
      const std::vector<ca::SpanPair> spans = ca::augment_paragraph(
          group.pairs, src, tgt, group.article_id, group.paragraph_id, opts);
      ca::write_spans_jsonl(out, spans);
    } catch (const std::exception& e) {
      std::cerr << "error: record " << key << ": " << e.what() << "\n";
      ++failures;
    }
  }
  out.close();
  manifest.finished_at = ca::iso8601_utc_now();
  if (manifest_path.empty()) manifest_path = out_path + ".manifest.json";
  ca::write_manifest(manifest_path, manifest);
  return failures == 0 ? kExitOk : kExitPartial;
}

int cmd_split_dataset(const std::string& spans_path, const std::string& out_dir,
                      const std::string& ratios_text, std::uint64_t seed,
                      std::string manifest_path) {
  ca::RunManifest manifest;
  manifest.subcommand = "split-dataset";
  manifest.started_at = ca::iso8601_utc_now();
  manifest.inputs = {spans_path};
  manifest.has_seed = true;
  manifest.seed = seed;
  manifest.options["ratios"] = ratios_text;

  const std::vector<double> ratios = parse_double_list(ratios_text, "ratio");
  if (ratios.size() != 3)
    throw std::runtime_error("--ratios needs exactly three values");
  ca::SplitOptions opts;
  opts.ratios = {ratios[0], ratios[1], ratios[2]};
  opts.seed = seed;

  const std::vector<ca::SpanPair> spans = ca::read_spans_jsonl(spans_path);
  const ca::DatasetSplit split = ca::split_dataset(spans, opts);

  std::filesystem::create_directories(out_dir);
  const auto write_part = [&](const char* name, const std::vector<ca::SpanPair>& part) {
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    std::ofstream out = open_output(path);
    ca::write_spans_jsonl(out, part);
    manifest.outputs.push_back(path);
  };
  write_part("train.jsonl", split.train);
  write_part("dev.jsonl", split.dev);
  write_part("test.jsonl", split.test);
  std::cerr << "split " << spans.size() << " spans into " << split.train.size()
            << "/" << split.dev.size() << "/" << split.test.size() << "\n";
  manifest.finished_at = ca::iso8601_utc_now();
  if (manifest_path.empty())
    manifest_path = (std::filesystem::path(out_dir) / "manifest.json").string();
  ca::write_manifest(manifest_path, manifest);
  return kExitOk;
}

void emit_report(const std::string& out_path, const std::string& report,
                 ca::RunManifest& manifest, std::string manifest_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << report;
    if (!manifest_path.empty()) {
      manifest.finished_at = ca::iso8601_utc_now();
      ca::write_manifest(manifest_path, manifest);
    }
    return;
  }
  std::ofstream out = open_output(out_path);
  out << report;
  out.close();
  manifest.outputs.push_back(out_path);
  manifest.finished_at = ca::iso8601_utc_now();
  if (manifest_path.empty()) manifest_path = out_path + ".manifest.json";
  ca::write_manifest(manifest_path, manifest);
}

int cmd_eval_align(const std::string& predicted_path, const std::string& gold_path,
                   bool exclude_drops, const std::string& out_path,
                   const std::string& manifest_path) {
  ca::RunManifest manifest;
  manifest.subcommand = "eval-align";
  manifest.started_at = ca::iso8601_utc_now();
  manifest.inputs = {predicted_path, gold_path};
  manifest.options["exclude_drops"] = exclude_drops ? "true" : "false";

  const auto predicted = ca::read_alignment_jsonl(predicted_path);
  const auto gold = ca::read_alignment_jsonl(gold_path);
  const ca::PRF prf = ca::alignment_prf(predicted, gold, !exclude_drops);
  std::ostringstream report;
  report << "precision\trecall\tf1\tn_predicted\tn_gold\tn_correct\n"
         << format_num(prf.precision) << "\t" << format_num(prf.recall) << "\t"
         << format_num(prf.f1) << "\t" << prf.n_predicted << "\t" << prf.n_gold
         << "\t" << prf.n_correct << "\n";
  emit_report(out_path, report.str(), manifest, manifest_path);
  return kExitOk;
}

std::vector<std::vector<std::string>> load_segments(const std::string& path,
                                                    const std::string& tokens) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::vector<std::string>> segments;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      ca::detail::strip_bom(line);
      first = false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> seg;
    if (tokens == "whitespace") {
      seg = ca::detail::split_ws_tokens(line);
    } else {
      for (char32_t cp : ca::decode_utf8(line))
        if (!ca::is_space_cp(cp)) seg.push_back(ca::encode_utf8(cp));
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

int cmd_eval_bleu(const std::string& hyp_path, const std::string& ref_path,
                  const std::string& tokens, const std::string& out_path,
                  const std::string& manifest_path) {
  ca::RunManifest manifest;
  manifest.subcommand = "eval-bleu";
  manifest.started_at = ca::iso8601_utc_now();
  manifest.inputs = {hyp_path, ref_path};
  manifest.options["tokens"] = tokens;

  const auto hyp = load_segments(hyp_path, tokens);
  const auto ref = load_segments(ref_path, tokens);
  const ca::BleuReport r = ca::bleu(hyp, ref);
  std::ostringstream report;
  report << "bleu1\tbleu2\tbleu3\tbleu4\tbrevity_penalty\thyp_len\tref_len\n"
         << format_num(r.bleu[0]) << "\t" << format_num(r.bleu[1]) << "\t"
         << format_num(r.bleu[2]) << "\t" << format_num(r.bleu[3]) << "\t"
         << format_num(r.brevity_penalty) << "\t" << r.hyp_len << "\t"
         << r.ref_len << "\n";
  emit_report(out_path, report.str(), manifest, manifest_path);
  return kExitOk;
}

int cmd_grid_search(const CorpusInputOpts& input, const std::string& gold_path,
                    const ConfigOpts& config_opts, const LexiconOpts& lexicon_opts,
                    const std::string& beta_grid, const std::string& gamma_grid,
                    const std::string& lambda_grid, const std::string& out_path,
                    const std::string& best_out, bool exclude_drops,
                    bool estimate_base, double eps, const std::string& delimiters,
                    int jobs, std::string manifest_path) {
  ca::RunManifest manifest;
  manifest.subcommand = "grid-search";
  manifest.started_at = ca::iso8601_utc_now();
  manifest.inputs = input.paths();
  manifest.inputs.push_back(gold_path);
  manifest.outputs = {out_path};
  manifest.options["beta_grid"] = beta_grid;
  manifest.options["gamma_grid"] = gamma_grid;
  manifest.options["lambda_grid"] = lambda_grid;
  manifest.options["exclude_drops"] = exclude_drops ? "true" : "false";
  manifest.options["jobs"] = std::to_string(jobs);
  manifest.options["idf_unit"] = lexicon_opts.idf_unit;

  const std::vector<ca::CorpusRecord> records = input.load_strict();
  const std::vector<ca::CorpusAlignment> gold = ca::read_alignment_jsonl(gold_path);

  ca::AlignmentConfig base = config_opts.resolve(manifest.options);
  if (estimate_base) {
    std::vector<ca::AlignedPair> gold_pairs;
    for (const ca::CorpusAlignment& g : gold)
      gold_pairs.insert(gold_pairs.end(), g.pairs.begin(), g.pairs.end());
    base.length = ca::estimate_length_model(records);
    base.mode_probs = ca::estimate_mode_probs(gold_pairs, eps);
    manifest.options["estimate"] = "true";
    manifest.options["mu"] = format_num(base.length.mu);
    manifest.options["sigma"] = format_num(base.length.sigma);
  }

  const ca::Lexicon lexicon = lexicon_opts.load_lexicon();
  const ca::MaxMatchSegmenter segmenter = lexicon_opts.load_segmenter();
  const ca::DelimiterSet delims(delimiters);
  const ca::IdfTable idf = ca::build_idf(
      idf_documents(records, lexicon_opts.idf_unit, segmenter, delims));

  ca::AlignOptions align_opts;
  align_opts.delimiters = delims;
  align_opts.jobs = jobs;
  const ca::GridSearchResult result = ca::grid_search(
      records, gold, parse_double_list(beta_grid, "beta"),
      parse_double_list(gamma_grid, "gamma"),
      parse_double_list(lambda_grid, "lambda"), base, lexicon, idf, segmenter,
      align_opts, !exclude_drops);

  std::ofstream out = open_output(out_path);
  out << "beta\tgamma\tlambda\tf1\tprecision\n";
  for (const ca::GridPoint& p : result.table) {
    out << format_num(p.beta) << "\t" << format_num(p.gamma) << "\t"
        << format_num(p.lambda) << "\t";
    if (p.failed) {
      out << "NA\tNA\n";
      std::cerr << "grid point beta=" << format_num(p.beta)
                << " gamma=" << format_num(p.gamma)
                << " lambda=" << format_num(p.lambda) << " failed: " << p.error
                << "\n";
    } else {
      out << format_num(p.prf.f1) << "\t" << format_num(p.prf.precision) << "\n";
    }
  }
  out.close();
  std::cerr << "best: beta=" << format_num(result.best_config.beta)
            << " gamma=" << format_num(result.best_config.gamma)
            << " lambda=" << format_num(result.best_config.lambda)
            << " f1=" << format_num(result.best_prf.f1) << "\n";
  if (!best_out.empty()) {
    ca::write_config(best_out, result.best_config);
    manifest.outputs.push_back(best_out);
  }
  manifest.finished_at = ca::iso8601_utc_now();
  if (manifest_path.empty()) manifest_path = out_path + ".manifest.json";
  ca::write_manifest(manifest_path, manifest);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clause alignment toolkit for paragraph-aligned bilingual text"};
  app.set_version_flag("--version",
                       std::string(ca::kToolName) + " " + ca::kVersion);
  app.require_subcommand(1);

  const std::string default_delims(ca::DelimiterSet::kDefault);

  // split-clauses
  auto* sc = app.add_subcommand("split-clauses",
                                "split corpus paragraphs into clauses");
  CorpusInputOpts sc_input;
  sc_input.attach(sc);
  std::string sc_out, sc_delims = default_delims, sc_manifest;
  sc->add_option("--out", sc_out, "clause-split corpus, JSON Lines")->required();
  sc->add_option("--delimiters", sc_delims, "clause delimiter characters");
  sc->add_option("--manifest", sc_manifest, "manifest path");

  // estimate
  auto* es = app.add_subcommand(
      "estimate", "estimate length model and mode priors, write a config");
  CorpusInputOpts es_input;
  es_input.attach(es);
  std::string es_gold, es_out, es_manifest;
  double es_beta = 5.0, es_gamma = 0.05, es_lambda = 0.05, es_eps = 1e-4;
  es->add_option("--gold", es_gold, "gold clause alignment, JSON Lines")
      ->required()
      ->check(CLI::ExistingFile);
  es->add_option("--out", es_out, "config file to write")->required();
  es->add_option("--beta", es_beta, "beta to record (default 5)");
  es->add_option("--gamma", es_gamma, "gamma to record (default 0.05)");
  es->add_option("--lambda", es_lambda, "lambda to record (default 0.05)");
  es->add_option("--eps", es_eps, "prior floor for unseen modes (default 1e-4)");
  es->add_option("--manifest", es_manifest, "manifest path");

  // align
  auto* al = app.add_subcommand("align", "clause-align a corpus");
  CorpusInputOpts al_input;
  al_input.attach(al);
  ConfigOpts al_config;
  al_config.attach(al);
  LexiconOpts al_lexicon;
  al_lexicon.attach(al);
  ScorerFlagOpts al_scorer;
  al_scorer.attach(al);
  std::string al_out, al_delims = default_delims, al_manifest;
  int al_jobs = default_jobs();
  al->add_option("--out", al_out, "alignment output, JSON Lines")->required();
  al->add_option("--delimiters", al_delims, "clause delimiter characters");
  al->add_option("--jobs", al_jobs, "worker threads (default: logical cores)");
  al->add_option("--manifest", al_manifest, "manifest path");

  // augment
  auto* au = app.add_subcommand(
      "augment", "merge adjacent aligned pairs into sentence-level samples");
  CorpusInputOpts au_input;
  au_input.attach(au);
  std::string au_alignment, au_out, au_delims = default_delims, au_manifest;
  int au_max_span = 4;
  std::size_t au_max_len = 50;
  bool au_both = false;
  au->add_option("--alignment", au_alignment, "alignment file from 'align'")
      ->required()
      ->check(CLI::ExistingFile);
  au->add_option("--out", au_out, "augmented spans, JSON Lines")->required();
  au->add_option("--max-span", au_max_span, "widest run of pairs to merge (default 4)");
  au->add_option("--max-len", au_max_len,
                 "drop spans whose source exceeds this many characters (default 50)");
  au->add_flag("--filter-both-sides", au_both, "apply --max-len to both sides");
  au->add_option("--delimiters", au_delims, "clause delimiter characters");
  au->add_option("--manifest", au_manifest, "manifest path");

  // split-dataset
  auto* sd = app.add_subcommand("split-dataset",
                                "article-disjoint train/dev/test split");
  std::string sd_spans, sd_out_dir, sd_ratios = "0.8,0.1,0.1", sd_manifest;
  std::uint64_t sd_seed = 0;
  sd->add_option("--spans", sd_spans, "augmented spans, JSON Lines")
      ->required()
      ->check(CLI::ExistingFile);
  sd->add_option("--out-dir", sd_out_dir, "directory for train/dev/test.jsonl")
      ->required();
  sd->add_option("--ratios", sd_ratios, "train,dev,test shares (default 0.8,0.1,0.1)");
  sd->add_option("--seed", sd_seed, "shuffle seed (default 0)");
  sd->add_option("--manifest", sd_manifest, "manifest path");

  // eval-align
  auto* ea = app.add_subcommand("eval-align",
                                "precision/recall/F1 against a gold alignment");
  std::string ea_predicted, ea_gold, ea_out = "-", ea_manifest;
  bool ea_exclude = false;
  ea->add_option("--predicted", ea_predicted, "predicted alignment, JSON Lines")
      ->required()
      ->check(CLI::ExistingFile);
  ea->add_option("--gold", ea_gold, "gold alignment, JSON Lines")
      ->required()
      ->check(CLI::ExistingFile);
  ea->add_flag("--exclude-drops", ea_exclude, "ignore 1-0/0-1 pairs on both sides");
  ea->add_option("--out", ea_out, "report file ('-' for stdout)");
  ea->add_option("--manifest", ea_manifest, "manifest path");

  // eval-bleu
  auto* eb = app.add_subcommand("eval-bleu",
                                "cumulative 1-4 gram BLEU with brevity penalty");
  std::string eb_hyp, eb_ref, eb_tokens = "char", eb_out = "-", eb_manifest;
  eb->add_option("--hyp", eb_hyp, "hypothesis file, one segment per line")
      ->required()
      ->check(CLI::ExistingFile);
  eb->add_option("--ref", eb_ref, "reference file, one segment per line")
      ->required()
      ->check(CLI::ExistingFile);
  eb->add_option("--tokens", eb_tokens, "tokenization: char or whitespace")
      ->check(CLI::IsMember({"char", "whitespace"}));
  eb->add_option("--out", eb_out, "report file ('-' for stdout)");
  eb->add_option("--manifest", eb_manifest, "manifest path");

  // grid-search
  auto* gs = app.add_subcommand("grid-search",
                                "tune beta/gamma/lambda on a dev set");
  CorpusInputOpts gs_input;
  gs_input.attach(gs);
  ConfigOpts gs_config;
  gs_config.attach(gs);
  LexiconOpts gs_lexicon;
  gs_lexicon.attach(gs);
  std::string gs_gold, gs_out, gs_best, gs_beta = "3,5,10",
              gs_gamma = "0.03,0.05,0.1", gs_lambda = "0.03,0.05,0.1",
              gs_delims = default_delims, gs_manifest;
  bool gs_exclude = false, gs_estimate = false;
  double gs_eps = 1e-4;
  int gs_jobs = default_jobs();
  gs->add_option("--gold", gs_gold, "gold alignment for the dev corpus")
      ->required()
      ->check(CLI::ExistingFile);
  gs->add_option("--out", gs_out, "score table, TSV")->required();
  gs->add_option("--best-out", gs_best, "write the best config here");
  gs->add_option("--beta-grid", gs_beta, "comma-separated beta grid");
  gs->add_option("--gamma-grid", gs_gamma, "comma-separated gamma grid");
  gs->add_option("--lambda-grid", gs_lambda, "comma-separated lambda grid");
  gs->add_flag("--estimate", gs_estimate,
               "estimate mu/sigma from the corpus and priors from the gold "
               "before searching");
  gs->add_option("--eps", gs_eps, "prior floor when estimating (default 1e-4)");
  gs->add_flag("--exclude-drops", gs_exclude, "ignore 1-0/0-1 pairs in F1");
  gs->add_option("--delimiters", gs_delims, "clause delimiter characters");
  gs->add_option("--jobs", gs_jobs, "worker threads over grid points");
  gs->add_option("--manifest", gs_manifest, "manifest path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sc->parsed())
      return cmd_split_clauses(sc_input, sc_out, sc_delims, sc_manifest);
    if (es->parsed())
      return cmd_estimate(es_input, es_gold, es_out, es_beta, es_gamma,
                          es_lambda, es_eps, es_manifest);
    if (al->parsed())
      return cmd_align(al_input, al_config, al_lexicon, al_scorer, al_out,
                       al_delims, al_jobs, al_manifest);
    if (au->parsed())
      return cmd_augment(au_input, au_alignment, au_out, au_max_span,
                         au_max_len, au_both, au_delims, au_manifest);
    if (sd->parsed())
      return cmd_split_dataset(sd_spans, sd_out_dir, sd_ratios, sd_seed,
                               sd_manifest);
    if (ea->parsed())
      return cmd_eval_align(ea_predicted, ea_gold, ea_exclude, ea_out, ea_manifest);
    if (eb->parsed())
      return cmd_eval_bleu(eb_hyp, eb_ref, eb_tokens, eb_out, eb_manifest);
    if (gs->parsed())
      return cmd_grid_search(gs_input, gs_gold, gs_config, gs_lexicon, gs_beta,
                             gs_gamma, gs_lambda, gs_out, gs_best, gs_exclude,
                             gs_estimate, gs_eps, gs_delims, gs_jobs, gs_manifest);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
