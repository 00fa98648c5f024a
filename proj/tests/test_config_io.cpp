#include "clausealign/config_io.hpp"

#include <catch_amalgamated.hpp>
#include <filesystem>
#include <sstream>

using namespace clausealign;

TEST_CASE("config round-trip preserves every value") {
  AlignmentConfig cfg;
  cfg.beta = 5.0;
  cfg.gamma = 0.05;
  cfg.lambda = 0.05;
  cfg.length = {0.6123456789, 0.2000000001};
  cfg.mode_probs = ModeProbs::defaults();
  cfg.mode_probs.set(AlignmentMode::m2_2, 1e-4);

  const auto path = std::filesystem::temp_directory_path() / "ca_cfg.conf";
  write_config(path.string(), cfg);
  const AlignmentConfig back = read_config(path.string());
  CHECK(back.beta == cfg.beta);
  CHECK(back.gamma == cfg.gamma);
  CHECK(back.lambda == cfg.lambda);
  CHECK(back.length.mu == cfg.length.mu);
  CHECK(back.length.sigma == cfg.length.sigma);
  for (AlignmentMode m : kAllModes)
    CHECK(back.mode_probs.get(m) == cfg.mode_probs.get(m));

  // serialization stays stable across write-read-write
  std::ostringstream first, second;
  first << serialize_config(cfg);
  second << serialize_config(back);
  CHECK(first.str() == second.str());
}

TEST_CASE("config parser diagnostics") {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test");
  };
  const std::string valid =
      "beta = 5\ngamma = 0.05\nlambda = 0.05\nmu = 0.6\nsigma = 0.2\n"
      "p_1_0 = 0.01\np_0_1 = 0.01\np_1_1 = 0.9\np_1_2 = 0.03\np_2_1 = 0.03\n"
      "p_2_2 = 0.02\n";
  CHECK(parse(valid).beta == 5.0);
  CHECK_THROWS_WITH(parse(valid + "bogus = 1\n"),
                    Catch::Matchers::ContainsSubstring("unknown config key"));
  CHECK_THROWS_WITH(parse("beta = 5\n"),
                    Catch::Matchers::ContainsSubstring("missing config key"));
  CHECK_THROWS_WITH(parse(valid + "beta = 6\n"),
                    Catch::Matchers::ContainsSubstring("duplicate key"));
  CHECK_THROWS_WITH(parse("beta five\n" + valid),
                    Catch::Matchers::ContainsSubstring("key = value"));
  std::string bad_sigma = valid;
  bad_sigma.replace(bad_sigma.find("sigma = 0.2"), 11, "sigma = 0.0");
  CHECK_THROWS_WITH(parse(bad_sigma),
                    Catch::Matchers::ContainsSubstring("sigma"));
  // comments and blank lines are fine
  CHECK(parse("# comment\n\n" + valid).length.mu == 0.6);
}
