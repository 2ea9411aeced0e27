#include <doctest.h>

#include <ldce/config.hpp>
#include <ldce/error.hpp>

using namespace ldce;

TEST_CASE("parse_key_values") {
  const KeyValues kv = parse_key_values("# comment\nseed = 4  # trailing\n\ntrials=2\n");
  CHECK(kv.at("seed") == "4");
  CHECK(kv.at("trials") == "2");
  CHECK_THROWS_AS(parse_key_values("seed 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("seed = 1\nseed = 2\n"), ConfigError);
}

TEST_CASE("experiment_from_keys") {
  const ExperimentConfig cfg = experiment_from_keys(parse_key_values(
      "seed = 9\ntrials = 2\nclasses = 5\ndim = 3\nnoise = pairflip\nrate = 0.25\n"
      "solver = iterative\nepochs = 7\narms = naive_noisy, clean_oracle\n"));
  CHECK(cfg.seed == 9);
  CHECK(cfg.trials == 2);
  CHECK(std::get<GeneratorSource>(cfg.source).class_count == 5);
  CHECK(cfg.noise.kind == NoiseKind::pairflip);
  CHECK(cfg.noise.rate == 0.25);
  CHECK(cfg.risk.trainer == Trainer::iterative);
  CHECK(cfg.risk.iterative.epochs == 7);
  CHECK(cfg.arms == std::vector<Arm>{Arm::naive_noisy, Arm::clean_oracle});

  const KeyValues echo = echo_config(cfg);
  CHECK(echo.at("rate") == "0.25");
  CHECK(echo.at("noise") == "pairflip");
  CHECK(experiment_from_keys(echo).noise.rate == 0.25);
}

TEST_CASE("config errors list every offending key") {
  try {
    experiment_from_keys(parse_key_values("bogus = 1\nalso_bogus = 2\n"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("bogus") != std::string::npos);
    CHECK(what.find("also_bogus") != std::string::npos);
  }
  try {
    experiment_from_keys(parse_key_values("trials = x\nrate = y\n"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("trials") != std::string::npos);
    CHECK(what.find("rate") != std::string::npos);
  }
  CHECK_THROWS_AS(experiment_from_keys(parse_key_values("noise = pairflip\nrate = 0.5\n")),
                  ConfigError);
  CHECK_THROWS_AS(experiment_from_keys(parse_key_values("trials = 0\n")), ConfigError);
  CHECK_THROWS_AS(experiment_from_keys(parse_key_values("source = csv\n")), ConfigError);
  CHECK_THROWS_AS(experiment_from_keys(parse_key_values("noise = explicit\n")), ConfigError);
}
