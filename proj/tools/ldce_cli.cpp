// ldce: generate mixtures, corrupt labels, train centroid-corrected linear
// classifiers and run multi-trial experiments.
//
// Exit codes: 0 success, 1 runtime/validation failure, 2 usage failure.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldce/centroid.hpp"
#include "ldce/config.hpp"
#include "ldce/data.hpp"
#include "ldce/error.hpp"
#include "ldce/eval.hpp"
#include "ldce/io.hpp"
#include "ldce/noise.hpp"
#include "ldce/risk.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  int classes = 0;
  int dim = 0;
  long long n = 0;
  double sigma = 1.0;
  double mean_scale = 1.0;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::string out;
};

struct CorruptOptions {
  std::string in;
  std::string noise;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string t_out;
  std::optional<int> classes;
};

struct TrainOptions {
  std::string train;
  std::string t;
  std::string test;
  std::string mode = "paper-m";
  std::string solver = "closed";
  double lambda = 1e-3;
  std::string out_model;
  std::string out_metrics;
  std::uint64_t seed = 0;
  ldce::IterativeSettings iterative;
};

struct ExperimentOptions {
  std::string config;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string out_json = "report.json";
  std::string out_csv = "report.csv";
};

void run_gen(const GenOptions& o) {
  ldce::GaussianMixtureSpec spec;
  try {
    spec = ldce::default_mixture(o.classes, o.dim, o.sigma, o.mean_scale, o.seed);
    if (!o.weights.empty()) spec.weights = o.weights;
    spec.validate();
    if (o.n < 1) throw ldce::ValidationError("--n must be >= 1");
  } catch (const ldce::ValidationError& e) {
    throw UsageError(e.what());
  }
  const ldce::Dataset ds = ldce::gen_gaussian_mixture(spec, o.n);
  ldce::io::save_csv(ds, o.out);
  std::cout << "seed=" << o.seed << " n=" << ds.size() << " d=" << ds.dim()
            << " c=" << ds.class_count() << " out=" << o.out << "\n";
}

void run_corrupt(const CorruptOptions& o) {
  // Rate and kind problems are usage errors; check them before touching files.
  ldce::NoiseSpec spec;
  try {
    spec.kind = ldce::parse_noise_kind(o.noise);
    if (spec.kind == ldce::NoiseKind::explicit_matrix) {
      throw ldce::ValidationError("corrupt supports --noise symmetric|pairflip");
    }
    spec.rate = o.rate;
    spec.seed = o.seed;
    spec.validate();
  } catch (const ldce::ValidationError& e) {
    throw UsageError(e.what());
  }

  const ldce::Dataset clean = ldce::io::load_csv(o.in, o.classes);
  const ldce::TransitionMatrix t = ldce::make_transition(spec, clean.class_count());
  const ldce::Dataset noisy = ldce::inject_noise(clean, t, o.seed);
  ldce::io::save_csv(noisy, o.out);
  ldce::io::save_matrix_csv(t.matrix(), o.t_out);

  Eigen::Index flipped = 0;
  for (Eigen::Index i = 0; i < clean.size(); ++i) flipped += clean.label(i) != noisy.label(i);
  std::cout << "seed=" << o.seed << " n=" << noisy.size() << " c=" << noisy.class_count()
            << " noise=" << o.noise << " rate=" << o.rate << " flipped=" << flipped
            << " out=" << o.out << " t_out=" << o.t_out << "\n";
}

void run_train(const TrainOptions& o) {
  std::optional<ldce::CorrectionMode> mode;
  if (o.mode != "none") {
    try {
      mode = ldce::parse_correction_mode(o.mode);
    } catch (const ldce::ValidationError& e) {
      throw UsageError(e.what());
    }
    if (o.t.empty()) throw UsageError("--mode " + o.mode + " requires --t");
  }

  ldce::Dataset train = ldce::io::load_csv(o.train);
  std::optional<ldce::TransitionMatrix> t;
  if (!o.t.empty()) {
    t = ldce::TransitionMatrix(ldce::io::load_matrix_csv(o.t));
    if (train.class_count() > t->class_count()) {
      throw ldce::ValidationError("training labels reach class " +
                                  std::to_string(train.class_count() - 1) + " but T is " +
                                  std::to_string(t->class_count()) + "x" +
                                  std::to_string(t->class_count()));
    }
    train = train.with_class_count(t->class_count());
  }

  ldce::RiskConfig cfg;
  cfg.lambda = o.lambda;
  cfg.correction = mode;
  cfg.trainer = ldce::parse_trainer(o.solver);
  cfg.iterative = o.iterative;
  cfg.seed = o.seed;
  cfg.validate();

  const ldce::Vector freqs = ldce::noisy_label_frequencies(train);
  const ldce::Centroid noisy_mu = ldce::empirical_centroid(train);
  ldce::Centroid mu = noisy_mu;
  std::optional<ldce::ClassPriors> priors;
  if (t) priors = ldce::estimate_priors(*t, freqs);
  if (mode) mu = ldce::correct_centroid(noisy_mu, *t, *priors, *mode);

  const ldce::LinearModel model = ldce::train(train.features(), mu, cfg);
  const double objective = ldce::objective(model, train.features(), mu, cfg.lambda);

  std::ostringstream header;
  header << "d=" << model.dim() << ",c=" << model.class_count() << ",lambda=" << cfg.lambda
         << ",mode=" << o.mode;
  ldce::io::save_matrix_csv(model.weights(), o.out_model, header.str());

  nlohmann::json metrics;
  metrics["seed"] = o.seed;
  metrics["mode"] = o.mode;
  metrics["solver"] = ldce::to_string(cfg.trainer);
  metrics["lambda"] = cfg.lambda;
  metrics["n"] = train.size();
  metrics["d"] = train.dim();
  metrics["c"] = train.class_count();
  metrics["objective"] = objective;
  metrics["noisy_frequencies"] = std::vector<double>(freqs.data(), freqs.data() + freqs.size());
  if (priors) {
    const auto& p = priors->values();
    metrics["priors"] = std::vector<double>(p.data(), p.data() + p.size());
  }
  if (!o.test.empty()) {
    const ldce::Dataset test = ldce::io::load_csv(o.test, train.class_count());
    metrics["test_accuracy"] = ldce::accuracy(model, test);
  }
  ldce::io::write_file(o.out_metrics, metrics.dump(2) + "\n");

  std::cout << "seed=" << o.seed << " mode=" << o.mode << " solver=" << ldce::to_string(cfg.trainer)
            << " objective=" << objective;
  if (metrics.contains("test_accuracy")) std::cout << " test_accuracy=" << metrics["test_accuracy"];
  std::cout << "\n";
}

void run_experiment_cmd(const ExperimentOptions& o) {
  ldce::KeyValues kv = ldce::load_key_values(o.config);
  for (const auto& item : o.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (o.trials) kv["trials"] = std::to_string(*o.trials);
  if (o.seed) kv["seed"] = std::to_string(*o.seed);

  const ldce::ExperimentConfig cfg = ldce::experiment_from_keys(kv);
  std::cout << "seed=" << cfg.seed << " trials=" << cfg.trials << "\n";
  const ldce::ExperimentReport report = ldce::run_experiment(cfg);
  ldce::emit_report(report, ldce::ReportFormat::json, o.out_json);
  ldce::emit_report(report, ldce::ReportFormat::csv, o.out_csv);

  for (const auto& arm : report.arms) {
    std::cout << ldce::to_string(arm.arm) << " mean=" << arm.mean << " std=" << arm.stddev
              << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label-noise robust linear classification with centroid correction", "ldce"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a Gaussian-mixture dataset as CSV");
  gen_cmd->add_option("--classes", gen.classes, "Number of classes")->required();
  gen_cmd->add_option("--dim", gen.dim, "Feature dimension")->required();
  gen_cmd->add_option("--n", gen.n, "Number of examples")->required();
  gen_cmd->add_option("--sigma", gen.sigma, "Isotropic standard deviation");
  gen_cmd->add_option("--mean-scale", gen.mean_scale, "Scale of the random class means");
  gen_cmd->add_option("--weights", gen.weights, "Class sampling weights")->delimiter(',');
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Output CSV")->required();

  CorruptOptions corrupt;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Inject label noise into a clean CSV");
  corrupt_cmd->add_option("--in", corrupt.in, "Clean dataset CSV")->required();
  corrupt_cmd->add_option("--noise", corrupt.noise, "symmetric|pairflip")->required();
  corrupt_cmd->add_option("--rate", corrupt.rate, "Noise rate")->required();
  corrupt_cmd->add_option("--seed", corrupt.seed, "Random seed");
  corrupt_cmd->add_option("--classes", corrupt.classes, "Class count (default: max label + 1)");
  corrupt_cmd->add_option("--out", corrupt.out, "Noisy dataset CSV")->required();
  corrupt_cmd->add_option("--t-out", corrupt.t_out, "Transition matrix CSV")->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a corrected linear classifier");
  train_cmd->add_option("--train", train.train, "Noisy training CSV")->required();
  train_cmd->add_option("--t", train.t, "Transition matrix CSV");
  train_cmd->add_option("--test", train.test, "Clean test CSV for evaluation");
  train_cmd->add_option("--mode", train.mode, "paper-m|direct-t|none")
      ->check(CLI::IsMember({"paper-m", "direct-t", "none"}));
  train_cmd->add_option("--solver", train.solver, "closed|iterative")
      ->check(CLI::IsMember({"closed", "iterative"}));
  train_cmd->add_option("--lambda", train.lambda, "Ridge coefficient")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--seed", train.seed, "Seed for the iterative solver");
  train_cmd->add_option("--step-size", train.iterative.step_size, "Initial step size");
  train_cmd->add_option("--momentum", train.iterative.momentum, "Heavy-ball coefficient");
  train_cmd->add_option("--epochs", train.iterative.epochs, "Epochs");
  train_cmd->add_option("--batch-size", train.iterative.batch_size, "Mini-batch size");
  train_cmd->add_option("--decay-start", train.iterative.decay_start, "Epoch where linear decay starts");
  train_cmd->add_option("--out-model", train.out_model, "Model CSV")->required();
  train_cmd->add_option("--out-metrics", train.out_metrics, "Metrics JSON")->required();

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a multi-trial, multi-arm experiment");
  exp_cmd->add_option("--config", exp.config, "Experiment config (key = value)")->required();
  exp_cmd->add_option("--trials", exp.trials, "Override the trial count");
  exp_cmd->add_option("--seed", exp.seed, "Override the base seed");
  exp_cmd->add_option("--set", exp.overrides, "Override any config key: key=value");
  exp_cmd->add_option("--out-json", exp.out_json, "JSON report path");
  exp_cmd->add_option("--out-csv", exp.out_csv, "CSV report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) run_gen(gen);
    if (*corrupt_cmd) run_corrupt(corrupt);
    if (*train_cmd) run_train(train);
    if (*exp_cmd) run_experiment_cmd(exp);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
