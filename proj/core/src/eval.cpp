#include "ldce/eval.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ldce/centroid.hpp"
#include "ldce/config.hpp"
#include "ldce/error.hpp"
#include "ldce/io.hpp"

namespace ldce {
namespace {

using json = nlohmann::json;

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Per-trial substreams.
enum StreamOffset : std::uint64_t { kData = 0, kSplit = 1, kNoise = 2, kTrainer = 3 };

void summarize(ArmResult& r) {
  const auto k = static_cast<double>(r.accuracies.size());
  double sum = 0.0;
  for (double a : r.accuracies) sum += a;
  r.mean = sum / k;
  double ss = 0.0;
  for (double a : r.accuracies) ss += (a - r.mean) * (a - r.mean);
  r.stddev = r.accuracies.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
}

}  // namespace

const char* to_string(Arm a) {
  switch (a) {
    case Arm::corrected_paper_M: return "corrected_paper_M";
    case Arm::corrected_direct_T: return "corrected_direct_T";
    case Arm::naive_noisy: return "naive_noisy";
    case Arm::clean_oracle: return "clean_oracle";
  }
  return "?";
}

Arm parse_arm(const std::string& s) {
  for (Arm a : all_arms()) {
    if (s == to_string(a)) return a;
  }
  throw ValidationError("unknown arm '" + s + "'");
}

std::vector<Arm> all_arms() {
  return {Arm::corrected_paper_M, Arm::corrected_direct_T, Arm::naive_noisy, Arm::clean_oracle};
}

double accuracy(const LinearModel& model, const Dataset& test) {
  if (model.dim() != test.dim()) throw ValidationError("model dimension does not match test set");
  const Matrix scores = test.features() * model.weights();
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < scores.cols(); ++k) {
      if (scores(i, k) > scores(i, best)) best = k;
    }
    if (best == test.label(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0, 1)");
  }
  if (arms.empty()) throw ValidationError("at least one arm must be enabled");
  noise.validate();
  risk.validate();
  if (const auto* g = std::get_if<GeneratorSource>(&source)) {
    if (g->n < 2) throw ValidationError("generator n must be >= 2");
  }
}

const ArmResult* ExperimentReport::find(Arm a) const {
  for (const auto& r : arms) {
    if (r.arm == a) return &r;
  }
  return nullptr;
}

std::uint64_t trial_seed(std::uint64_t base, int index) {
  return splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(index)));
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  run_stage("config", [&] { config.validate(); });

  // File sources are read once; generated sources draw fresh samples per trial
  // from a mixture whose means are fixed by the base seed.
  std::optional<Dataset> loaded;
  std::optional<GaussianMixtureSpec> mixture;
  run_stage("load", [&] {
    if (const auto* g = std::get_if<GeneratorSource>(&config.source)) {
      mixture = default_mixture(g->class_count, g->dim, g->sigma, g->mean_scale, config.seed);
      if (!g->weights.empty()) mixture->weights = g->weights;
      mixture->validate();
    } else if (const auto* c = std::get_if<CsvSource>(&config.source)) {
      loaded = io::load_csv(c->path, c->class_count);
    } else {
      const auto& idx = std::get<IdxSource>(config.source);
      loaded = io::load_idx(idx.images, idx.labels, idx.class_count);
    }
  });

  ExperimentReport report;
  report.config_echo = echo_config(config);
  for (Arm a : config.arms) report.arms.push_back(ArmResult{a, {}, 0.0, 0.0, 0.0});

  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t seed = trial_seed(config.seed, trial);

    Dataset data = run_stage("data", [&] {
      if (mixture) {
        GaussianMixtureSpec spec = *mixture;
        spec.seed = seed + kData;
        return gen_gaussian_mixture(spec, std::get<GeneratorSource>(config.source).n);
      }
      return *loaded;
    });

    Split split = run_stage("split", [&] {
      Split s = train_test_split(data, config.train_fraction, seed + kSplit);
      if (config.standardize) {
        const Standardizer z = Standardizer::fit(s.train.features());
        s = Split{z.apply(s.train), z.apply(s.test)};
      }
      return s;
    });

    const TransitionMatrix t =
        run_stage("noise", [&] { return make_transition(config.noise, data.class_count()); });
    const Dataset noisy = run_stage("noise", [&] { return inject_noise(split.train, t, seed + kNoise); });

    const ClassPriors priors = run_stage("priors", [&] {
      return estimate_priors(t, noisy_label_frequencies(noisy));
    });
    report.priors.emplace_back(priors.values().data(),
                               priors.values().data() + priors.values().size());

    const Centroid noisy_mu = empirical_centroid(noisy);
    const Centroid paper_mu = run_stage("centroid", [&] {
      return correct_centroid(noisy_mu, t, priors, CorrectionMode::paper_M);
    });
    const Centroid direct_mu = run_stage("centroid", [&] {
      return correct_centroid(noisy_mu, t, priors, CorrectionMode::direct_T);
    });
    report.centroid_gap.push_back((paper_mu - direct_mu).norm());

    RiskConfig risk = config.risk;
    risk.seed = seed + kTrainer;
    for (auto& result : report.arms) {
      const auto start = std::chrono::steady_clock::now();
      const Centroid* mu = nullptr;
      Centroid clean_mu;
      switch (result.arm) {
        case Arm::corrected_paper_M: mu = &paper_mu; break;
        case Arm::corrected_direct_T: mu = &direct_mu; break;
        case Arm::naive_noisy: mu = &noisy_mu; break;
        case Arm::clean_oracle:
          clean_mu = empirical_centroid(split.train);
          mu = &clean_mu;
          break;
      }
      const std::string stage = std::string("train[") + to_string(result.arm) + "]";
      const LinearModel model =
          run_stage(stage.c_str(), [&] { return train(split.train.features(), *mu, risk); });
      result.accuracies.push_back(accuracy(model, split.test));
      result.seconds +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  }

  for (auto& r : report.arms) summarize(r);
  return report;
}

std::string report_to_json(const ExperimentReport& report, bool include_timing) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config_echo"] = report.config_echo;
  j["arms"] = json::array();
  for (const auto& r : report.arms) {
    j["arms"].push_back({{"name", to_string(r.arm)},
                         {"trials", r.accuracies},
                         {"mean", r.mean},
                         {"std", r.stddev}});
  }
  j["priors"] = report.priors;
  j["centroid_gap"] = report.centroid_gap;
  if (include_timing) {
    json timing = json::object();
    for (const auto& r : report.arms) timing[to_string(r.arm)] = r.seconds;
    j["timing"] = timing;
  }
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report json: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<std::string>() != kReportSchemaVersion) {
      throw ParseError("unsupported report schema " + j.at("schema_version").get<std::string>());
    }
    ExperimentReport report;
    report.config_echo = j.at("config_echo").get<std::map<std::string, std::string>>();
    for (const auto& a : j.at("arms")) {
      ArmResult r;
      r.arm = parse_arm(a.at("name").get<std::string>());
      r.accuracies = a.at("trials").get<std::vector<double>>();
      r.mean = a.at("mean").get<double>();
      r.stddev = a.at("std").get<double>();
      if (j.contains("timing")) r.seconds = j["timing"].value(to_string(r.arm), 0.0);
      report.arms.push_back(std::move(r));
    }
    report.priors = j.at("priors").get<std::vector<std::vector<double>>>();
    report.centroid_gap = j.at("centroid_gap").get<std::vector<double>>();
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report json: ") + e.what());
  }
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "arm,trial,accuracy\n";
  for (const auto& r : report.arms) {
    for (std::size_t t = 0; t < r.accuracies.size(); ++t) {
      out << to_string(r.arm) << ',' << t << ',' << r.accuracies[t] << '\n';
    }
  }
  return out.str();
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  io::write_file(path, format == ReportFormat::json ? report_to_json(report)
                                                    : report_to_csv(report));
}

}  // namespace ldce
