#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ldce/data.hpp"
#include "ldce/noise.hpp"
#include "ldce/risk.hpp"

namespace ldce {

inline constexpr const char* kReportSchemaVersion = "ldce-report/1";

enum class Arm { corrected_paper_M, corrected_direct_T, naive_noisy, clean_oracle };

const char* to_string(Arm a);
Arm parse_arm(const std::string& s);
std::vector<Arm> all_arms();

// Fraction of examples whose predicted class equals the stored label.
double accuracy(const LinearModel& model, const Dataset& test);

struct GeneratorSource {
  int class_count = 4;
  int dim = 10;
  Eigen::Index n = 2000;
  double sigma = 1.0;
  double mean_scale = 1.0;
  std::vector<double> weights;  // empty = uniform
};

struct CsvSource {
  std::filesystem::path path;
  std::optional<int> class_count;
};

struct IdxSource {
  std::filesystem::path images;
  std::filesystem::path labels;
  int class_count = 10;
};

struct ExperimentConfig {
  std::variant<GeneratorSource, CsvSource, IdxSource> source = GeneratorSource{};
  NoiseSpec noise;
  RiskConfig risk;  // risk.correction is ignored; each arm sets its own
  int trials = 5;
  double train_fraction = 0.8;
  bool standardize = false;
  std::vector<Arm> arms = all_arms();
  std::uint64_t seed = 0;

  void validate() const;
};

struct ArmResult {
  Arm arm;
  std::vector<double> accuracies;  // one per trial
  double mean = 0.0;
  double stddev = 0.0;              // sample standard deviation, 0 for a single trial
  double seconds = 0.0;             // wall clock summed over trials; not deterministic

  friend bool operator==(const ArmResult&, const ArmResult&) = default;
};

struct ExperimentReport {
  std::map<std::string, std::string> config_echo;
  std::vector<ArmResult> arms;
  std::vector<std::vector<double>> priors;  // estimated priors, one vector per trial
  std::vector<double> centroid_gap;         // ||mu_paper_M - mu_direct_T||_F per trial

  const ArmResult* find(Arm a) const;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Seed of trial `index`; each trial draws data, split and noise from it.
std::uint64_t trial_seed(std::uint64_t base, int index);

/// Runs every trial: draw/load data, split, corrupt the training split only,
/// estimate priors from noisy label frequencies, correct the centroid, train
/// each enabled arm and score it on the untouched test split.
/// Errors are rethrown with the failing stage name prepended.
ExperimentReport run_experiment(const ExperimentConfig& config);

enum class ReportFormat { json, csv };

std::string report_to_json(const ExperimentReport& report, bool include_timing = true);
ExperimentReport report_from_json(const std::string& text);
// One row per (arm, trial): arm,trial,accuracy
std::string report_to_csv(const ExperimentReport& report);

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace ldce
