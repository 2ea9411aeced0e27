#include "ldce/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ldce/error.hpp"
#include "ldce/io.hpp"

namespace ldce {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text) {
  const std::string t = trim(text);
  T value{};
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (t.empty() || ec != std::errc() || ptr != end) throw std::invalid_argument(t);
  return value;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw std::invalid_argument(t);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(row) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(row) + ": empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ConfigError("line " + std::to_string(row) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

KeyValues load_key_values(const std::filesystem::path& path) {
  try {
    return parse_key_values(io::read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

const std::vector<std::string>& experiment_config_keys() {
  static const std::vector<std::string> keys = {
      "seed",       "trials",      "train_fraction", "standardize",  "arms",
      "source",     "classes",     "dim",            "n",            "sigma",
      "mean_scale", "weights",     "csv_path",       "csv_classes",  "idx_images",
      "idx_labels", "idx_classes", "noise",          "rate",         "transition_csv",
      "lambda",     "solver",      "step_size",      "momentum",     "epochs",
      "batch_size", "decay_start"};
  return keys;
}

ExperimentConfig experiment_from_keys(const KeyValues& kv) {
  const auto& allowed = experiment_config_keys();
  std::vector<std::string> unknown;
  for (const auto& [key, value] : kv) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) unknown.push_back(key);
  }
  if (!unknown.empty()) throw ConfigError("unknown config keys: " + join(unknown));

  ExperimentConfig cfg;
  std::vector<std::string> bad;
  auto get = [&](const std::string& key, auto&& apply) {
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    try {
      apply(it->second);
    } catch (const std::exception&) {
      bad.push_back(key + "='" + it->second + "'");
    }
  };

  get("seed", [&](const std::string& v) { cfg.seed = parse_number<std::uint64_t>(v); });
  get("trials", [&](const std::string& v) { cfg.trials = parse_number<int>(v); });
  get("train_fraction", [&](const std::string& v) { cfg.train_fraction = parse_number<double>(v); });
  get("standardize", [&](const std::string& v) { cfg.standardize = parse_bool(v); });
  get("arms", [&](const std::string& v) {
    cfg.arms.clear();
    for (const auto& a : split_list(v)) cfg.arms.push_back(parse_arm(a));
    if (cfg.arms.empty()) throw std::invalid_argument(v);
  });

  std::string source = "generator";
  get("source", [&](const std::string& v) {
    if (v != "generator" && v != "csv" && v != "idx") throw std::invalid_argument(v);
    source = v;
  });
  if (source == "generator") {
    GeneratorSource g;
    get("classes", [&](const std::string& v) { g.class_count = parse_number<int>(v); });
    get("dim", [&](const std::string& v) { g.dim = parse_number<int>(v); });
    get("n", [&](const std::string& v) { g.n = parse_number<Eigen::Index>(v); });
    get("sigma", [&](const std::string& v) { g.sigma = parse_number<double>(v); });
    get("mean_scale", [&](const std::string& v) { g.mean_scale = parse_number<double>(v); });
    get("weights", [&](const std::string& v) {
      if (trim(v) == "uniform") return;
      for (const auto& w : split_list(v)) g.weights.push_back(parse_number<double>(w));
    });
    cfg.source = g;
  } else if (source == "csv") {
    CsvSource c;
    get("csv_path", [&](const std::string& v) { c.path = v; });
    get("csv_classes", [&](const std::string& v) { c.class_count = parse_number<int>(v); });
    if (c.path.empty()) bad.push_back("csv_path (required for source=csv)");
    cfg.source = c;
  } else {
    IdxSource idx;
    get("idx_images", [&](const std::string& v) { idx.images = v; });
    get("idx_labels", [&](const std::string& v) { idx.labels = v; });
    get("idx_classes", [&](const std::string& v) { idx.class_count = parse_number<int>(v); });
    if (idx.images.empty() || idx.labels.empty()) {
      bad.push_back("idx_images/idx_labels (required for source=idx)");
    }
    cfg.source = idx;
  }

  get("noise", [&](const std::string& v) { cfg.noise.kind = parse_noise_kind(v); });
  get("rate", [&](const std::string& v) { cfg.noise.rate = parse_number<double>(v); });
  get("transition_csv", [&](const std::string& v) {
    cfg.noise.matrix = TransitionMatrix(io::load_matrix_csv(v));
  });
  if (cfg.noise.kind == NoiseKind::explicit_matrix && !cfg.noise.matrix &&
      !kv.contains("transition_csv")) {
    bad.push_back("transition_csv (required for noise=explicit)");
  }

  get("lambda", [&](const std::string& v) { cfg.risk.lambda = parse_number<double>(v); });
  get("solver", [&](const std::string& v) { cfg.risk.trainer = parse_trainer(v); });
  get("step_size", [&](const std::string& v) { cfg.risk.iterative.step_size = parse_number<double>(v); });
  get("momentum", [&](const std::string& v) { cfg.risk.iterative.momentum = parse_number<double>(v); });
  get("epochs", [&](const std::string& v) { cfg.risk.iterative.epochs = parse_number<int>(v); });
  get("batch_size", [&](const std::string& v) { cfg.risk.iterative.batch_size = parse_number<int>(v); });
  get("decay_start", [&](const std::string& v) { cfg.risk.iterative.decay_start = parse_number<int>(v); });

  if (!bad.empty()) throw ConfigError("invalid config values: " + join(bad));
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

KeyValues echo_config(const ExperimentConfig& config) {
  KeyValues kv;
  kv["seed"] = std::to_string(config.seed);
  kv["trials"] = std::to_string(config.trials);
  kv["train_fraction"] = format_double(config.train_fraction);
  kv["standardize"] = config.standardize ? "true" : "false";
  std::vector<std::string> arms;
  for (Arm a : config.arms) arms.emplace_back(to_string(a));
  kv["arms"] = join(arms);

  if (const auto* g = std::get_if<GeneratorSource>(&config.source)) {
    kv["source"] = "generator";
    kv["classes"] = std::to_string(g->class_count);
    kv["dim"] = std::to_string(g->dim);
    kv["n"] = std::to_string(g->n);
    kv["sigma"] = format_double(g->sigma);
    kv["mean_scale"] = format_double(g->mean_scale);
    std::vector<std::string> w;
    for (double x : g->weights) w.push_back(format_double(x));
    kv["weights"] = w.empty() ? "uniform" : join(w);
  } else if (const auto* c = std::get_if<CsvSource>(&config.source)) {
    kv["source"] = "csv";
    kv["csv_path"] = c->path.string();
    if (c->class_count) kv["csv_classes"] = std::to_string(*c->class_count);
  } else {
    const auto& idx = std::get<IdxSource>(config.source);
    kv["source"] = "idx";
    kv["idx_images"] = idx.images.string();
    kv["idx_labels"] = idx.labels.string();
    kv["idx_classes"] = std::to_string(idx.class_count);
  }

  kv["noise"] = to_string(config.noise.kind);
  kv["rate"] = format_double(config.noise.rate);
  kv["lambda"] = format_double(config.risk.lambda);
  kv["solver"] = to_string(config.risk.trainer);
  if (config.risk.trainer == Trainer::iterative) {
    const auto& it = config.risk.iterative;
    kv["step_size"] = format_double(it.step_size);
    kv["momentum"] = format_double(it.momentum);
    kv["epochs"] = std::to_string(it.epochs);
    kv["batch_size"] = std::to_string(it.batch_size);
    kv["decay_start"] = std::to_string(it.decay_start);
  }
  return kv;
}

}  // namespace ldce
