#include "ldce/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "ldce/error.hpp"

namespace ldce {

const char* to_string(Provenance p) { return p == Provenance::clean ? "clean" : "noisy"; }

Vector encode_one_hot(int class_index, int class_count) {
  if (class_count < 1 || class_index < 0 || class_index >= class_count) {
    std::ostringstream msg;
    msg << "class index " << class_index << " outside [0, " << class_count << ")";
    throw RangeError(msg.str());
  }
  Vector y = Vector::Zero(class_count);
  y(class_index) = 1.0;
  return y;
}

Dataset::Dataset(Matrix features, std::vector<int> labels, int class_count,
                 Provenance provenance)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      class_count_(class_count),
      provenance_(provenance) {
  validate(*this);
}

Matrix Dataset::one_hot_labels() const {
  Matrix y = Matrix::Zero(size(), class_count_);
  for (Eigen::Index i = 0; i < size(); ++i) y(i, label(i)) = 1.0;
  return y;
}

Dataset Dataset::relabel(std::vector<int> labels, Provenance provenance) const {
  return Dataset(features_, std::move(labels), class_count_, provenance);
}

Dataset Dataset::with_class_count(int class_count) const {
  return Dataset(features_, labels_, class_count, provenance_);
}

Dataset Dataset::subset(std::span<const Eigen::Index> rows) const {
  Matrix x(static_cast<Eigen::Index>(rows.size()), dim());
  std::vector<int> y;
  y.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= size()) throw RangeError("subset row out of range");
    x.row(static_cast<Eigen::Index>(r)) = features_.row(rows[r]);
    y.push_back(label(rows[r]));
  }
  return Dataset(std::move(x), std::move(y), class_count_, provenance_);
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.class_count_ == b.class_count_ && a.provenance_ == b.provenance_ &&
         a.labels_ == b.labels_ && a.features_.rows() == b.features_.rows() &&
         a.features_.cols() == b.features_.cols() && a.features_ == b.features_;
}

void validate(const Dataset& ds) {
  if (ds.size() < 1) throw ValidationError("dataset must contain at least one example");
  if (ds.dim() < 1) throw ValidationError("dataset must have at least one feature");
  if (ds.class_count() < 2) throw ValidationError("dataset needs at least two classes");
  if (static_cast<Eigen::Index>(ds.labels().size()) != ds.size()) {
    throw ValidationError("label count does not match feature rows");
  }
  if (!ds.features().allFinite()) throw ValidationError("features contain non-finite values");
  for (std::size_t i = 0; i < ds.labels().size(); ++i) {
    const int y = ds.labels()[i];
    if (y < 0 || y >= ds.class_count()) {
      std::ostringstream msg;
      msg << "label " << y << " at row " << i << " outside [0, " << ds.class_count() << ")";
      throw ValidationError(msg.str());
    }
  }
}

void GaussianMixtureSpec::validate() const {
  if (class_count < 2) throw ValidationError("mixture needs at least two classes");
  if (dim < 1) throw ValidationError("mixture dimension must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be > 0");
  if (means.rows() != dim || means.cols() != class_count) {
    throw ValidationError("means must be dim x class_count");
  }
  if (!means.allFinite()) throw ValidationError("means contain non-finite values");
  if (static_cast<int>(weights.size()) != class_count) {
    throw ValidationError("weights must have one entry per class");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("weights must sum to 1");
}

Dataset gen_gaussian_mixture(const GaussianMixtureSpec& spec, Eigen::Index n) {
  spec.validate();
  if (n < 1) throw ValidationError("n must be at least 1");

  std::mt19937_64 class_rng(spec.seed);
  std::mt19937_64 feature_rng(spec.seed + kFeatureStreamOffset);
  std::discrete_distribution<int> pick(spec.weights.begin(), spec.weights.end());
  std::normal_distribution<double> noise(0.0, spec.sigma);

  Matrix x(n, spec.dim);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int k = pick(class_rng);
    y[static_cast<std::size_t>(i)] = k;
    for (int j = 0; j < spec.dim; ++j) x(i, j) = spec.means(j, k) + noise(feature_rng);
  }
  return Dataset(std::move(x), std::move(y), spec.class_count, Provenance::clean);
}

Matrix random_means(int class_count, int dim, double scale, std::uint64_t seed) {
  if (class_count < 1 || dim < 1) throw ValidationError("means need positive shape");
  std::mt19937_64 rng(seed + kMeanStreamOffset);
  std::normal_distribution<double> draw(0.0, 1.0);
  Matrix means(dim, class_count);
  // column-major fill: class by class
  for (int k = 0; k < class_count; ++k)
    for (int j = 0; j < dim; ++j) means(j, k) = scale * draw(rng);
  return means;
}

GaussianMixtureSpec default_mixture(int class_count, int dim, double sigma, double mean_scale,
                                    std::uint64_t seed) {
  GaussianMixtureSpec spec;
  spec.class_count = class_count;
  spec.dim = dim;
  spec.sigma = sigma;
  spec.seed = seed;
  spec.means = random_means(class_count, dim, mean_scale, seed);
  spec.weights.assign(static_cast<std::size_t>(class_count), 1.0 / class_count);
  return spec;
}

Standardizer Standardizer::fit(const Matrix& features) {
  if (features.rows() < 1) throw ValidationError("cannot standardize an empty matrix");
  Standardizer s;
  s.mean_ = features.colwise().mean().transpose();
  s.scale_ = Vector::Ones(features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const double var = (features.col(j).array() - s.mean_(j)).square().mean();
    if (var > 0.0) s.scale_(j) = std::sqrt(var);
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& features) const {
  if (features.cols() != mean_.size()) throw ValidationError("standardizer dimension mismatch");
  return ((features.rowwise() - mean_.transpose()).array().rowwise() /
          scale_.transpose().array())
      .matrix();
}

Dataset Standardizer::apply(const Dataset& ds) const {
  return Dataset(apply(ds.features()), ds.labels(), ds.class_count(), ds.provenance());
}

Split train_test_split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0, 1)");
  }
  const Eigen::Index n = ds.size();
  const auto n_train = static_cast<Eigen::Index>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) throw ValidationError("split leaves an empty partition");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::span<const Eigen::Index> all(order);
  return Split{ds.subset(all.first(static_cast<std::size_t>(n_train))),
               ds.subset(all.subspan(static_cast<std::size_t>(n_train)))};
}

}  // namespace ldce
