#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ldce {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Provenance { clean, noisy };

const char* to_string(Provenance p);

/// Length-c indicator vector with a single 1 at `class_index`.
/// Throws RangeError when the index is outside [0, c).
Vector encode_one_hot(int class_index, int class_count);

/// A labelled sample set.
///
/// Labels are stored as class ids, which makes every row of the one-hot label
/// matrix valid by construction; `one_hot_labels()` materialises the n x c form.
/// The constructor validates the remaining invariants: n >= 1, d >= 1, c >= 2,
/// finite features, labels in [0, c).
class Dataset {
 public:
  Dataset(Matrix features, std::vector<int> labels, int class_count,
          Provenance provenance = Provenance::clean);

  const Matrix& features() const noexcept { return features_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  int label(Eigen::Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  int class_count() const noexcept { return class_count_; }
  Provenance provenance() const noexcept { return provenance_; }

  Eigen::Index size() const noexcept { return features_.rows(); }
  Eigen::Index dim() const noexcept { return features_.cols(); }

  Matrix one_hot_labels() const;

  // Same features, new labels / provenance.
  Dataset relabel(std::vector<int> labels, Provenance provenance) const;
  Dataset with_class_count(int class_count) const;
  // Rows picked by index, in the given order.
  Dataset subset(std::span<const Eigen::Index> rows) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  Matrix features_;
  std::vector<int> labels_;
  int class_count_;
  Provenance provenance_;
};

// Re-checks every Dataset invariant; throws ValidationError on the first violation.
void validate(const Dataset& ds);

struct GaussianMixtureSpec {
  int class_count = 2;
  int dim = 1;
  Matrix means;                 // dim x class_count, column k is the mean of class k
  double sigma = 1.0;           // shared isotropic standard deviation
  std::vector<double> weights;  // class sampling probabilities
  std::uint64_t seed = 0;

  void validate() const;
};

/// Draws n i.i.d. examples: class k with probability weights[k], then
/// x ~ N(means[:, k], sigma^2 I).
///
/// Random substreams derived from `spec.seed`:
///   class draws    -> mt19937_64(seed)
///   feature draws  -> mt19937_64(seed + kFeatureStreamOffset)
Dataset gen_gaussian_mixture(const GaussianMixtureSpec& spec, Eigen::Index n);

inline constexpr std::uint64_t kFeatureStreamOffset = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kMeanStreamOffset = 0xD1B54A32D192ED03ULL;

/// Class means with i.i.d. N(0, scale^2) entries drawn from
/// mt19937_64(seed + kMeanStreamOffset). Used by the CLI and the experiment
/// harness to build a mixture from (c, d, scale, seed) alone.
Matrix random_means(int class_count, int dim, double scale, std::uint64_t seed);

// Uniform weights, random means; the mixture family behind `ldce gen`.
GaussianMixtureSpec default_mixture(int class_count, int dim, double sigma,
                                    double mean_scale, std::uint64_t seed);

/// Per-feature zero-mean / unit-variance transform fitted on one split and
/// applied to others. Constant features keep scale 1.
class Standardizer {
 public:
  static Standardizer fit(const Matrix& features);
  Matrix apply(const Matrix& features) const;
  Dataset apply(const Dataset& ds) const;

  const Vector& mean() const noexcept { return mean_; }
  const Vector& scale() const noexcept { return scale_; }

 private:
  Vector mean_;
  Vector scale_;
};

struct Split {
  Dataset train;
  Dataset test;
};

// Seeded shuffle, first round(fraction * n) rows become train. Both parts non-empty.
Split train_test_split(const Dataset& ds, double train_fraction, std::uint64_t seed);

}  // namespace ldce
