#pragma once

#include <cstdint>
#include <optional>

#include "ldce/data.hpp"

namespace ldce {

/// Row-stochastic c x c matrix; entry (i, j) = P(noisy = j | clean = i).
/// Construction validates entries in [0, 1] and rows summing to 1 within 1e-12.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(Matrix m);

  static TransitionMatrix identity(int class_count);

  const Matrix& matrix() const noexcept { return m_; }
  int class_count() const noexcept { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Probability vector over classes; validated to be nonnegative and sum to 1
/// within 1e-12.
class ClassPriors {
 public:
  explicit ClassPriors(Vector p);
  static ClassPriors uniform(int class_count);

  const Vector& values() const noexcept { return p_; }
  int class_count() const noexcept { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_(i); }

 private:
  Vector p_;
};

enum class NoiseKind { symmetric, pairflip, explicit_matrix };

const char* to_string(NoiseKind k);
NoiseKind parse_noise_kind(const std::string& s);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::symmetric;
  double rate = 0.0;
  std::optional<TransitionMatrix> matrix;  // required for explicit_matrix
  std::uint64_t seed = 0;

  void validate() const;
};

// Diagonal 1 - rate, off-diagonal rate / (c - 1). Requires c >= 2, 0 <= rate < 1.
TransitionMatrix symmetric_T(int class_count, double rate);

// T(i, i) = 1 - rate, T(i, (i + 1) mod c) = rate. Requires 0 <= rate < 0.5.
TransitionMatrix pairflip_T(int class_count, double rate);

TransitionMatrix make_transition(const NoiseSpec& spec, int class_count);

/// Replaces each clean label i by j with probability T(i, j), using one
/// uniform draw per example (inverse CDF over row i) from mt19937_64(seed).
/// Features are copied untouched.
Dataset inject_noise(const Dataset& clean, const TransitionMatrix& t, std::uint64_t seed);

// Entry j = count(label == j) / n.
Vector noisy_label_frequencies(const Dataset& ds);

/// Solves freqs = T^T pi for pi through the pseudo-inverse of T^T, then
/// clips negative entries to 0 and renormalises.
/// Throws DegenerateSystemError when nothing positive survives the clip.
ClassPriors estimate_priors(const TransitionMatrix& t, const Vector& freqs);

}  // namespace ldce
