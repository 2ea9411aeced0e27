#include "ldce/noise.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "ldce/centroid.hpp"
#include "ldce/error.hpp"

namespace ldce {
namespace {

constexpr double kSimplexTol = 1e-12;

void check_rate(double rate, double upper, const char* kind) {
  if (!(rate >= 0.0 && rate < upper)) {
    std::ostringstream msg;
    msg << kind << " noise rate " << rate << " outside [0, " << upper << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace

TransitionMatrix::TransitionMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2) {
    throw ValidationError("transition matrix must be square with c >= 2");
  }
  if (!m_.allFinite()) throw ValidationError("transition matrix has non-finite entries");
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      if (m_(i, j) < 0.0 || m_(i, j) > 1.0) {
        std::ostringstream msg;
        msg << "transition entry (" << i << ", " << j << ") = " << m_(i, j) << " outside [0, 1]";
        throw ValidationError(msg.str());
      }
    }
    if (std::abs(m_.row(i).sum() - 1.0) > kSimplexTol) {
      std::ostringstream msg;
      msg << "transition row " << i << " sums to " << m_.row(i).sum();
      throw ValidationError(msg.str());
    }
  }
}

TransitionMatrix TransitionMatrix::identity(int class_count) {
  return TransitionMatrix(Matrix::Identity(class_count, class_count));
}

ClassPriors::ClassPriors(Vector p) : p_(std::move(p)) {
  if (p_.size() < 1) throw ValidationError("priors must be non-empty");
  if (!p_.allFinite() || (p_.array() < 0.0).any()) {
    throw ValidationError("priors must be finite and nonnegative");
  }
  if (std::abs(p_.sum() - 1.0) > kSimplexTol) throw ValidationError("priors must sum to 1");
}

ClassPriors ClassPriors::uniform(int class_count) {
  return ClassPriors(Vector::Constant(class_count, 1.0 / class_count));
}

const char* to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::symmetric: return "symmetric";
    case NoiseKind::pairflip: return "pairflip";
    case NoiseKind::explicit_matrix: return "explicit";
  }
  return "?";
}

NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "symmetric") return NoiseKind::symmetric;
  if (s == "pairflip") return NoiseKind::pairflip;
  if (s == "explicit") return NoiseKind::explicit_matrix;
  throw ValidationError("unknown noise kind '" + s + "' (symmetric|pairflip|explicit)");
}

void NoiseSpec::validate() const {
  switch (kind) {
    case NoiseKind::symmetric: check_rate(rate, 1.0, "symmetric"); break;
    case NoiseKind::pairflip: check_rate(rate, 0.5, "pairflip"); break;
    case NoiseKind::explicit_matrix:
      if (!matrix) throw ValidationError("explicit noise requires a transition matrix");
      break;
  }
}

TransitionMatrix symmetric_T(int class_count, double rate) {
  if (class_count < 2) throw ValidationError("need at least two classes");
  check_rate(rate, 1.0, "symmetric");
  const double off = rate / (class_count - 1);
  Matrix t = Matrix::Constant(class_count, class_count, off);
  t.diagonal().setConstant(1.0 - rate);
  return TransitionMatrix(std::move(t));
}

TransitionMatrix pairflip_T(int class_count, double rate) {
  if (class_count < 2) throw ValidationError("need at least two classes");
  check_rate(rate, 0.5, "pairflip");
  Matrix t = Matrix::Zero(class_count, class_count);
  for (int i = 0; i < class_count; ++i) {
    t(i, i) = 1.0 - rate;
    t(i, (i + 1) % class_count) += rate;
  }
  return TransitionMatrix(std::move(t));
}

TransitionMatrix make_transition(const NoiseSpec& spec, int class_count) {
  spec.validate();
  switch (spec.kind) {
    case NoiseKind::symmetric: return symmetric_T(class_count, spec.rate);
    case NoiseKind::pairflip: return pairflip_T(class_count, spec.rate);
    case NoiseKind::explicit_matrix:
      if (spec.matrix->class_count() != class_count) {
        throw ValidationError("explicit transition matrix size does not match class count");
      }
      return *spec.matrix;
  }
  throw ValidationError("unknown noise kind");
}

Dataset inject_noise(const Dataset& clean, const TransitionMatrix& t, std::uint64_t seed) {
  if (clean.provenance() != Provenance::clean) {
    throw ValidationError("noise can only be injected into a clean dataset");
  }
  if (t.class_count() != clean.class_count()) {
    std::ostringstream msg;
    msg << "transition matrix is " << t.class_count() << "x" << t.class_count()
        << " but dataset has " << clean.class_count() << " classes";
    throw ValidationError(msg.str());
  }

  const int c = t.class_count();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> noisy(clean.labels().size());
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    const int from = clean.labels()[i];
    const double u = unit(rng);
    int to = -1;
    int last_positive = from;
    double cdf = 0.0;
    for (int j = 0; j < c; ++j) {
      const double p = t(from, j);
      if (p <= 0.0) continue;
      last_positive = j;
      cdf += p;
      if (u < cdf) {
        to = j;
        break;
      }
    }
    // u fell in the rounding gap above the accumulated row sum
    noisy[i] = to < 0 ? last_positive : to;
  }
  return clean.relabel(std::move(noisy), Provenance::noisy);
}

Vector noisy_label_frequencies(const Dataset& ds) {
  Vector counts = Vector::Zero(ds.class_count());
  for (int y : ds.labels()) counts(y) += 1.0;
  return counts / static_cast<double>(ds.size());
}

ClassPriors estimate_priors(const TransitionMatrix& t, const Vector& freqs) {
  if (freqs.size() != t.class_count()) {
    throw ValidationError("frequency vector length does not match transition matrix");
  }
  if (!freqs.allFinite()) throw ValidationError("frequencies must be finite");

  Vector pi = pseudo_inverse(t.matrix().transpose()) * freqs;
  pi = pi.cwiseMax(0.0);
  const double total = pi.sum();
  if (!(total > 0.0)) {
    throw DegenerateSystemError("prior system has no nonnegative solution mass");
  }
  return ClassPriors(pi / total);
}

}  // namespace ldce
