#include "ldce/centroid.hpp"

#include <sstream>

#include "ldce/error.hpp"

namespace ldce {

const char* to_string(CorrectionMode m) {
  return m == CorrectionMode::paper_M ? "paper-m" : "direct-t";
}

CorrectionMode parse_correction_mode(const std::string& s) {
  if (s == "paper-m" || s == "paper_M") return CorrectionMode::paper_M;
  if (s == "direct-t" || s == "direct_T") return CorrectionMode::direct_T;
  throw ValidationError("unknown correction mode '" + s + "' (paper-m|direct-t)");
}

Matrix imputation_matrix(int i, int j, int class_count) {
  if (i < 0 || j < 0 || i >= class_count || j >= class_count) {
    std::ostringstream msg;
    msg << "imputation indices (" << i << ", " << j << ") outside [0, " << class_count << ")";
    throw RangeError(msg.str());
  }
  Matrix k = Matrix::Identity(class_count, class_count);
  k.row(i).swap(k.row(j));
  return k;
}

Centroid empirical_centroid(const Dataset& ds) {
  Centroid mu = Centroid::Zero(ds.dim(), ds.class_count());
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    mu.col(ds.label(i)) += ds.features().row(i).transpose();
  }
  return mu / static_cast<double>(ds.size());
}

Matrix pseudo_inverse(const Matrix& a, double tol) {
  if (!a.allFinite()) throw ValidationError("pseudo-inverse of a non-finite matrix");
  if (a.size() == 0) return Matrix(a.cols(), a.rows());

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = tol * (s.size() ? s(0) : 0.0);
  Vector s_inv = Vector::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > cutoff) s_inv(k) = 1.0 / s(k);
  }
  return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose();
}

CorrectionMatrix compute_M(const TransitionMatrix& t, const ClassPriors& priors, double tol) {
  const int c = t.class_count();
  if (priors.class_count() != c) {
    throw ValidationError("priors and transition matrix disagree on class count");
  }

  // K_{i->j} = I + E_ij + E_ji - E_ii - E_jj for i != j, and K^T = K. Every K
  // is a permutation, so M is a convex combination of permutations and its rows
  // sum to 1; the diagonal is taken as 1 minus the off-diagonal row mass.
  Matrix m = Matrix::Zero(c, c);
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) {
      if (i == j) continue;
      const double w = priors[i] * t(i, j);
      m(i, j) += w;
      m(j, i) += w;
    }
  }
  for (int k = 0; k < c; ++k) m(k, k) = 1.0 - (m.row(k).sum() - m(k, k));
  Matrix pinv = pseudo_inverse(m, tol);
  return {std::move(m), std::move(pinv), CorrectionMode::paper_M};
}

CorrectionMatrix correction_matrix(const TransitionMatrix& t, const ClassPriors& priors,
                                   CorrectionMode mode, double tol) {
  if (mode == CorrectionMode::paper_M) return compute_M(t, priors, tol);
  if (priors.class_count() != t.class_count()) {
    throw ValidationError("priors and transition matrix disagree on class count");
  }
  return {t.matrix(), pseudo_inverse(t.matrix(), tol), CorrectionMode::direct_T};
}

Centroid correct_centroid(const Centroid& noisy, const TransitionMatrix& t,
                          const ClassPriors& priors, CorrectionMode mode, double tol) {
  if (noisy.cols() != t.class_count()) {
    std::ostringstream msg;
    msg << "centroid has " << noisy.cols() << " columns but T is " << t.class_count() << "x"
        << t.class_count();
    throw ValidationError(msg.str());
  }
  return noisy * correction_matrix(t, priors, mode, tol).pinv;
}

}  // namespace ldce
