#pragma once

#include <string>

#include "ldce/data.hpp"
#include "ldce/noise.hpp"

namespace ldce {

// d x c matrix (1/n) sum_i x_i y_i^T.
using Centroid = Matrix;

enum class CorrectionMode {
  paper_M,   // multiply by the pseudo-inverse of sum_i pi_i sum_j T_ij K_{i->j}^T
  direct_T,  // multiply by the pseudo-inverse of T itself
};

const char* to_string(CorrectionMode m);
CorrectionMode parse_correction_mode(const std::string& s);

inline constexpr double kDefaultPinvTol = 1e-10;

/// Identity with rows i and j exchanged (the identity when i == j).
/// Maps e_i to e_j; symmetric and self-inverse.
Matrix imputation_matrix(int i, int j, int class_count);

/// Column k is the mean over all examples of x_i * [label_i == k].
Centroid empirical_centroid(const Dataset& ds);

/// Moore-Penrose pseudo-inverse via SVD. Singular values at or below
/// tol * sigma_max are treated as zero. Throws ValidationError on non-finite input.
Matrix pseudo_inverse(const Matrix& a, double tol = kDefaultPinvTol);

struct CorrectionMatrix {
  Matrix matrix;
  Matrix pinv;
  CorrectionMode mode;
};

/// M = sum_i pi_i sum_j T_ij K_{i->j}^T, with its pseudo-inverse.
///
/// K_{i->j} only differs from the identity in rows/columns i and j, so M is
/// built in O(c^2): off-diagonal (i, j) and (j, i) collect pi_i T_ij, and the
/// diagonal completes each row to 1.
CorrectionMatrix compute_M(const TransitionMatrix& t, const ClassPriors& priors,
                           double tol = kDefaultPinvTol);

// The matrix whose pseudo-inverse right-multiplies the noisy centroid in `mode`.
CorrectionMatrix correction_matrix(const TransitionMatrix& t, const ClassPriors& priors,
                                   CorrectionMode mode, double tol = kDefaultPinvTol);

/// Estimated clean centroid: noisy * M^+ (paper_M) or noisy * T^+ (direct_T).
Centroid correct_centroid(const Centroid& noisy, const TransitionMatrix& t,
                          const ClassPriors& priors, CorrectionMode mode,
                          double tol = kDefaultPinvTol);

}  // namespace ldce
