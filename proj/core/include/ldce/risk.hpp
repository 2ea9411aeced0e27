#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ldce/centroid.hpp"
#include "ldce/data.hpp"

namespace ldce {

/// Linear decision function h(x) = W^T x with W of shape d x c.
class LinearModel {
 public:
  LinearModel() = default;
  explicit LinearModel(Matrix weights);
  static LinearModel zeros(Eigen::Index dim, Eigen::Index class_count);

  const Matrix& weights() const noexcept { return w_; }
  Eigen::Index dim() const noexcept { return w_.rows(); }
  Eigen::Index class_count() const noexcept { return w_.cols(); }

  Vector scores(const Eigen::Ref<const Vector>& x) const;

 private:
  Matrix w_;
};

enum class Trainer { closed_form, iterative };

const char* to_string(Trainer t);
Trainer parse_trainer(const std::string& s);

struct IterativeSettings {
  double step_size = 0.001;
  double momentum = 0.9;  // heavy-ball coefficient: v <- momentum * v + g
  int epochs = 200;
  int batch_size = 128;
  int decay_start = 80;   // step size decays linearly to 0 over the remaining epochs
};

struct RiskConfig {
  double lambda = 1e-3;
  std::optional<CorrectionMode> correction = CorrectionMode::paper_M;  // nullopt = none
  Trainer trainer = Trainer::closed_form;
  IterativeSettings iterative;
  std::uint64_t seed = 0;

  void validate() const;
};

// (1/n) sum_i ||y_i - W^T x_i||^2
double naive_mse_risk(const LinearModel& model, const Dataset& ds);

/// 1 + (1/n) sum_i x_i^T W W^T x_i - 2 trace(W^T centroid).
/// With the clean empirical centroid this equals naive_mse_risk exactly.
double decomposed_risk(const LinearModel& model, const Matrix& features,
                       const Centroid& centroid);

// decomposed_risk + lambda * ||W||_F^2, the quantity both trainers minimise.
double objective(const LinearModel& model, const Matrix& features, const Centroid& centroid,
                 double lambda);

// 2 C W - 2 centroid + 2 lambda W with C = X^T X / n.
Matrix risk_gradient(const LinearModel& model, const Matrix& features,
                     const Centroid& centroid, double lambda);

/// W = (C + lambda I)^{-1} centroid.
/// Throws SingularityError when lambda == 0 and C is rank deficient.
LinearModel closed_form_solve(const Matrix& features, const Centroid& centroid, double lambda);

/// Mini-batch heavy-ball descent on `objective`, starting from W = 0.
///
/// Each batch uses its own second moment X_b^T X_b / |b| together with the
/// fixed full-set centroid. Batch order is reshuffled every epoch from
/// mt19937_64(config.seed). Throws DivergenceError if the objective turns
/// non-finite.
LinearModel iterative_train(const Matrix& features, const Centroid& centroid,
                            const RiskConfig& config);

// Dispatches on config.trainer.
LinearModel train(const Matrix& features, const Centroid& centroid, const RiskConfig& config);

// argmax_k (W^T x)_k, lowest index on ties.
int predict(const LinearModel& model, const Eigen::Ref<const Vector>& x);

}  // namespace ldce
