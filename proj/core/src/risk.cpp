#include "ldce/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "ldce/error.hpp"

namespace ldce {
namespace {

void check_shapes(const LinearModel& model, const Matrix& features, const Centroid& centroid) {
  if (model.dim() != features.cols() || centroid.rows() != features.cols() ||
      model.class_count() != centroid.cols()) {
    std::ostringstream msg;
    msg << "shape mismatch: W " << model.dim() << "x" << model.class_count() << ", features "
        << features.rows() << "x" << features.cols() << ", centroid " << centroid.rows() << "x"
        << centroid.cols();
    throw ValidationError(msg.str());
  }
  if (features.rows() < 1) throw ValidationError("features must have at least one row");
}

Matrix second_moment(const Matrix& features) {
  Matrix c = Matrix::Zero(features.cols(), features.cols());
  c.selfadjointView<Eigen::Lower>().rankUpdate(features.transpose());
  c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
  return c / static_cast<double>(features.rows());
}

}  // namespace

LinearModel::LinearModel(Matrix weights) : w_(std::move(weights)) {
  if (!w_.allFinite()) throw ValidationError("model weights must be finite");
}

LinearModel LinearModel::zeros(Eigen::Index dim, Eigen::Index class_count) {
  return LinearModel(Matrix::Zero(dim, class_count));
}

Vector LinearModel::scores(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != w_.rows()) throw ValidationError("feature vector length does not match model");
  return w_.transpose() * x;
}

const char* to_string(Trainer t) { return t == Trainer::closed_form ? "closed" : "iterative"; }

Trainer parse_trainer(const std::string& s) {
  if (s == "closed" || s == "closed_form") return Trainer::closed_form;
  if (s == "iterative") return Trainer::iterative;
  throw ValidationError("unknown solver '" + s + "' (closed|iterative)");
}

void RiskConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be >= 0");
  if (!(iterative.step_size > 0.0)) throw ValidationError("step size must be > 0");
  if (!(iterative.momentum >= 0.0 && iterative.momentum < 1.0)) {
    throw ValidationError("momentum must lie in [0, 1)");
  }
  if (iterative.epochs < 1) throw ValidationError("epochs must be >= 1");
  if (iterative.batch_size < 1) throw ValidationError("batch size must be >= 1");
  if (iterative.decay_start < 0) throw ValidationError("decay start must be >= 0");
}

double naive_mse_risk(const LinearModel& model, const Dataset& ds) {
  if (model.dim() != ds.dim() || model.class_count() != ds.class_count()) {
    throw ValidationError("model shape does not match dataset");
  }
  Matrix residual = ds.features() * model.weights();
  for (Eigen::Index i = 0; i < ds.size(); ++i) residual(i, ds.label(i)) -= 1.0;
  return residual.squaredNorm() / static_cast<double>(ds.size());
}

double decomposed_risk(const LinearModel& model, const Matrix& features,
                       const Centroid& centroid) {
  check_shapes(model, features, centroid);
  const double quadratic =
      (features * model.weights()).squaredNorm() / static_cast<double>(features.rows());
  const double linear = (model.weights().transpose() * centroid).trace();
  return 1.0 + quadratic - 2.0 * linear;
}

double objective(const LinearModel& model, const Matrix& features, const Centroid& centroid,
                 double lambda) {
  return decomposed_risk(model, features, centroid) + lambda * model.weights().squaredNorm();
}

Matrix risk_gradient(const LinearModel& model, const Matrix& features, const Centroid& centroid,
                     double lambda) {
  check_shapes(model, features, centroid);
  const Matrix& w = model.weights();
  const Matrix xw = features * w;
  return (2.0 / static_cast<double>(features.rows())) * (features.transpose() * xw) -
         2.0 * centroid + (2.0 * lambda) * w;
}

LinearModel closed_form_solve(const Matrix& features, const Centroid& centroid, double lambda) {
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be >= 0");
  check_shapes(LinearModel::zeros(features.cols(), centroid.cols()), features, centroid);

  Matrix a = second_moment(features);
  a.diagonal().array() += lambda;
  Eigen::LDLT<Matrix> ldlt(a);
  // LDLT pivots give a cheap rank test for the lambda = 0 case
  const Vector d = ldlt.vectorD().cwiseAbs();
  const double largest = d.size() ? d.maxCoeff() : 0.0;
  if (ldlt.info() != Eigen::Success || !(largest > 0.0) ||
      d.minCoeff() <= 1e-12 * largest) {
    throw SingularityError(
        "second-moment system is singular; use lambda > 0 (e.g. --lambda 1e-3)");
  }
  return LinearModel(ldlt.solve(centroid));
}

LinearModel iterative_train(const Matrix& features, const Centroid& centroid,
                            const RiskConfig& config) {
  config.validate();
  LinearModel model = LinearModel::zeros(features.cols(), centroid.cols());
  check_shapes(model, features, centroid);

  const auto& it = config.iterative;
  const Eigen::Index n = features.rows();
  Matrix w = Matrix::Zero(features.cols(), centroid.cols());
  Matrix velocity = Matrix::Zero(w.rows(), w.cols());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(config.seed);

  Matrix batch(std::min<Eigen::Index>(it.batch_size, n), features.cols());
  for (int epoch = 0; epoch < it.epochs; ++epoch) {
    double step = it.step_size;
    if (epoch >= it.decay_start && it.epochs > it.decay_start) {
      step *= static_cast<double>(it.epochs - epoch) /
              static_cast<double>(it.epochs - it.decay_start);
    }
    std::shuffle(order.begin(), order.end(), rng);

    for (Eigen::Index start = 0; start < n; start += it.batch_size) {
      const Eigen::Index b = std::min<Eigen::Index>(it.batch_size, n - start);
      batch.resize(b, features.cols());
      for (Eigen::Index r = 0; r < b; ++r) {
        batch.row(r) = features.row(order[static_cast<std::size_t>(start + r)]);
      }
      const Matrix grad = (2.0 / static_cast<double>(b)) * (batch.transpose() * (batch * w)) -
                          2.0 * centroid + (2.0 * config.lambda) * w;
      velocity = it.momentum * velocity + grad;
      w -= step * velocity;
    }

    const bool finite =
        w.allFinite() && std::isfinite(objective(LinearModel(w), features, centroid, config.lambda));
    if (!finite) {
      std::ostringstream msg;
      msg << "iterative training diverged at epoch " << epoch;
      throw DivergenceError(msg.str(), epoch);
    }
  }
  return LinearModel(std::move(w));
}

LinearModel train(const Matrix& features, const Centroid& centroid, const RiskConfig& config) {
  config.validate();
  if (config.trainer == Trainer::closed_form) {
    return closed_form_solve(features, centroid, config.lambda);
  }
  return iterative_train(features, centroid, config);
}

int predict(const LinearModel& model, const Eigen::Ref<const Vector>& x) {
  const Vector s = model.scores(x);
  int best = 0;
  for (Eigen::Index k = 1; k < s.size(); ++k) {
    if (s(k) > s(best)) best = static_cast<int>(k);
  }
  return best;
}

}  // namespace ldce
