#pragma once

#include <memory>
#include <tuple>

#include "bsfw/constraints.hpp"
#include "bsfw/numerics.hpp"

namespace bsfw {

// Objective of the form f(x) = (1/m) * sum_i F_i(x). component_grad returns
// the unnormalized per-component gradient, so grad = (1/m) * sum of them.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int dim() const = 0;
  virtual int num_components() const = 0;

  virtual double value(const Vector& x) const = 0;
  virtual void grad(const Vector& x, Vector& out) const = 0;
  virtual void component_grad(int i, const Vector& x, Vector& out) const = 0;
  virtual double partial(int j, const Vector& x) const = 0;

  // Valid upper bound on the gradient Lipschitz constant of f.
  virtual double lipschitz_bound() const = 0;
  // Upper bound on the per-component constants of the F_i.
  virtual double component_lipschitz_bound(int i) const = 0;

  // Composite structure f(x) = ftilde(A x) with ftilde(z) = (1/m) sum phi_i(z_i),
  // exposed where it exists (dual-averaging estimators need it).
  virtual bool has_linear_structure() const { return false; }
  virtual const SparseRowMatrix* linear_map() const { return nullptr; }
  virtual double scalar_loss_derivative(int /*i*/, double /*z*/) const {
    throw ConfigError("problem has no scalar composite structure");
  }
  // max_i sup |phi_i''|; smoothness of ftilde is this over m.
  virtual double scalar_loss_curvature_bound() const {
    throw ConfigError("problem has no scalar composite structure");
  }

  Vector gradient(const Vector& x) const {
    Vector g(static_cast<std::size_t>(dim()));
    grad(x, g);
    return g;
  }
};

// (1/m) sum_i ln(1 + exp(-y_i <a_i, x>)) over rows a_i with labels y_i in {-1,+1}.
class LogisticProblem final : public Problem {
 public:
  LogisticProblem(SparseRowMatrix features, std::vector<double> labels);

  int dim() const override { return features_.cols(); }
  int num_components() const override { return features_.rows(); }
  double value(const Vector& x) const override;
  void grad(const Vector& x, Vector& out) const override;
  void component_grad(int i, const Vector& x, Vector& out) const override;
  double partial(int j, const Vector& x) const override;
  double lipschitz_bound() const override;
  double component_lipschitz_bound(int i) const override;

  bool has_linear_structure() const override { return true; }
  const SparseRowMatrix* linear_map() const override { return &features_; }
  double scalar_loss_derivative(int i, double z) const override;
  double scalar_loss_curvature_bound() const override { return 0.25; }

  const SparseRowMatrix& features() const { return features_; }
  const std::vector<double>& labels() const { return labels_; }

 private:
  SparseRowMatrix features_;
  std::vector<double> labels_;
  mutable double lipschitz_cache_ = -1.0;
};

// (1/|Omega|) sum over observed entries of a bounded nonconvex entry loss
// l(x, y) = (x-y)^2 / (2 + (x-y)^2), on the flattened rows*cols carrier.
class MatrixCompletionProblem final : public Problem {
 public:
  struct Observation {
    int row, col;
    double target;
  };
  MatrixCompletionProblem(int rows, int cols, std::vector<Observation> observed);

  int dim() const override { return rows_ * cols_; }
  int num_components() const override { return static_cast<int>(observed_.size()); }
  double value(const Vector& x) const override;
  void grad(const Vector& x, Vector& out) const override;
  void component_grad(int i, const Vector& x, Vector& out) const override;
  double partial(int j, const Vector& x) const override;
  double lipschitz_bound() const override { return 2.0 / static_cast<double>(observed_.size()); }
  double component_lipschitz_bound(int) const override { return 1.0; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Observation>& observed() const { return observed_; }

  static double entry_loss(double x, double y);
  static double entry_loss_derivative(double x, double y);

 private:
  std::size_t flat(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }
  int rows_, cols_;
  std::vector<Observation> observed_;
};

// (1/m) sum_i (1/2) ||x - c_i||^2; identity Hessian, exact oracles.
class QuadraticProblem final : public Problem {
 public:
  explicit QuadraticProblem(Vector center) : centers_{std::move(center)} { init(); }
  explicit QuadraticProblem(std::vector<Vector> centers) : centers_(std::move(centers)) { init(); }

  int dim() const override { return static_cast<int>(centers_.front().size()); }
  int num_components() const override { return static_cast<int>(centers_.size()); }
  double value(const Vector& x) const override;
  void grad(const Vector& x, Vector& out) const override;
  void component_grad(int i, const Vector& x, Vector& out) const override;
  double partial(int j, const Vector& x) const override;
  double lipschitz_bound() const override { return 1.0; }
  double component_lipschitz_bound(int) const override { return 1.0; }

  const Vector& mean_center() const { return mean_center_; }

 private:
  void init();
  std::vector<Vector> centers_;
  Vector mean_center_;
};

// <grad f(x), x - lmo(grad f(x))>; nonnegative first-order stationarity measure.
double fw_gap(const Problem& p, const Vector& x, const ConstraintSet& set);

}  // namespace bsfw
