#include "bsfw/problems.hpp"

#include <cmath>

namespace bsfw {

namespace {

// ln(1 + exp(z)) without overflow for large |z|.
double log1p_exp(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LogisticProblem::LogisticProblem(SparseRowMatrix features, std::vector<double> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (static_cast<int>(labels_.size()) != features_.rows())
    throw DimensionError("LogisticProblem: row/label count mismatch");
  if (features_.rows() == 0) throw DimensionError("LogisticProblem: empty dataset");
  for (double y : labels_)
    if (y != 1.0 && y != -1.0) throw ConfigError("LogisticProblem: labels must be +-1");
}

double LogisticProblem::value(const Vector& x) const {
  const int m = num_components();
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += log1p_exp(-labels_[static_cast<std::size_t>(i)] * features_.row_dot(i, x));
  return s / m;
}

void LogisticProblem::grad(const Vector& x, Vector& out) const {
  const int m = num_components();
  out.assign(static_cast<std::size_t>(dim()), 0.0);
  for (int i = 0; i < m; ++i) {
    const double y = labels_[static_cast<std::size_t>(i)];
    const double coef = -y * sigmoid(-y * features_.row_dot(i, x)) / m;
    features_.add_row_to(i, coef, out);
  }
}

void LogisticProblem::component_grad(int i, const Vector& x, Vector& out) const {
  if (i < 0 || i >= num_components()) throw DimensionError("component_grad: index out of range");
  out.assign(static_cast<std::size_t>(dim()), 0.0);
  const double y = labels_[static_cast<std::size_t>(i)];
  features_.add_row_to(i, -y * sigmoid(-y * features_.row_dot(i, x)), out);
}

double LogisticProblem::partial(int j, const Vector& x) const {
  if (j < 0 || j >= dim()) throw DimensionError("partial: index out of range");
  const int m = num_components();
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    for (const auto& [col, val] : features_.row_entries(i)) {
      if (col == j) {
        const double y = labels_[static_cast<std::size_t>(i)];
        s += -y * sigmoid(-y * features_.row_dot(i, x)) * val;
      }
      if (col >= j) break;
    }
  }
  return s / m;
}

double LogisticProblem::lipschitz_bound() const {
  if (lipschitz_cache_ < 0.0)
    lipschitz_cache_ = spectral_norm_sq_upper(features_) / (4.0 * num_components());
  return lipschitz_cache_;
}

double LogisticProblem::component_lipschitz_bound(int i) const {
  return features_.row_norm2_sq(i) / 4.0;
}

double LogisticProblem::scalar_loss_derivative(int i, double z) const {
  const double y = labels_[static_cast<std::size_t>(i)];
  return -y * sigmoid(-y * z);
}

double MatrixCompletionProblem::entry_loss(double x, double y) {
  const double u = x - y;
  return u * u / (2.0 + u * u);
}

double MatrixCompletionProblem::entry_loss_derivative(double x, double y) {
  const double u = x - y;
  const double d = 2.0 + u * u;
  return 4.0 * u / (d * d);
}

MatrixCompletionProblem::MatrixCompletionProblem(int rows, int cols, std::vector<Observation> observed)
    : rows_(rows), cols_(cols), observed_(std::move(observed)) {
  if (rows <= 0 || cols <= 0) throw DimensionError("MatrixCompletionProblem: bad shape");
  if (observed_.empty()) throw DimensionError("MatrixCompletionProblem: no observations");
  for (const auto& o : observed_) {
    if (o.row < 0 || o.row >= rows_ || o.col < 0 || o.col >= cols_)
      throw DimensionError("MatrixCompletionProblem: observation out of range");
    if (!std::isfinite(o.target)) throw DimensionError("MatrixCompletionProblem: non-finite target");
  }
}

double MatrixCompletionProblem::value(const Vector& x) const {
  if (static_cast<int>(x.size()) != dim()) throw DimensionError("value: dimension mismatch");
  double s = 0.0;
  for (const auto& o : observed_) s += entry_loss(x[flat(o.row, o.col)], o.target);
  return s / static_cast<double>(observed_.size());
}

void MatrixCompletionProblem::grad(const Vector& x, Vector& out) const {
  if (static_cast<int>(x.size()) != dim()) throw DimensionError("grad: dimension mismatch");
  out.assign(static_cast<std::size_t>(dim()), 0.0);
  const double inv = 1.0 / static_cast<double>(observed_.size());
  for (const auto& o : observed_)
    out[flat(o.row, o.col)] += inv * entry_loss_derivative(x[flat(o.row, o.col)], o.target);
}

void MatrixCompletionProblem::component_grad(int i, const Vector& x, Vector& out) const {
  if (i < 0 || i >= num_components()) throw DimensionError("component_grad: index out of range");
  out.assign(static_cast<std::size_t>(dim()), 0.0);
  const auto& o = observed_[static_cast<std::size_t>(i)];
  out[flat(o.row, o.col)] = entry_loss_derivative(x[flat(o.row, o.col)], o.target);
}

double MatrixCompletionProblem::partial(int j, const Vector& x) const {
  if (j < 0 || j >= dim()) throw DimensionError("partial: index out of range");
  double s = 0.0;
  for (const auto& o : observed_)
    if (static_cast<int>(flat(o.row, o.col)) == j) s += entry_loss_derivative(x[static_cast<std::size_t>(j)], o.target);
  return s / static_cast<double>(observed_.size());
}

void QuadraticProblem::init() {
  if (centers_.empty()) throw DimensionError("QuadraticProblem: no centers");
  const std::size_t n = centers_.front().size();
  if (n == 0) throw DimensionError("QuadraticProblem: empty center");
  mean_center_.assign(n, 0.0);
  for (const auto& c : centers_) {
    if (c.size() != n) throw DimensionError("QuadraticProblem: center length mismatch");
    axpy(1.0, c, mean_center_);
  }
  scale(mean_center_, 1.0 / static_cast<double>(centers_.size()));
}

double QuadraticProblem::value(const Vector& x) const {
  if (x.size() != mean_center_.size()) throw DimensionError("value: dimension mismatch");
  double s = 0.0;
  for (const auto& c : centers_) {
    double d = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) d += (x[j] - c[j]) * (x[j] - c[j]);
    s += 0.5 * d;
  }
  return s / static_cast<double>(centers_.size());
}

void QuadraticProblem::grad(const Vector& x, Vector& out) const {
  if (x.size() != mean_center_.size()) throw DimensionError("grad: dimension mismatch");
  out = sub(x, mean_center_);
}

void QuadraticProblem::component_grad(int i, const Vector& x, Vector& out) const {
  if (i < 0 || i >= num_components()) throw DimensionError("component_grad: index out of range");
  out = sub(x, centers_[static_cast<std::size_t>(i)]);
}

double QuadraticProblem::partial(int j, const Vector& x) const {
  if (j < 0 || j >= dim()) throw DimensionError("partial: index out of range");
  return x[static_cast<std::size_t>(j)] - mean_center_[static_cast<std::size_t>(j)];
}

double fw_gap(const Problem& p, const Vector& x, const ConstraintSet& set) {
  const Vector g = p.gradient(x);
  const Vector s = set.lmo(g);
  // mathematically nonnegative; rounding near stationarity can land a few
  // ulps below zero
  return std::max(dot(g, sub(x, s)), 0.0);
}

}  // namespace bsfw
