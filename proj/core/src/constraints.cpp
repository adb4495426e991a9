#include "bsfw/constraints.hpp"

#include <cmath>

#include "bsfw/rng.hpp"

namespace bsfw {

Vector lmo_l1(const Vector& g, double tau) {
  if (tau <= 0.0) throw ConfigError("lmo_l1: radius must be positive");
  if (g.empty()) throw DimensionError("lmo_l1: empty gradient");
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (!std::isfinite(g[j])) throw DimensionError("lmo_l1: non-finite gradient entry");
    const double a = std::abs(g[j]);
    if (a > best_abs) {
      best_abs = a;
      best = j;
    }
  }
  Vector out(g.size(), 0.0);
  const double sign = g[best] < 0.0 ? -1.0 : 1.0;  // sign(0) := +1
  out[best] = -tau * sign;
  return out;
}

DenseMatrix lmo_nuclear(const DenseMatrix& g, double tau, double tol, int max_iter) {
  if (tau <= 0.0) throw ConfigError("lmo_nuclear: radius must be positive");
  const int rows = g.rows(), cols = g.cols();
  if (rows == 0 || cols == 0) throw DimensionError("lmo_nuclear: empty matrix");
  if (!all_finite(g.data())) throw DimensionError("lmo_nuclear: non-finite entry");

  DenseMatrix out(rows, cols);
  if (is_zero(g.data())) return out;  // any feasible point minimizes the zero model

  // Power iteration on G^T G for the leading right singular vector.
  auto gtg_multiply = [&](const Vector& v, Vector& gv, Vector& w) {
    for (int i = 0; i < rows; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols; ++j) s += g.at(i, j) * v[static_cast<std::size_t>(j)];
      gv[static_cast<std::size_t>(i)] = s;
    }
    for (int j = 0; j < cols; ++j) {
      double s = 0.0;
      for (int i = 0; i < rows; ++i) s += g.at(i, j) * gv[static_cast<std::size_t>(i)];
      w[static_cast<std::size_t>(j)] = s;
    }
  };

  Vector v(static_cast<std::size_t>(cols));
  Vector gv(static_cast<std::size_t>(rows));
  Vector w(static_cast<std::size_t>(cols));
  for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
    Rng rng(0x70776974ULL + attempt * 0x1234567ULL);
    for (double& x : v) x = rng.next_double() - 0.5;
    scale(v, 1.0 / norm2(v));
    gtg_multiply(v, gv, w);
    if (norm2(w) > 0.0) break;  // start vector hit the null space; reseed once
  }
  if (norm2(w) == 0.0) return out;

  double rq = 0.0;
  bool converged = false;
  double residual = 0.0;
  // Secondary stop on the eigen-residual: with nearly tied leading singular
  // values the Rayleigh quotient keeps crawling forever, yet any vector in
  // the top cluster is objective-optimal to within the cluster width, which
  // the residual norm bounds.
  const double resid_tol = std::sqrt(tol);
  for (int it = 0; it < max_iter; ++it) {
    gtg_multiply(v, gv, w);
    const double rq_new = dot(v, w);
    const double nw = norm2(w);
    if (nw == 0.0) return out;

    double resid_sq = 0.0;
    for (int j = 0; j < cols; ++j) {
      const double r = w[static_cast<std::size_t>(j)] - rq_new * v[static_cast<std::size_t>(j)];
      resid_sq += r * r;
    }
    scale(w, 1.0 / nw);
    std::swap(v, w);
    const double change = std::abs(rq_new - rq);
    const double scale_ref = std::max(std::abs(rq_new), 1e-300);
    residual = std::min(change, std::sqrt(resid_sq));
    if (it > 0 && (change <= tol * scale_ref || std::sqrt(resid_sq) <= resid_tol * scale_ref)) {
      rq = rq_new;
      converged = true;
      break;
    }
    rq = rq_new;
  }
  if (!converged) throw ConvergenceError("lmo_nuclear: power iteration did not converge", residual);

  // u = G v / ||G v||; the output -tau u v^T then has <out, G> = -tau ||G v||.
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += g.at(i, j) * v[static_cast<std::size_t>(j)];
    gv[static_cast<std::size_t>(i)] = s;
  }
  const double ngv = norm2(gv);
  if (ngv == 0.0) return out;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.at(i, j) = -tau * (gv[static_cast<std::size_t>(i)] / ngv) * v[static_cast<std::size_t>(j)];
  return out;
}

ConstraintSet ConstraintSet::l1_ball(double tau, int dim, double feasibility_tol) {
  if (tau <= 0.0) throw ConfigError("l1_ball: radius must be positive");
  if (dim <= 0) throw ConfigError("l1_ball: dimension must be positive");
  ConstraintSet s;
  s.kind_ = SetKind::L1Ball;
  s.tau_ = tau;
  s.dim_ = dim;
  s.feas_tol_ = feasibility_tol;
  return s;
}

ConstraintSet ConstraintSet::nuclear_ball(double tau, int rows, int cols, double feasibility_tol,
                                          double lmo_tol, int lmo_max_iter) {
  if (tau <= 0.0) throw ConfigError("nuclear_ball: radius must be positive");
  if (rows <= 0 || cols <= 0) throw ConfigError("nuclear_ball: dimensions must be positive");
  ConstraintSet s;
  s.kind_ = SetKind::NuclearBall;
  s.tau_ = tau;
  s.dim_ = rows * cols;
  s.rows_ = rows;
  s.cols_ = cols;
  s.feas_tol_ = feasibility_tol;
  s.lmo_tol_ = lmo_tol;
  s.lmo_max_iter_ = lmo_max_iter;
  return s;
}

Vector ConstraintSet::lmo(const Vector& g) const {
  if (static_cast<int>(g.size()) != dim_) throw DimensionError("lmo: dimension mismatch");
  if (kind_ == SetKind::L1Ball) return lmo_l1(g, tau_);
  DenseMatrix gm(rows_, cols_, g);
  return lmo_nuclear(gm, tau_, lmo_tol_, lmo_max_iter_).data();
}

double ConstraintSet::membership_slack(const Vector& x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionError("membership: dimension mismatch");
  const double n = kind_ == SetKind::L1Ball ? norm1(x) : nuclear_norm(DenseMatrix(rows_, cols_, x));
  return (n - tau_) / tau_;
}

bool ConstraintSet::contains(const Vector& x) const { return membership_slack(x) <= feas_tol_; }

}  // namespace bsfw
