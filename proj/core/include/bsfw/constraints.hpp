#pragma once

#include "bsfw/numerics.hpp"

namespace bsfw {

// lmo over the l1 ball of radius tau: -tau * sign(g_i) * e_i with i the
// smallest index attaining max_j |g_j|. sign(0) counts as +1, so g = 0 yields
// the -tau * e_0 vertex.
Vector lmo_l1(const Vector& g, double tau);

// lmo over the nuclear-norm ball: -tau * u1 v1^T from the leading singular
// pair of G, computed by power iteration on G^T G. A zero G yields the zero
// matrix. Stops when the Rayleigh quotient has settled to `tol` (relative)
// or the eigen-residual is below sqrt(tol) (relative), whichever comes
// first; throws ConvergenceError past `max_iter` products. The cap covers
// the worst spectral-gap band at the default tolerance: directions produced
// inside the boosting loop routinely have nearly tied leading singular
// values, where the Rayleigh quotient alone crawls for ~11.5/gap rounds.
DenseMatrix lmo_nuclear(const DenseMatrix& g, double tau, double tol = 1e-10, int max_iter = 50000);

enum class SetKind { L1Ball, NuclearBall };

// Compact convex constraint set with its linear minimization oracle,
// membership test and diameter. Immutable; all operations are reentrant.
class ConstraintSet {
 public:
  static ConstraintSet l1_ball(double tau, int dim, double feasibility_tol = 1e-9);
  static ConstraintSet nuclear_ball(double tau, int rows, int cols, double feasibility_tol = 1e-9,
                                    double lmo_tol = 1e-10, int lmo_max_iter = 50000);

  SetKind kind() const { return kind_; }
  double radius() const { return tau_; }
  int dim() const { return dim_; }  // flattened dimension
  int matrix_rows() const { return rows_; }
  int matrix_cols() const { return cols_; }
  double feasibility_tol() const { return feas_tol_; }

  // Minimizer of <s, g> over the set, on the flattened carrier.
  Vector lmo(const Vector& g) const;

  bool contains(const Vector& x) const;
  // (set norm of x - tau) / tau; membership holds iff this is <= tolerance.
  double membership_slack(const Vector& x) const;

  // Euclidean (Frobenius) diameter; 2*tau for both supported sets.
  double diameter() const { return 2.0 * tau_; }

 private:
  ConstraintSet() = default;
  SetKind kind_ = SetKind::L1Ball;
  double tau_ = 1.0;
  int dim_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  double feas_tol_ = 1e-9;
  double lmo_tol_ = 1e-10;
  int lmo_max_iter_ = 50000;
};

}  // namespace bsfw
