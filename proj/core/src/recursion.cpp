#include "bsfw/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bsfw {

namespace {

// Smoothness constant entering each kind's recursion constants. The batch
// table estimator needs the root of the summed squared per-component
// constants; the batch difference estimators need the largest one; the
// coordinate and momentum estimators see the objective itself; the
// dual-averaging estimator works on the composite scalar loss.
double recursion_lipschitz(const EstimatorConfig& cfg, const Problem& p) {
  const int m = p.num_components();
  switch (cfg.kind) {
    case EstimatorKind::Saga: {
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        const double li = p.component_lipschitz_bound(i);
        s += li * li;
      }
      return std::sqrt(s);
    }
    case EstimatorKind::Lsvrg:
    case EstimatorKind::Sarah: {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s = std::max(s, p.component_lipschitz_bound(i));
      return s;
    }
    case EstimatorKind::Sag:
      return p.scalar_loss_curvature_bound() / static_cast<double>(m);
    default:
      return p.lipschitz_bound();
  }
}

double ratio_of(double lhs, double rhs) {
  if (lhs <= 1e-30) return 0.0;
  if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

}  // namespace

RecursionReport measure_recursion(const EstimatorConfig& cfg, const Problem& problem,
                                  const ConstraintSet& set, const Schedule& schedule, int steps,
                                  std::uint64_t seed, const BoostConfig& boost_cfg) {
  if (problem.num_components() > 6 || problem.dim() > 6)
    throw ConfigError("measure_recursion: instance too large to enumerate");
  if (cfg.kind == EstimatorKind::HeavyBall && !schedule.is_heavy_ball())
    throw ConfigError("measure_recursion: momentum estimator needs a heavy-ball schedule");

  const bool heavy_ball = cfg.kind == EstimatorKind::HeavyBall;
  const int m = problem.num_components();

  Vector x = set.lmo(Vector(static_cast<std::size_t>(set.dim()), 0.0));
  Estimator est(cfg, problem, x, seed);

  const double lip = recursion_lipschitz(cfg, problem);
  const double diameter = est.has_geometry_map()
                              ? mapped_l1_diameter(*problem.linear_map(), set.radius())
                              : set.diameter();
  const EstimatorParams par =
      estimator_recursion_params(cfg, lip, problem.dim(), m, static_cast<long>(steps));

  // Variance of the mini-batch gradient around the full gradient; exact at
  // each visited point, tracked as a running supremum.
  double hb_variance = 0.0;
  auto update_hb_variance = [&](const Vector& point) {
    if (!heavy_ball) return;
    const Vector g = problem.gradient(point);
    Vector acc(g.size()), comp(g.size());
    double s = 0.0;
    const auto outcomes = est.enumerate_outcomes(problem);
    for (const auto& [prob, o] : outcomes) {
      acc.assign(g.size(), 0.0);
      for (int i : o.batch) {
        problem.component_grad(i, point, comp);
        axpy(1.0, comp, acc);
      }
      scale(acc, 1.0 / static_cast<double>(o.batch.size()));
      axpy(-1.0, g, acc);
      s += prob * norm2_sq(acc);
    }
    hb_variance = std::max(hb_variance, s);
  };
  update_hb_variance(x);

  double prev_err_sq = norm2_sq(est.error_vector(problem, x));
  double prev_sigma_sq =
      heavy_ball ? schedule.momentum(0) * schedule.momentum(0) * hb_variance : est.sigma_sq(problem, x);

  RecursionReport report;
  Vector x_prev;
  for (int t = 1; t <= steps; ++t) {
    const double eta = schedule.eta(t - 1);
    // One boosted update moves x^{t-1} to x^t; movement stays within eta * D.
    const Vector& m_cur = est.current();
    BoostOutcome b = boost(m_cur, x, set, boost_cfg);
    x_prev = x;
    double gamma = 1.0;
    if (!is_zero(b.direction)) {
      const double ns = norm2(est.map_point(problem, sub(b.first_vertex, x)));
      const double nd = norm2(est.map_point(problem, b.direction));
      gamma = nd > 0.0 ? std::min(eta * ns / nd, 1.0) : 1.0;
    }
    if (gamma < 1.0) {
      axpy(gamma, b.direction, x);
    } else {
      Vector dir = sub(b.first_vertex, x);
      axpy(eta, dir, x);
    }

    update_hb_variance(x);
    if (heavy_ball) {
      const double mom_prev = schedule.momentum(t - 1);
      prev_sigma_sq = mom_prev * mom_prev * hb_variance;
    }
    const double momentum = schedule.is_heavy_ball() ? schedule.momentum(t) : 0.0;

    double lhs_err = 0.0, lhs_sigma = 0.0;
    for (const auto& [prob, outcome] : est.enumerate_outcomes(problem)) {
      Estimator branch = est;
      branch.apply_outcome(problem, x, x_prev, t, momentum, outcome);
      lhs_err += prob * norm2_sq(branch.error_vector(problem, x));
      if (!heavy_ball) lhs_sigma += prob * branch.sigma_sq(problem, x);
    }
    if (heavy_ball) lhs_sigma = momentum * momentum * hb_variance;

    const double d2 = diameter * diameter;
    const double rhs_err = (1.0 - par.rho1) * prev_err_sq + par.A * prev_sigma_sq + eta * eta * par.B * d2 + par.C;
    const double rhs_sigma = (1.0 - par.rho2) * prev_sigma_sq + eta * eta * par.E * d2;

    report.max_error_ratio = std::max(report.max_error_ratio, ratio_of(lhs_err, rhs_err));
    if (prev_sigma_sq > 0.0 || lhs_sigma > 0.0 || par.E > 0.0)
      report.max_sigma_ratio = std::max(report.max_sigma_ratio, ratio_of(lhs_sigma, rhs_sigma));
    ++report.steps_measured;

    // Take the real sampled transition and refresh the conditioned quantities.
    est.step(problem, x, x_prev, t, momentum);
    prev_err_sq = norm2_sq(est.error_vector(problem, x));
    if (heavy_ball) {
      const double mom = schedule.momentum(t);
      prev_sigma_sq = mom * mom * hb_variance;
    } else {
      prev_sigma_sq = est.sigma_sq(problem, x);
    }
  }
  return report;
}

}  // namespace bsfw
