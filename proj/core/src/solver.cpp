#include "bsfw/solver.hpp"

#include <cmath>
#include <string>

namespace bsfw {

void SolverConfig::validate() const {
  boost.validate();
  if (iterations < 0) throw ConfigError("solver: iterations must be >= 0");
  if (sample_budget < 0) throw ConfigError("solver: sample budget must be >= 0");
  if (estimator.kind == EstimatorKind::HeavyBall && !schedule.is_heavy_ball())
    throw ConfigError("solver: the momentum estimator needs a heavy-ball schedule (hb_quasar or hb_ncv)");
}

namespace {

struct LoopGuards {
  double feas_tol;
  double diameter;

  void check(RunRecord& rec, const ConstraintSet& set, const Estimator& est, const Problem& p,
             const Vector& x_new, const Vector& x_old, double eta, long t) const {
    const double move = norm2(est.map_point(p, sub(x_new, x_old)));
    const double excess = move - eta * diameter;
    rec.max_movement_excess = std::max(rec.max_movement_excess, excess);
    if (excess > 1e-9)
      throw InvariantViolation("iterate moved farther than the step decay allows at t=" + std::to_string(t));
    const double slack = set.membership_slack(x_new);
    rec.max_membership_slack = std::max(rec.max_membership_slack, slack);
    if (slack > feas_tol)
      throw InvariantViolation("iterate left the feasible set at t=" + std::to_string(t));
  }
};

bool keep_running(const SolverConfig& cfg, long t, long long samples) {
  if (cfg.sample_budget > 0 && samples >= cfg.sample_budget) return false;
  if (cfg.iterations > 0 && t >= cfg.iterations) return false;
  if (cfg.sample_budget == 0 && t >= cfg.iterations) return false;
  return true;
}

RunRecord run_loop(const Problem& p, const ConstraintSet& set, const SolverConfig& cfg, bool boosted_solver) {
  cfg.validate();
  if (p.dim() != set.dim()) throw DimensionError("solver: problem/set dimension mismatch");
  if (cfg.estimator.kind == EstimatorKind::Sag && set.kind() != SetKind::L1Ball)
    throw ConfigError("solver: the dual-averaging estimator is only wired for the l1 ball");

  Vector m_init = cfg.m_init;
  if (m_init.empty()) m_init.assign(static_cast<std::size_t>(set.dim()), 0.0);

  RunRecord rec;
  rec.gap_recorded = cfg.record_gap;
  rec.error_recorded = cfg.record_error_sq;

  Vector x = set.lmo(m_init);
  Estimator est(cfg.estimator, p, x, cfg.seed);

  long long samples = est.init_samples();
  long long lmo_calls = 0;
  long boosted_count = 0;
  // Movement is measured in the estimator's step-size geometry.
  const bool mapped = est.has_geometry_map();
  const double guard_diameter =
      mapped ? mapped_l1_diameter(*p.linear_map(), set.radius()) : set.diameter();
  const LoopGuards guards{set.feasibility_tol(), guard_diameter};
  if (cfg.record_gap) rec.iterates.push_back(x);

  Vector x_prev;
  long t = 0;
  while (keep_running(cfg, t, samples)) {
    const double eta = cfg.schedule.eta(t);
    const double momentum = cfg.schedule.is_heavy_ball() ? cfg.schedule.momentum(t) : 0.0;
    if (t > 0) samples += est.step(p, x, x_prev, t, momentum);
    const Vector& m = est.current();

    IterationRow row;
    row.t = t;
    row.loss = p.value(x);
    row.eta = eta;
    if (cfg.record_gap) row.gap = fw_gap(p, x, set);
    if (cfg.record_error_sq) row.error_sq = norm2_sq(est.error_vector(p, x));

    Vector x_new;
    if (boosted_solver) {
      const BoostOutcome b = boost(m, x, set, cfg.boost);
      lmo_calls += b.rounds;
      row.rounds = b.rounds;
      double gamma = 1.0;
      if (!is_zero(b.direction)) {
        const double ns = norm2(est.map_point(p, sub(b.first_vertex, x)));
        const double nd = norm2(est.map_point(p, b.direction));
        gamma = nd > 0.0 ? std::min(eta * ns / nd, 1.0) : 1.0;
      }
      row.gamma = gamma;
      row.boosted = gamma < 1.0;
      if (row.boosted) {
        Vector neg_m = m;
        scale(neg_m, -1.0);
        const double fw_align = align(neg_m, sub(b.first_vertex, x));
        const double margin = b.final_alignment - fw_align;
        rec.min_alignment_margin = std::min(rec.min_alignment_margin, margin);
        if (margin < -1e-12) ++rec.alignment_violations;
        x_new = x;
        axpy(gamma, b.direction, x_new);
      } else {
        x_new = x;
        Vector dir = sub(b.first_vertex, x);
        axpy(eta, dir, x_new);
      }
    } else {
      const Vector s = set.lmo(m);
      lmo_calls += 1;
      row.rounds = 1;
      row.gamma = 1.0;
      row.boosted = false;
      x_new = x;
      Vector dir = sub(s, x);
      axpy(eta, dir, x_new);
    }

    guards.check(rec, set, est, p, x_new, x, eta, t);
    if (row.boosted) ++boosted_count;
    row.lmo_calls_cum = lmo_calls;
    row.samples_cum = samples;
    rec.rows.push_back(row);

    x_prev = std::move(x);
    x = std::move(x_new);
    if (cfg.record_gap) rec.iterates.push_back(x);
    ++t;
  }

  rec.final_x = x;
  rec.final_loss = p.value(x);
  rec.total_lmo_calls = lmo_calls;
  rec.total_samples = samples;
  rec.boosting_percentage =
      rec.rows.empty() ? 0.0 : 100.0 * static_cast<double>(boosted_count) / static_cast<double>(rec.rows.size());
  return rec;
}

}  // namespace

RunRecord run_bsfw(const Problem& p, const ConstraintSet& set, const SolverConfig& cfg) {
  return run_loop(p, set, cfg, true);
}

RunRecord run_sfw(const Problem& p, const ConstraintSet& set, const SolverConfig& cfg) {
  return run_loop(p, set, cfg, false);
}

bool iterate_step_bound_check(const RunRecord& record, const ConstraintSet& set) {
  if (record.iterates.size() < 2) return true;
  const double d = set.diameter();
  for (std::size_t k = 1; k < record.iterates.size(); ++k) {
    const double move = norm2(sub(record.iterates[k], record.iterates[k - 1]));
    const double eta = record.rows[k - 1].eta;
    if (move > eta * d + 1e-9) return false;
  }
  return true;
}

double boosting_percentage(const RunRecord& record) {
  if (record.rows.empty()) throw ConfigError("boosting_percentage: empty record");
  long boosted = 0;
  for (const auto& r : record.rows) boosted += r.boosted ? 1 : 0;
  return 100.0 * static_cast<double>(boosted) / static_cast<double>(record.rows.size());
}

double theorem_bound(BoundKind kind, const BoundInputs& in, long t) {
  switch (kind) {
    case BoundKind::DetQuasarRate:
      return std::max(in.F0, 2.0 * in.L * in.D * in.D / (in.rho * in.rho)) / static_cast<double>(t + 1);
    case BoundKind::DetNonconvexRate:
      return (in.F0 + in.L * in.D * in.D) / std::sqrt(static_cast<double>(t + 1));
    case BoundKind::StochNonconvexRate: {
      if (t < 1) throw ConfigError("theorem_bound: horizon must be >= 1");
      const double T = static_cast<double>(t);
      const double d2 = in.D * in.D;
      double inner = d2 / (in.rho1 * T) * (in.B + (in.A > 0.0 && in.E > 0.0 ? in.A * in.E / in.rho2 : 0.0)) +
                     in.C / in.rho1;
      return in.F0 / std::sqrt(T) + d2 * in.L / (2.0 * std::sqrt(T)) + in.D * std::sqrt(inner);
    }
    case BoundKind::HeavyBallNonconvexRate: {
      if (t < 1) throw ConfigError("theorem_bound: horizon must be >= 1");
      const double T = static_cast<double>(t);
      const double num = in.F0 + 2.0 * in.D * std::sqrt(in.Mh) * (1.0 + std::log(T)) + in.L * in.D * in.D;
      const double den = 4.0 * (std::pow(T + 2.0, 0.25) - std::pow(2.0, 0.25));
      return num / den;
    }
  }
  throw ConfigError("theorem_bound: unknown kind");
}

}  // namespace bsfw
