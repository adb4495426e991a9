#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bsfw/boosting.hpp"
#include "bsfw/constraints.hpp"
#include "bsfw/estimators.hpp"
#include "bsfw/problems.hpp"
#include "bsfw/schedules.hpp"

namespace bsfw {

struct SolverConfig {
  EstimatorConfig estimator;
  Schedule schedule = Schedule::det_quasar(1.0);
  BoostConfig boost;
  long iterations = 0;           // T; 0 allowed (record the start point only)
  long long sample_budget = 0;   // when > 0, additionally stop once the
                                 // cumulative oracle samples reach this
  std::uint64_t seed = 1;
  bool record_gap = false;       // per-iteration stationarity gap + iterate retention
  bool record_error_sq = false;  // per-iteration |m^t - grad f(x^t)|^2
  Vector m_init;                 // empty = zero vector

  void validate() const;
};

struct IterationRow {
  long t = 0;
  double loss = 0.0;
  double eta = 0.0;
  double gamma = 1.0;
  bool boosted = false;   // gamma < 1, i.e. the refined direction was used
  int rounds = 1;         // lmo calls spent this iteration
  long long lmo_calls_cum = 0;
  long long samples_cum = 0;
  double gap = 0.0;       // valid when gap_recorded
  double error_sq = 0.0;  // valid when error_recorded
};

struct RunRecord {
  std::vector<IterationRow> rows;
  bool gap_recorded = false;
  bool error_recorded = false;

  Vector final_x;
  double final_loss = 0.0;
  double boosting_percentage = 0.0;  // 100 * #{gamma_t < 1} / T
  long long total_lmo_calls = 0;
  long long total_samples = 0;

  // Worst-case diagnostics maintained by the loop; all should be tiny.
  double max_membership_slack = 0.0;           // relative to the radius
  double max_movement_excess = 0.0;            // |x_t - x_{t-1}| - eta_{t-1} D
  double min_alignment_margin = 0.0;           // align(-m,d~) - align(-m,s-x) over boosted steps
  long long alignment_violations = 0;          // margin below -1e-12

  std::vector<Vector> iterates;  // retained when gap recording is on
};

// Boosted solver: per iteration refine the estimator direction, rescale the
// step so its length matches the vertex step, fall back to the plain vertex
// update when the refinement is degenerate.
RunRecord run_bsfw(const Problem& p, const ConstraintSet& set, const SolverConfig& cfg);

// Plain stochastic conditional-gradient baseline with the same estimator and
// step-decay plumbing; exactly one lmo call per iteration.
RunRecord run_sfw(const Problem& p, const ConstraintSet& set, const SolverConfig& cfg);

// True iff every consecutive retained iterate pair obeys
// |x_t - x_{t-1}| <= eta_{t-1} * D + 1e-9.
bool iterate_step_bound_check(const RunRecord& record, const ConstraintSet& set);

// 100 * #{boosted rows} / #rows; throws on an empty record.
double boosting_percentage(const RunRecord& record);

enum class BoundKind {
  DetQuasarRate,         // max(F0, 2 L D^2 / rho^2) / (t+1)
  DetNonconvexRate,      // (F0 + L D^2) / sqrt(t+1)
  StochNonconvexRate,    // fixed-horizon stochastic stationarity bound
  HeavyBallNonconvexRate // momentum-estimator stationarity bound
};

struct BoundInputs {
  double F0 = 0.0;     // initial optimality gap (also the Lyapunov start r0
                       // when the estimator starts exact)
  double L = 0.0;      // smoothness constant
  double D = 0.0;      // set diameter
  double rho = 1.0;    // quasar parameter
  double rho1 = 1.0, rho2 = 1.0, A = 0.0, B = 0.0, C = 0.0, E = 0.0;
  double Mh = 0.0;     // momentum-estimator error-level constant
};

// Closed-form right-hand side of the cited convergence guarantee at index t
// (fixed-horizon kinds read t as the horizon).
double theorem_bound(BoundKind kind, const BoundInputs& in, long t);

}  // namespace bsfw
