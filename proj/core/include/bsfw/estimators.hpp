#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsfw/numerics.hpp"
#include "bsfw/problems.hpp"
#include "bsfw/rng.hpp"

namespace bsfw {

enum class EstimatorKind { Full, Sag, Saga, Lsvrg, Sarah, Sega, Jaguar, Zoja, HeavyBall };

std::string estimator_name(EstimatorKind k);
std::optional<EstimatorKind> estimator_from_name(const std::string& name);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Full;
  int batch_size = 1;         // b_s, batch estimators
  double refresh_prob = 0.5;  // p: anchor refresh (L-SVRG) / exact-gradient branch (SARAH)
  double zo_step = 1e-3;      // tau, forward-difference width
  // The coordinate-replacement update reads its fresh partial derivative at
  // the previous iterate; this switches it to the current one instead.
  bool jaguar_uses_current_point = false;

  void validate(int num_components, int dim) const;
};

// Constants (rho1, rho2, A, B, C, E) of the second-moment error recursion
//   E[|err_t|^2]   <= (1-rho1)|err_{t-1}|^2 + A sig_{t-1}^2 + eta_{t-1}^2 B D^2 + C
//   E[sig_t^2]     <= (1-rho2)sig_{t-1}^2 + eta_{t-1}^2 E D^2
// for each estimator. L is the smoothness constant appropriate for the kind
// and `horizon` is only read by HeavyBall.
struct EstimatorParams {
  double rho1 = 1.0, rho2 = 1.0, A = 0.0, B = 0.0, C = 0.0, E = 0.0;
};
EstimatorParams estimator_recursion_params(const EstimatorConfig& cfg, double lipschitz, int dim,
                                           int num_components, long horizon = 0);

// Exact diameter of the image of the l1 ball under a data matrix, maximized
// over vertex pairs. The dual-averaging estimator measures step lengths and
// movement in this mapped space.
double mapped_l1_diameter(const SparseRowMatrix& a, double tau);

// Explicit realization of one step's randomness, so tests can enumerate the
// full outcome distribution and replay transitions on state copies.
struct StepOutcome {
  std::vector<int> batch;  // sorted batch indices (batch estimators)
  int coordinate = -1;     // sampled coordinate (coordinate estimators)
  bool refresh = false;    // anchor refresh / exact-gradient branch taken
};

// Gradient estimator with internal per-kind memory. Value semantics: copying
// the object snapshots the whole state.
//
// Draw order per step (one seeded stream per instance): the Bernoulli draw,
// where the kind has one, is consumed first; the batch or coordinate draw
// second. SARAH consumes no batch draw when the exact-gradient branch fires.
class Estimator {
 public:
  Estimator(const EstimatorConfig& cfg, const Problem& p, const Vector& x0, std::uint64_t seed);

  const EstimatorConfig& config() const { return cfg_; }
  const Vector& current() const { return m_; }
  long long init_samples() const { return init_samples_; }

  // Advance to iteration t >= 1; returns the number of oracle samples charged.
  long long step(const Problem& p, const Vector& x_t, const Vector& x_prev, long t, double momentum = 0.0);

  StepOutcome draw_outcome(const Problem& p);
  long long apply_outcome(const Problem& p, const Vector& x_t, const Vector& x_prev, long t,
                          double momentum, const StepOutcome& outcome);
  // All possible outcomes with probabilities; only for enumerable instances.
  std::vector<std::pair<double, StepOutcome>> enumerate_outcomes(const Problem& p) const;

  // Step sizes for the dual-averaging kind are formed after mapping through
  // the data matrix; everything else uses the identity map.
  bool has_geometry_map() const { return cfg_.kind == EstimatorKind::Sag; }
  Vector map_point(const Problem& p, const Vector& v) const;

  // Estimation error err_t: m^t - grad f(x^t), or the dual-variable error for
  // the dual-averaging kind.
  Vector error_vector(const Problem& p, const Vector& x_t) const;
  // Auxiliary second-moment sequence entering the recursion (0 where unused;
  // HeavyBall's value depends on an external variance bound and is assembled
  // by the measurement harness instead).
  double sigma_sq(const Problem& p, const Vector& x_t) const;

  // State accessors for tests.
  const std::vector<Vector>& component_table() const { return table_; }  // y_i
  const Vector& coordinate_table() const { return h_; }                  // h
  const Vector& anchor_point() const { return w_; }
  const Vector& dual_variable() const { return alpha_; }

 private:
  void require_components(const Problem& p) const;
  Vector batch_mean_component_grad(const Problem& p, const std::vector<int>& batch, const Vector& x) const;

  EstimatorConfig cfg_;
  Rng rng_;
  Vector m_;
  long long init_samples_ = 0;

  std::vector<Vector> table_;  // SAGA per-component gradients
  Vector table_mean_;          // running mean of table_
  Vector h_;                   // SEGA coordinate sketch
  Vector w_;                   // L-SVRG anchor point
  Vector grad_w_;              // cached full gradient at the anchor
  Vector alpha_;               // SAG dual variable (R^m)
};

}  // namespace bsfw
