#include <doctest.h>

#include <cmath>

#include "bsfw/estimators.hpp"
#include "bsfw/ingest.hpp"
#include "bsfw/recursion.hpp"

using namespace bsfw;

namespace {

// f(x) = sum x_j^2; test-only objective with a gradient independent of the
// library's quadratic (used as the forward-difference oracle target).
struct SquareNorm final : Problem {
  int n;
  explicit SquareNorm(int dim) : n(dim) {}
  int dim() const override { return n; }
  int num_components() const override { return 1; }
  double value(const Vector& x) const override { return norm2_sq(x); }
  void grad(const Vector& x, Vector& out) const override {
    out = x;
    scale(out, 2.0);
  }
  void component_grad(int, const Vector& x, Vector& out) const override { grad(x, out); }
  double partial(int j, const Vector& x) const override { return 2.0 * x[static_cast<std::size_t>(j)]; }
  double lipschitz_bound() const override { return 2.0; }
  double component_lipschitz_bound(int) const override { return 2.0; }
};

QuadraticProblem four_centers() {
  return QuadraticProblem(std::vector<Vector>{
      {0.6, -0.2, 0.1}, {-0.4, 0.5, 0.0}, {0.2, 0.1, -0.7}, {0.0, -0.3, 0.4}});
}

// Conditional mean of the next estimate over every random outcome.
Vector enumerated_mean(const Estimator& est, const Problem& p, const Vector& x_t, const Vector& x_prev,
                       long t, double momentum = 0.0) {
  Vector mean(static_cast<std::size_t>(p.dim()), 0.0);
  double total = 0.0;
  for (const auto& [prob, outcome] : est.enumerate_outcomes(p)) {
    Estimator branch = est;
    branch.apply_outcome(p, x_t, x_prev, t, momentum, outcome);
    axpy(prob, branch.current(), mean);
    total += prob;
  }
  REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
  return mean;
}

void check_close(const Vector& a, const Vector& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol);
}

}  // namespace

TEST_CASE("initialization per kind") {
  const auto quad = four_centers();
  const Vector x0{0.1, 0.0, -0.1};

  SUBCASE("momentum starts from zero") {
    Estimator est({.kind = EstimatorKind::HeavyBall, .batch_size = 2}, quad, x0, 1);
    CHECK(is_zero(est.current()));
    CHECK(est.init_samples() == 0);
  }
  SUBCASE("table estimator stores per-component gradients") {
    const QuadraticProblem single(Vector{0.0, 0.0});
    Estimator est({.kind = EstimatorKind::Saga}, single, {1.0, 2.0}, 1);
    CHECK(est.component_table()[0] == Vector{1.0, 2.0});
    CHECK(est.current() == Vector{1.0, 2.0});
    CHECK(est.init_samples() == 1);
  }
  SUBCASE("exact-gradient starts for the batch and coordinate kinds") {
    for (EstimatorKind k : {EstimatorKind::Full, EstimatorKind::Lsvrg, EstimatorKind::Sarah,
                            EstimatorKind::Sega, EstimatorKind::Jaguar}) {
      Estimator est({.kind = k, .batch_size = 2}, quad, x0, 1);
      check_close(est.current(), quad.gradient(x0), 1e-15);
      CHECK(est.init_samples() == quad.num_components());
    }
  }
  SUBCASE("forward differences seed the zeroth-order kind") {
    const SquareNorm sq(1);
    Estimator est({.kind = EstimatorKind::Zoja, .zo_step = 0.1}, sq, {1.0}, 1);
    CHECK(est.current()[0] == doctest::Approx(2.1).epsilon(1e-12));  // (1.21 - 1) / 0.1
    CHECK(est.init_samples() == 2);                                  // n + 1 function values
    Estimator wide({.kind = EstimatorKind::Zoja, .zo_step = 0.1}, quad, x0, 1);
    CHECK(wide.init_samples() == 4);
  }
  SUBCASE("dual variable reproduces the exact gradient") {
    Dataset d = synth_logistic(3, 5, 0.8, 2);
    const LogisticProblem p(std::move(d.features), std::move(d.labels));
    const Vector start{0.2, -0.1, 0.3};
    Estimator est({.kind = EstimatorKind::Sag, .batch_size = 2}, p, start, 1);
    check_close(est.current(), p.gradient(start), 1e-14);
    CHECK(est.init_samples() == 5);
  }
}

TEST_CASE("batch size cannot exceed the component count") {
  const auto quad = four_centers();
  CHECK_THROWS_AS(Estimator({.kind = EstimatorKind::Saga, .batch_size = 5}, quad, {0, 0, 0}, 1), ConfigError);
}

TEST_CASE("table update formula, verified against the state accessors") {
  const auto quad = four_centers();
  const Vector x0{0.1, 0.0, -0.1};
  Estimator est({.kind = EstimatorKind::Saga, .batch_size = 2}, quad, x0, 1);
  const auto y_before = est.component_table();
  Vector table_mean(3, 0.0);
  for (const auto& y : y_before) axpy(1.0 / 4.0, y, table_mean);

  const Vector x1{0.3, -0.2, 0.2};
  StepOutcome o;
  o.batch = {0, 2};
  Estimator stepped = est;
  stepped.apply_outcome(quad, x1, x0, 1, 0.0, o);

  Vector want = table_mean;
  Vector g(3);
  for (int i : o.batch) {
    quad.component_grad(i, x1, g);
    axpy(0.5, g, want);
    axpy(-0.5, y_before[static_cast<std::size_t>(i)], want);
  }
  check_close(stepped.current(), want, 1e-14);
  // refreshed entries hold the new component gradients, others are untouched
  quad.component_grad(0, x1, g);
  check_close(stepped.component_table()[0], g, 1e-15);
  check_close(stepped.component_table()[1], y_before[1], 0.0);
}

TEST_CASE("exact-gradient branch of the recursive difference estimator") {
  const auto quad = four_centers();
  const Vector x0{0.1, 0.0, -0.1};
  Estimator est({.kind = EstimatorKind::Sarah, .batch_size = 2, .refresh_prob = 1.0}, quad, x0, 1);
  const Vector x1{0.3, -0.2, 0.2};
  est.step(quad, x1, x0, 1);
  check_close(est.current(), quad.gradient(x1), 1e-15);
}

TEST_CASE("difference branch keeps the drift of the previous estimate") {
  const auto quad = four_centers();
  const Vector x0{0.1, 0.0, -0.1};
  Estimator est({.kind = EstimatorKind::Sarah, .batch_size = 4, .refresh_prob = 0.5}, quad, x0, 1);
  const Vector m_prev = est.current();
  const Vector x1{0.3, -0.2, 0.2};
  StepOutcome o;
  o.refresh = false;
  o.batch = {0, 1, 2, 3};
  est.apply_outcome(quad, x1, x0, 1, 0.0, o);
  // full batch: m^t = m^{t-1} + grad(x1) - grad(x0)
  Vector want = m_prev;
  axpy(1.0, quad.gradient(x1), want);
  axpy(-1.0, quad.gradient(x0), want);
  check_close(est.current(), want, 1e-14);
}

TEST_CASE("momentum update is the stated convex combination") {
  const QuadraticProblem p(Vector{0.0, 0.0});
  Estimator est({.kind = EstimatorKind::HeavyBall, .batch_size = 1}, p, {0.0, 0.0}, 1);
  StepOutcome o;
  o.batch = {0};
  est.apply_outcome(p, {2.0, 0.0}, {0.0, 0.0}, 1, 1.0, o);
  CHECK(est.current() == Vector{2.0, 0.0});
  est.apply_outcome(p, {0.0, 2.0}, {2.0, 0.0}, 2, 0.5, o);
  CHECK(est.current() == Vector{1.0, 1.0});
}

TEST_CASE("coordinate sketch update and its conditional mean") {
  // Start at the exact minimizer so the sketch table is zero, then move.
  const auto quad = four_centers();
  const Vector x0 = quad.mean_center();
  Estimator est({.kind = EstimatorKind::Sega}, quad, x0, 1);
  CHECK(norm2(est.coordinate_table()) <= 1e-15);

  Vector x1 = x0;
  x1[0] += 1.0;
  x1[1] += 2.0;  // gradient is (1, 2, 0)
  StepOutcome o;
  o.coordinate = 0;
  Estimator stepped = est;
  stepped.apply_outcome(quad, x1, x0, 1, 0.0, o);
  check_close(stepped.current(), {3.0 * 1.0, 0.0, 0.0}, 1e-14);
  CHECK(stepped.coordinate_table()[0] == doctest::Approx(1.0).epsilon(1e-15));

  check_close(enumerated_mean(est, quad, x1, x0, 1), quad.gradient(x1), 1e-13);
}

TEST_CASE("unbiasedness by enumeration") {
  const auto quad = four_centers();
  const Vector x0{0.1, 0.0, -0.1};
  const Vector x1{0.3, -0.2, 0.2};
  const Vector g1 = quad.gradient(x1);

  SUBCASE("table estimator") {
    Estimator est({.kind = EstimatorKind::Saga, .batch_size = 2}, quad, x0, 1);
    est.step(quad, x1, x0, 1);  // desynchronize the table first
    const Vector x2{-0.1, 0.4, 0.0};
    check_close(enumerated_mean(est, quad, x2, x1, 2), quad.gradient(x2), 1e-13);
  }
  SUBCASE("anchored estimator over both branches") {
    Estimator est({.kind = EstimatorKind::Lsvrg, .batch_size = 2, .refresh_prob = 0.5}, quad, x0, 1);
    check_close(enumerated_mean(est, quad, x1, x0, 1), g1, 1e-13);
  }
  SUBCASE("momentum estimator against its formula mean") {
    Estimator est({.kind = EstimatorKind::HeavyBall, .batch_size = 2}, quad, x0, 1);
    est.apply_outcome(quad, x0, x0, 1, 1.0, StepOutcome{.batch = {0, 1}});
    const Vector m_prev = est.current();
    const double rho = 0.25;
    Vector want = m_prev;
    scale(want, 1.0 - rho);
    axpy(rho, g1, want);
    check_close(enumerated_mean(est, quad, x1, x0, 2, rho), want, 1e-13);
  }
  SUBCASE("dual refresh against its per-index inclusion formula") {
    Dataset d = synth_logistic(3, 4, 0.8, 5);
    const LogisticProblem p(std::move(d.features), std::move(d.labels));
    const Vector s0{0.2, -0.1, 0.3};
    Estimator est({.kind = EstimatorKind::Sag, .batch_size = 2}, p, s0, 1);
    const Vector alpha_before = est.dual_variable();
    const Vector s1{-0.2, 0.25, 0.05};
    const int m = p.num_components();
    Vector mean_alpha(static_cast<std::size_t>(m), 0.0);
    for (const auto& [prob, outcome] : est.enumerate_outcomes(p)) {
      Estimator branch = est;
      branch.apply_outcome(p, s1, s0, 1, 0.0, outcome);
      axpy(prob, branch.dual_variable(), mean_alpha);
    }
    const auto* A = p.linear_map();
    const double include = 2.0 / m;
    for (int i = 0; i < m; ++i) {
      const double fresh = p.scalar_loss_derivative(i, A->row_dot(i, s1)) / m;
      const double want = include * fresh + (1.0 - include) * alpha_before[static_cast<std::size_t>(i)];
      CHECK(mean_alpha[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("coordinate-replacement estimator mean mixes old estimate and stale gradient") {
  const auto quad = four_centers();
  const Vector x0{0.1, 0.0, -0.1};
  Estimator est({.kind = EstimatorKind::Jaguar}, quad, x0, 1);
  est.step(quad, {0.3, -0.2, 0.2}, x0, 1);
  const Vector m_prev = est.current();
  const Vector x_prev{0.3, -0.2, 0.2};
  const Vector x2{-0.1, 0.4, 0.0};
  const int n = 3;
  Vector want = quad.gradient(x_prev);
  scale(want, 1.0 / n);
  axpy(1.0 - 1.0 / n, m_prev, want);
  check_close(enumerated_mean(est, quad, x2, x_prev, 2), want, 1e-13);

  // the documented toggle reads the fresh point instead
  Estimator fresh({.kind = EstimatorKind::Jaguar, .jaguar_uses_current_point = true}, quad, x0, 1);
  StepOutcome o;
  o.coordinate = 1;
  fresh.apply_outcome(quad, x2, x_prev, 1, 0.0, o);
  CHECK(fresh.current()[1] == doctest::Approx(quad.partial(1, x2)).epsilon(1e-15));
}

TEST_CASE("full batches collapse to the exact gradient") {
  const auto quad = four_centers();
  const Vector x0{0.1, 0.0, -0.1};
  const Vector x1{0.3, -0.2, 0.2};
  for (EstimatorKind k : {EstimatorKind::Saga, EstimatorKind::Lsvrg}) {
    Estimator est({.kind = k, .batch_size = 4, .refresh_prob = 0.5}, quad, x0, 1);
    est.step(quad, x1, x0, 1);
    check_close(est.current(), quad.gradient(x1), 1e-14);
  }
}

TEST_CASE("forward-difference coordinate error obeys the curvature bound") {
  const auto quad = four_centers();
  Rng rng(41);
  const double L = quad.lipschitz_bound();
  for (double tau : {0.2, 0.1}) {
    Vector x{0.3, -0.4, 0.2};
    const double f0 = quad.value(x);
    for (int j = 0; j < 3; ++j) {
      Vector shifted = x;
      shifted[static_cast<std::size_t>(j)] += tau;
      const double fd = (quad.value(shifted) - f0) / tau;
      const double err = std::abs(fd - quad.partial(j, x));
      CHECK(err <= L * tau / 2.0 + 1e-12);
    }
  }
  // halving the width halves the error on a quadratic
  Vector x{0.25, -0.15, 0.05};
  auto coord_err = [&](double tau) {
    Vector shifted = x;
    shifted[0] += tau;
    return std::abs((quad.value(shifted) - quad.value(x)) / tau - quad.partial(0, x));
  };
  CHECK(coord_err(0.05) == doctest::Approx(coord_err(0.1) / 2.0).epsilon(1e-9));
  (void)rng;
}

TEST_CASE("sample accounting") {
  const auto quad = four_centers();
  const Vector x0{0.1, 0.0, -0.1};
  const Vector x1{0.3, -0.2, 0.2};
  SUBCASE("full") {
    Estimator est({.kind = EstimatorKind::Full}, quad, x0, 1);
    CHECK(est.step(quad, x1, x0, 1) == 4);
  }
  SUBCASE("batched table") {
    Estimator est({.kind = EstimatorKind::Saga, .batch_size = 3}, quad, x0, 1);
    CHECK(est.step(quad, x1, x0, 1) == 3);
  }
  SUBCASE("anchored, with and without a refresh") {
    Estimator est({.kind = EstimatorKind::Lsvrg, .batch_size = 2, .refresh_prob = 0.5}, quad, x0, 1);
    CHECK(est.apply_outcome(quad, x1, x0, 1, 0.0, {.batch = {0, 1}, .refresh = false}) == 2);
    CHECK(est.apply_outcome(quad, x1, x0, 2, 0.0, {.batch = {0, 1}, .refresh = true}) == 2 + 4);
  }
  SUBCASE("recursive difference") {
    Estimator est({.kind = EstimatorKind::Sarah, .batch_size = 2, .refresh_prob = 0.5}, quad, x0, 1);
    CHECK(est.apply_outcome(quad, x1, x0, 1, 0.0, {.refresh = true}) == 4);
    CHECK(est.apply_outcome(quad, x1, x0, 2, 0.0, {.batch = {1, 3}, .refresh = false}) == 2);
  }
  SUBCASE("coordinate kinds") {
    Estimator sega({.kind = EstimatorKind::Sega}, quad, x0, 1);
    CHECK(sega.apply_outcome(quad, x1, x0, 1, 0.0, {.coordinate = 1}) == 1);
    Estimator zoja({.kind = EstimatorKind::Zoja, .zo_step = 0.1}, quad, x0, 1);
    CHECK(zoja.apply_outcome(quad, x1, x0, 1, 0.0, {.coordinate = 1}) == 2);
  }
}

TEST_CASE("recursion constants per kind") {
  SUBCASE("recursive difference") {
    const auto par = estimator_recursion_params({.kind = EstimatorKind::Sarah, .batch_size = 2, .refresh_prob = 0.5},
                                                1.0, 3, 4);
    CHECK(par.rho1 == 0.5);
    CHECK(par.rho2 == 1.0);
    CHECK(par.A == 0.0);
    CHECK(par.B == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(par.C == 0.0);
    CHECK(par.E == 0.0);
  }
  SUBCASE("coordinate replacement") {
    const auto par = estimator_recursion_params({.kind = EstimatorKind::Jaguar}, 1.0, 4, 4);
    CHECK(par.rho1 == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(par.B == doctest::Approx(12.0).epsilon(1e-15));
  }
  SUBCASE("exact gradient") {
    const auto par = estimator_recursion_params({.kind = EstimatorKind::Full}, 1.0, 3, 4);
    CHECK(par.rho1 == 1.0);
    CHECK(par.rho2 == 1.0);
    CHECK(par.A == 0.0);
    CHECK(par.B == 0.0);
    CHECK(par.C == 0.0);
    CHECK(par.E == 0.0);
  }
  SUBCASE("table estimator matches the stated row") {
    const auto par = estimator_recursion_params({.kind = EstimatorKind::Saga, .batch_size = 1}, 2.0, 3, 4);
    CHECK(par.rho1 == 1.0);
    CHECK(par.rho2 == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    CHECK(par.A == doctest::Approx(1.0 + 1.0 / 8.0).epsilon(1e-15));
    CHECK(par.B == doctest::Approx(4.0 / 4.0 * (1.0 + 8.0)).epsilon(1e-15));
    CHECK(par.E == doctest::Approx(8.0 * 4.0).epsilon(1e-15));
  }
  SUBCASE("momentum row depends on the horizon") {
    const long T = 100;
    const auto par = estimator_recursion_params({.kind = EstimatorKind::HeavyBall, .batch_size = 2}, 1.0, 3, 4, T);
    const double rho_T = 4.0 / std::pow(static_cast<double>(T + 8), 2.0 / 3.0);
    CHECK(par.rho1 == doctest::Approx(rho_T / 2.0).epsilon(1e-15));
    CHECK(par.A == 1.0);
    CHECK(par.B == doctest::Approx(2.0 / rho_T).epsilon(1e-15));
    CHECK(par.rho2 == doctest::Approx(1.0 - std::pow(1.0 - 1.0 / (T + 8.0), 4.0 / 3.0)).epsilon(1e-15));
  }
}

TEST_CASE("error recursion measurements stay within their bounds") {
  const auto set = ConstraintSet::l1_ball(1.5, 3);
  const Schedule sched = Schedule::stoch_quasar_anytime(1.0, 0.25, 0.25);
  SUBCASE("exact gradient never errs") {
    const auto quad = four_centers();
    const auto rep = measure_recursion({.kind = EstimatorKind::Full}, quad, set, sched, 5, 1);
    CHECK(rep.max_error_ratio == 0.0);
    CHECK(rep.passed());
  }
  SUBCASE("coordinate replacement on a two-dimensional quadratic") {
    const QuadraticProblem quad(std::vector<Vector>{{0.4, -0.2}, {-0.3, 0.5}});
    const auto set2 = ConstraintSet::l1_ball(1.0, 2);
    const auto rep = measure_recursion({.kind = EstimatorKind::Jaguar}, quad, set2, sched, 1, 2);
    CHECK(rep.steps_measured == 1);
    CHECK(rep.max_error_ratio <= 1.0 + 1e-9);
  }
  SUBCASE("table estimator with unit batches") {
    const QuadraticProblem quad(std::vector<Vector>{{0.6, -0.2, 0.1}, {-0.4, 0.5, 0.0}, {0.2, 0.1, -0.7}});
    const auto rep = measure_recursion({.kind = EstimatorKind::Saga, .batch_size = 1}, quad, set, sched, 10, 3);
    CHECK(rep.passed());
  }
  SUBCASE("oversized instances are rejected") {
    Dataset d = synth_logistic(8, 10, 0.5, 4);
    const LogisticProblem p(std::move(d.features), std::move(d.labels));
    const auto set8 = ConstraintSet::l1_ball(1.0, 8);
    CHECK_THROWS_AS(measure_recursion({.kind = EstimatorKind::Saga}, p, set8, sched, 3, 1), ConfigError);
  }
}

TEST_CASE("error recursions hold across seeds and kinds") {
  const auto set = ConstraintSet::l1_ball(1.5, 3);
  for (std::uint64_t seed : {1ull, 17ull, 230ull}) {
    for (EstimatorKind kind : {EstimatorKind::Sag, EstimatorKind::Saga, EstimatorKind::Lsvrg,
                               EstimatorKind::Sarah, EstimatorKind::Sega, EstimatorKind::Jaguar,
                               EstimatorKind::Zoja, EstimatorKind::HeavyBall}) {
      EstimatorConfig est{.kind = kind, .batch_size = 2, .refresh_prob = 0.5, .zo_step = 0.02};
      std::unique_ptr<Problem> problem;
      if (kind == EstimatorKind::Sag) {
        Dataset d = synth_logistic(3, 4, 0.8, 20 + seed);
        problem = std::make_unique<LogisticProblem>(std::move(d.features), std::move(d.labels));
      } else {
        problem = std::make_unique<QuadraticProblem>(std::vector<Vector>{
            {0.6, -0.2, 0.1}, {-0.4, 0.5, 0.0}, {0.2, 0.1, -0.7}, {0.0, -0.3, 0.4}});
      }
      const Schedule sched = kind == EstimatorKind::HeavyBall
                                 ? Schedule::heavy_ball_quasar(1.0)
                                 : Schedule::stoch_quasar_anytime(1.0, 0.25, 0.25);
      const auto rep = measure_recursion(est, *problem, set, sched, 10, seed);
      INFO(estimator_name(kind), " seed ", seed);
      CHECK(rep.max_error_ratio <= 1.0 + 1e-9);
      CHECK(rep.max_sigma_ratio <= 1.0 + 1e-9);
    }
  }
}
