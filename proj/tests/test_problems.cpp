#include <doctest.h>

#include <cmath>

#include "bsfw/ingest.hpp"
#include "bsfw/problems.hpp"
#include "bsfw/rng.hpp"

using namespace bsfw;

namespace {

Vector central_difference(const Problem& p, const Vector& x) {
  const double h = 1e-6 * (1.0 + norm2(x));
  Vector g(x.size());
  Vector a = x, b = x;
  for (std::size_t j = 0; j < x.size(); ++j) {
    a[j] += h;
    b[j] -= h;
    g[j] = (p.value(a) - p.value(b)) / (2.0 * h);
    a[j] = x[j];
    b[j] = x[j];
  }
  return g;
}

void check_gradient_against_differences(const Problem& p, const Vector& x) {
  const Vector g = p.gradient(x);
  const Vector fd = central_difference(p, x);
  const double scale_ref = std::max(1.0, norm2(g));
  for (std::size_t j = 0; j < x.size(); ++j) CHECK(std::abs(g[j] - fd[j]) <= 1e-5 * scale_ref);
}

Vector random_l1_point(Rng& rng, int n, double tau) {
  Vector x(static_cast<std::size_t>(n));
  for (double& v : x) v = rng.next_gaussian();
  const double r = rng.next_double() * tau;
  const double nrm = norm1(x);
  if (nrm > 0) scale(x, r / nrm);
  return x;
}

LogisticProblem make_logistic(int n, int m, std::uint64_t seed) {
  Dataset d = synth_logistic(n, m, 0.6, seed);
  return LogisticProblem(std::move(d.features), std::move(d.labels));
}

}  // namespace

TEST_CASE("logistic loss at the origin is ln 2") {
  const auto p = make_logistic(4, 12, 3);
  CHECK(p.value(Vector(4, 0.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("logistic gradient on a single sample") {
  SparseRowMatrix a(1, 2);
  std::vector<std::pair<int, double>> row{{0, 1.0}};
  a.set_row(0, row);
  const LogisticProblem p(std::move(a), {1.0});
  const Vector g = p.gradient({0.0, 0.0});
  CHECK(g[0] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(g[1] == 0.0);
}

TEST_CASE("matrix completion entry loss") {
  CHECK(MatrixCompletionProblem::entry_loss_derivative(1.0, 0.0) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  // perfect fit costs nothing
  MatrixCompletionProblem p(2, 2, {{0, 0, 0.7}, {1, 1, -0.3}});
  Vector x(4, 0.0);
  x[0] = 0.7;
  x[3] = -0.3;
  CHECK(p.value(x) == 0.0);
  // entry loss stays within [0, 1)
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double u = 50.0 * rng.next_gaussian();
    const double l = MatrixCompletionProblem::entry_loss(u, 0.0);
    CHECK(l >= 0.0);
    CHECK(l < 1.0);
  }
}

TEST_CASE("quadratic oracles") {
  const QuadraticProblem p(Vector{0.0, 0.0});
  CHECK(p.value({3.0, 4.0}) == 12.5);
  const Vector g = p.gradient({3.0, 4.0});
  CHECK(g == Vector{3.0, 4.0});
  CHECK(p.lipschitz_bound() == 1.0);
}

TEST_CASE("lipschitz bound for identity-feature logistic") {
  const int m = 5;
  SparseRowMatrix a(m, m);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> row{{i, 1.0}};
    a.set_row(i, row);
  }
  std::vector<double> labels(m, 1.0);
  const LogisticProblem p(std::move(a), std::move(labels));
  CHECK(p.lipschitz_bound() == doctest::Approx(1.0 / (4.0 * m)).epsilon(1e-3));
}

TEST_CASE("lipschitz bound dominates sampled gradient ratios") {
  const auto p = make_logistic(3, 5, 7);
  const double L = p.lipschitz_bound();
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vector x = random_l1_point(rng, 3, 2.0);
    const Vector y = random_l1_point(rng, 3, 2.0);
    const Vector d = sub(x, y);
    const double nd = norm2(d);
    if (nd < 1e-12) continue;
    const double ratio = norm2(sub(p.gradient(x), p.gradient(y))) / nd;
    CHECK(ratio <= L * (1.0 + 1e-9));
  }
}

TEST_CASE("stationarity gap") {
  const auto set = ConstraintSet::l1_ball(1.0, 2);
  const QuadraticProblem centered(Vector{0.0, 0.0});
  CHECK(fw_gap(centered, {0.0, 0.0}, set) == 0.0);

  const QuadraticProblem far(Vector{10.0, 0.0});
  CHECK(fw_gap(far, {1.0, 0.0}, set) == 0.0);   // constrained optimum
  CHECK(fw_gap(far, {-1.0, 0.0}, set) == 22.0);

  Rng rng(9);
  const auto p = make_logistic(4, 10, 10);
  const auto set4 = ConstraintSet::l1_ball(3.0, 4);
  for (int trial = 0; trial < 50; ++trial)
    CHECK(fw_gap(p, random_l1_point(rng, 4, 3.0), set4) >= 0.0);
}

TEST_CASE("analytic gradients match central differences at random feasible points") {
  Rng rng(11);
  const auto logistic = make_logistic(6, 20, 12);
  for (int t = 0; t < 100; ++t) check_gradient_against_differences(logistic, random_l1_point(rng, 6, 4.0));

  const auto completion = synth_completion(5, 4, 12, 2, 13);
  for (int t = 0; t < 100; ++t) {
    Vector x(20);
    for (double& v : x) v = 0.3 * rng.next_gaussian();
    check_gradient_against_differences(*completion, x);
  }

  const QuadraticProblem quad(std::vector<Vector>{{0.5, -0.2, 0.1}, {-0.3, 0.4, 0.2}});
  for (int t = 0; t < 100; ++t) check_gradient_against_differences(quad, random_l1_point(rng, 3, 2.0));
}

TEST_CASE("component gradients average to the full gradient") {
  Rng rng(17);
  const auto logistic = make_logistic(5, 24, 18);
  const auto completion = synth_completion(4, 4, 10, 2, 19);
  const QuadraticProblem quad(std::vector<Vector>{{0.5, -0.2}, {-0.3, 0.4}, {0.1, 0.1}});
  for (const Problem* p : {static_cast<const Problem*>(&logistic),
                           static_cast<const Problem*>(completion.get()),
                           static_cast<const Problem*>(&quad)}) {
    Vector x(static_cast<std::size_t>(p->dim()));
    for (double& v : x) v = 0.4 * rng.next_gaussian();
    Vector acc(x.size(), 0.0), g(x.size());
    for (int i = 0; i < p->num_components(); ++i) {
      p->component_grad(i, x, g);
      axpy(1.0, g, acc);
    }
    scale(acc, 1.0 / p->num_components());
    const Vector full = p->gradient(x);
    for (std::size_t j = 0; j < x.size(); ++j)
      CHECK(std::abs(acc[j] - full[j]) <= 1e-12 * std::max(1.0, std::abs(full[j])));
  }
}

TEST_CASE("partial derivatives agree with the gradient") {
  Rng rng(23);
  const auto p = make_logistic(5, 15, 21);
  for (int t = 0; t < 20; ++t) {
    const Vector x = random_l1_point(rng, 5, 2.0);
    const Vector g = p.gradient(x);
    for (int j = 0; j < 5; ++j)
      CHECK(p.partial(j, x) == doctest::Approx(g[static_cast<std::size_t>(j)]).epsilon(1e-12));
  }
}
