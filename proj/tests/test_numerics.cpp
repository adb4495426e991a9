#include <doctest.h>

#include <cmath>
#include <map>

#include "bsfw/numerics.hpp"
#include "bsfw/rng.hpp"

using namespace bsfw;

namespace {
Vector random_vector(Rng& rng, std::size_t n) {
  Vector v(n);
  for (double& x : v) x = 2.0 * rng.next_double() - 1.0;
  return v;
}
}  // namespace

TEST_CASE("dot basics") {
  CHECK(dot({1, 0}, {0, 1}) == 0.0);
  CHECK(dot({1, 2}, {1, 2}) == 5.0);
  CHECK(dot({0, 0}, {3, 4}) == 0.0);
  CHECK_THROWS_AS(dot({1, 2}, {1}), DimensionError);
}

TEST_CASE("norms") {
  CHECK(norm2({3, 4}) == 5.0);
  CHECK(norm2({0, 0}) == 0.0);
  CHECK(norm2({-1, 0}) == 1.0);
  CHECK(norm1({3, -4}) == 7.0);
  CHECK(norm1({0, 0}) == 0.0);
  CHECK(norm1({1, 1, 1}) == 3.0);
}

TEST_CASE("dot is symmetric and bilinear on random inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_vector(rng, 12);
    const auto b = random_vector(rng, 12);
    const auto c = random_vector(rng, 12);
    const double alpha = 4.0 * rng.next_double() - 2.0;
    CHECK(dot(a, b) == doctest::Approx(dot(b, a)).epsilon(1e-12));
    Vector combo = c;
    axpy(alpha, a, combo);
    CHECK(dot(combo, b) == doctest::Approx(alpha * dot(a, b) + dot(c, b)).epsilon(1e-12));
    CHECK(norm2(a) * norm2(a) == doctest::Approx(dot(a, a)).epsilon(1e-12));
  }
}

TEST_CASE("sparse row matrix validates its entries") {
  SparseRowMatrix a(2, 3);
  std::vector<std::pair<int, double>> bad{{1, 1.0}, {1, 2.0}};
  CHECK_THROWS_AS(a.set_row(0, bad), DimensionError);
  std::vector<std::pair<int, double>> decreasing{{2, 1.0}, {0, 2.0}};
  CHECK_THROWS_AS(a.set_row(0, decreasing), DimensionError);
  std::vector<std::pair<int, double>> out_of_range{{3, 1.0}};
  CHECK_THROWS_AS(a.set_row(0, out_of_range), DimensionError);
  std::vector<std::pair<int, double>> inf{{0, std::numeric_limits<double>::infinity()}};
  CHECK_THROWS_AS(a.set_row(0, inf), DimensionError);
}

TEST_CASE("sparse matvec equals the dense product on random instances") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 10;
    SparseRowMatrix a(n, n);
    std::vector<Vector> dense(n, Vector(n, 0.0));
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, double>> entries;
      for (int j = 0; j < n; ++j) {
        if (rng.next_double() < 0.4) {
          const double v = rng.next_gaussian();
          entries.emplace_back(j, v);
          dense[i][static_cast<std::size_t>(j)] = v;
        }
      }
      a.set_row(i, entries);
    }
    const Vector x = random_vector(rng, n);
    const Vector got = a.multiply(x);
    for (int i = 0; i < n; ++i)
      CHECK(got[static_cast<std::size_t>(i)] == doctest::Approx(dot(dense[i], x)).epsilon(1e-12));
    // transpose route agrees with the explicit sum
    const Vector y = random_vector(rng, n);
    const Vector gt = a.multiply_transpose(y);
    Vector want(n, 0.0);
    for (int i = 0; i < n; ++i) axpy(y[static_cast<std::size_t>(i)], dense[i], want);
    for (int j = 0; j < n; ++j) CHECK(gt[static_cast<std::size_t>(j)] == doctest::Approx(want[static_cast<std::size_t>(j)]).epsilon(1e-12));
  }
}

TEST_CASE("singular values of known and random matrices") {
  DenseMatrix d(2, 2);
  d.at(0, 0) = 3.0;
  d.at(1, 1) = 1.0;
  const auto sv = singular_values(d);
  CHECK(sv[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sv[1] == doctest::Approx(1.0).epsilon(1e-12));

  // Frobenius and determinant identities pin the spectrum of random 3x3s.
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    DenseMatrix a(3, 3);
    for (double& v : a.data()) v = rng.next_gaussian();
    const auto s = singular_values(a);
    CHECK(s[0] >= s[1]);
    CHECK(s[1] >= s[2]);
    double frob = 0.0;
    for (double v : a.data()) frob += v * v;
    CHECK(s[0] * s[0] + s[1] * s[1] + s[2] * s[2] == doctest::Approx(frob).epsilon(1e-10));
    const double det = a.at(0, 0) * (a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(2, 1)) -
                       a.at(0, 1) * (a.at(1, 0) * a.at(2, 2) - a.at(1, 2) * a.at(2, 0)) +
                       a.at(0, 2) * (a.at(1, 0) * a.at(2, 1) - a.at(1, 1) * a.at(2, 0));
    CHECK(s[0] * s[1] * s[2] == doctest::Approx(std::abs(det)).epsilon(1e-8));
  }
}

TEST_CASE("spectral norm upper bound dominates random Rayleigh quotients") {
  Rng rng(9);
  SparseRowMatrix a(6, 4);
  for (int i = 0; i < 6; ++i) {
    std::vector<std::pair<int, double>> entries;
    for (int j = 0; j < 4; ++j) entries.emplace_back(j, rng.next_gaussian());
    a.set_row(i, entries);
  }
  const double bound = spectral_norm_sq_upper(a);
  for (int trial = 0; trial < 300; ++trial) {
    Vector v = random_vector(rng, 4);
    const double q = norm2_sq(a.multiply(v)) / norm2_sq(v);
    CHECK(q <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("rng sampling without replacement is uniform over subsets") {
  Rng rng(3);
  std::map<std::vector<int>, int> counts;
  const int trials = 60000;
  for (int i = 0; i < trials; ++i) ++counts[rng.sample_without_replacement(5, 2)];
  CHECK(counts.size() == 10);
  for (const auto& [subset, c] : counts) {
    CHECK(c > trials / 10 * 0.9);
    CHECK(c < trials / 10 * 1.1);
  }
}
