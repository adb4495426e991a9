#include "bsfw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bsfw {

double Rng::next_gaussian() {
  const double u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
  if (k < 0 || k > n) throw ConfigError("sample_without_replacement: need 0 <= k <= n");
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  // Partial Fisher-Yates; every k-subset is equally likely.
  for (int j = 0; j < k; ++j) {
    const auto r = j + static_cast<int>(next_index(static_cast<std::uint64_t>(n - j)));
    std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(r)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace bsfw
