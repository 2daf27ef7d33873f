#ifndef SCENRED_TESTS_SUPPORT_HPP
#define SCENRED_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "scenred/core.hpp"
#include "scenred/problems.hpp"
#include "scenred/rng.hpp"

namespace testing {

using scenred::ScenarioSet;
using scenred::Vector;

inline ScenarioSet set_of(std::vector<Vector> rows) { return ScenarioSet(rows); }

inline ScenarioSet random_set(std::size_t n, std::size_t count, std::uint64_t seed) {
  scenred::Rng rng(seed);
  std::vector<Vector> rows(count, Vector(n));
  for (auto& r : rows) {
    for (auto& v : r) v = rng.uniform01();
  }
  return ScenarioSet(rows);
}

inline ScenarioSet random_int_set(std::size_t n, std::size_t count, std::uint64_t seed, int hi = 10) {
  scenred::Rng rng(seed);
  std::vector<Vector> rows(count, Vector(n));
  for (auto& r : rows) {
    for (auto& v : r) v = static_cast<double>(rng.uniform_int(0, hi));
  }
  return ScenarioSet(rows);
}

// Worst case of x over a set, recomputed independently of the library.
inline double worst(const Vector& x, const ScenarioSet& u) {
  double best = -1e300;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * u[k][i];
    best = std::max(best, s);
  }
  return best;
}

// Smallest subset of u whose worst case matches u on every listed x, by
// scanning subsets in order of size.
inline std::size_t brute_force_min_sufficient(const ScenarioSet& u, const std::vector<Vector>& xs) {
  const std::size_t n = u.size();
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    scenred::IndexSet idx;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) idx.push_back(k);
    }
    const auto sub = u.subset(idx);
    bool ok = true;
    for (const auto& x : xs) {
      const double a = worst(x, sub), b = worst(x, u);
      if (std::abs(a - b) > 1e-9 * (1 + std::abs(b))) {
        ok = false;
        break;
      }
    }
    if (ok) best = size;
  }
  return best;
}

}  // namespace testing

#endif  // SCENRED_TESTS_SUPPORT_HPP
