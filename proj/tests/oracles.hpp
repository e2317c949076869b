#pragma once

// Independent reference implementations used only by tests: deliberately
// naive, sharing no code with the library paths they check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "gaplab/variational.hpp"

namespace oracles {

inline bool trial_division_is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline uint64_t trial_division_pi(uint64_t x) {
  uint64_t count = 0;
  for (uint64_t n = 2; n <= x; ++n)
    if (trial_division_is_prime(n)) ++count;
  return count;
}

inline int brute_moebius(uint64_t n) {
  int mu = 1;
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

inline uint64_t brute_phi(uint64_t n) {
  uint64_t count = 0;
  for (uint64_t a = 1; a <= n; ++a) {
    uint64_t x = a, y = n;
    while (y) { uint64_t t = x % y; x = y; y = t; }
    if (x == 1) ++count;
  }
  return count;
}

// admissibility against every prime up to max offset, no shortcuts
inline bool brute_admissible(const std::vector<uint64_t>& offsets) {
  const uint64_t pmax = offsets.empty() ? 0 : *std::max_element(offsets.begin(), offsets.end());
  for (uint64_t p = 2; p <= std::max<uint64_t>(pmax, 2); ++p) {
    if (!trial_division_is_prime(p)) continue;
    std::vector<uint8_t> hit(p, 0);
    uint64_t distinct = 0;
    for (uint64_t h : offsets)
      if (!hit[h % p]) { hit[h % p] = 1; ++distinct; }
    if (distinct == p) return false;
  }
  return true;
}

inline uint64_t brute_smooth_count(uint64_t x, uint64_t y) {
  uint64_t count = 0;
  for (uint64_t n = 1; n <= x; ++n) {
    uint64_t m = n, biggest = 1;
    for (uint64_t p = 2; p * p <= m; ++p)
      while (m % p == 0) { m /= p; biggest = std::max(biggest, p); }
    if (m > 1) biggest = std::max(biggest, m);
    if (biggest <= y) ++count;
  }
  return count;
}

// Midpoint Riemann sums over the supporting simplexes, k = 2 only; the
// returned error bound is crude but valid for the smooth integrands used in
// the tests.
struct GridResult {
  double value;
  double error_bound;
};

inline GridResult grid_I_k2(const gaplab::TestFunction& f, int n) {
  const double cap = 1.0 + gaplab::rat_to_double(f.eta);
  const double h = cap / n;
  double sum = 0, maxabs = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double t1 = (i + 0.5) * h, t2 = (j + 0.5) * h;
      if (t1 + t2 > cap) continue;
      const double v = f.poly.eval(std::vector<double>{t1, t2});
      sum += v * v * h * h;
      maxabs = std::max(maxabs, std::fabs(v * v));
    }
  }
  // boundary cells along the diagonal plus O(h) interior drift
  return {sum, (3.0 * cap * h) * std::max(1.0, maxabs) * 4.0};
}

inline GridResult grid_J_k2(const gaplab::TestFunction& f, uint32_t idx, int n) {
  const double eta = gaplab::rat_to_double(f.eta);
  const double outer_cap = 1.0 - eta;
  const double inner_base = 1.0 + eta;
  const double h = std::max(outer_cap, 1e-12) / n;
  double sum = 0, maxabs = 0;
  for (int i = 0; i < n; ++i) {
    const double t_out = (i + 0.5) * h;
    const double cap = inner_base - t_out;
    double inner = 0;
    const int m = n;
    const double hi = cap / m;
    for (int j = 0; j < m; ++j) {
      const double t_in = (j + 0.5) * hi;
      const double t1 = (idx == 1) ? t_in : t_out;
      const double t2 = (idx == 1) ? t_out : t_in;
      inner += f.poly.eval(std::vector<double>{t1, t2}) * hi;
    }
    sum += inner * inner * h;
    maxabs = std::max(maxabs, inner * inner);
  }
  return {sum, 6.0 * h * std::max(1.0, maxabs) * 4.0};
}

}  // namespace oracles
