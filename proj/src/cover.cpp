#include "gaplab/cover.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gaplab/errors.hpp"

namespace gaplab {

namespace {

// Iterated logarithm in the convention log_1 x = max(1, log x).
double iterated_log(double x, int n) {
  double v = x;
  for (int i = 0; i < n; ++i) v = std::max(1.0, std::log(v));
  return v;
}

bool is_small_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

uint64_t mod_inverse(uint64_t a, uint64_t m) {
  // extended Euclid; m prime in all uses here
  int64_t t = 0, newt = 1, r = static_cast<int64_t>(m), newr = static_cast<int64_t>(a % m);
  while (newr != 0) {
    int64_t q = r / newr;
    std::swap(t, newt); newt -= q * t;
    std::swap(r, newr); newr -= q * r;
  }
  if (t < 0) t += static_cast<int64_t>(m);
  return static_cast<uint64_t>(t);
}

}  // namespace

void ResidueCover::validate() const {
  for (const auto& [p, a] : entries) {
    if (p < 2) throw argument_error("cover contains a modulus < 2");
    if (a >= p) throw argument_error("cover residue " + std::to_string(a) +
                                     " out of range for p = " + std::to_string(p));
    if (excluded.count(p))
      throw argument_error("prime " + std::to_string(p) + " is both assigned and excluded");
  }
}

uint64_t greedy_residue(const std::vector<uint64_t>& S, uint64_t p) {
  if (S.empty()) throw argument_error("greedy_residue needs a nonempty set");
  if (p < 2) throw argument_error("greedy_residue needs p >= 2");
  std::vector<uint64_t> cnt(p, 0);
  for (uint64_t g : S) ++cnt[g % p];
  uint64_t best = 0;
  for (uint64_t a = 1; a < p; ++a)
    if (cnt[a] > cnt[best]) best = a;  // ties keep the smaller residue
  return best;
}

std::vector<uint64_t> residual(uint64_t z, const ResidueCover& cover) {
  cover.validate();
  std::vector<uint8_t> alive(z + 1, 1);
  for (const auto& [p, a] : cover.entries) {
    uint64_t g = (a == 0) ? p : a;
    for (; g <= z; g += p) alive[g] = 0;
  }
  std::vector<uint64_t> out;
  for (uint64_t g = 1; g <= z; ++g)
    if (alive[g]) out.push_back(g);
  return out;
}

ResidueCover extend_cover(const KTuple& t, const std::vector<uint64_t>& S,
                          const std::vector<uint64_t>& primes, uint64_t x) {
  if (!is_admissible(t)) throw argument_error("extend_cover needs an admissible tuple");
  std::vector<uint64_t> sorted(S);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (uint64_t h : t.offsets())
    if (!std::binary_search(sorted.begin(), sorted.end(), h))
      throw argument_error("tuple offset " + std::to_string(h) + " not contained in S");
  if (!sorted.empty() && sorted.back() > x * x)
    throw argument_error("S must lie in [0, x^2]; element " + std::to_string(sorted.back()) +
                         " exceeds " + std::to_string(x * x));
  const uint64_t k = t.k();
  uint64_t tall = 0;
  for (uint64_t p : primes)
    if (p > x) ++tall;
  if (tall <= sorted.size() + k) {
    throw argument_error("not enough primes above x = " + std::to_string(x) + ": have " +
                         std::to_string(tall) + ", need more than |S| + k = " +
                         std::to_string(sorted.size() + k));
  }

  ResidueCover cover;
  std::vector<uint64_t> pool(primes);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::vector<uint8_t> used(pool.size(), 0);

  // One elimination per round: remove the smallest non-tuple survivor with
  // the smallest usable prime; a class through it never meets the tuple
  // because p does not divide prod (g - h_i).
  std::vector<uint64_t> work = sorted;
  const auto& offs = t.offsets();
  size_t rounds = 0;
  const size_t round_cap = sorted.size() - offs.size();
  while (work.size() > offs.size()) {
    if (++rounds > round_cap) throw error("internal: elimination round bound exceeded");
    uint64_t target = 0;
    bool found = false;
    for (uint64_t g : work) {
      if (!t.contains(g)) { target = g; found = true; break; }
    }
    if (!found) break;
    size_t chosen = pool.size();
    for (size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      const uint64_t p = pool[i];
      bool hits_tuple = false;
      for (uint64_t h : offs)
        if ((target % p) == (h % p)) { hits_tuple = true; break; }
      if (!hits_tuple) { chosen = i; break; }
    }
    if (chosen == pool.size())
      throw argument_error("no usable prime left to eliminate " + std::to_string(target));
    used[chosen] = 1;
    const uint64_t p = pool[chosen];
    const uint64_t a = target % p;
    cover.entries[p] = a;
    std::erase_if(work, [&](uint64_t g) { return g % p == a; });
  }

  // Remaining primes get a class disjoint from the tuple (exists by
  // admissibility for every p).
  for (size_t i = 0; i < pool.size(); ++i) {
    if (used[i]) continue;
    const uint64_t p = pool[i];
    uint64_t b = 0;
    for (; b < p; ++b) {
      bool hit = false;
      for (uint64_t h : offs)
        if (h % p == b) { hit = true; break; }
      if (!hit) break;
    }
    if (b == p)
      throw argument_error("tuple covers every class mod " + std::to_string(p));
    cover.entries[p] = b;
  }
  cover.bound = pool.empty() ? 0 : pool.back();
  return cover;
}

ConstructionParams& ConstructionParams::apply_defaults() {
  if (y1 == 0) y1 = static_cast<uint64_t>(std::ceil(std::pow(std::log((double)y), 0.25)));
  if (y2 == 0)
    y2 = static_cast<uint64_t>(std::ceil((double)y / iterated_log((double)y, 3)));
  if (delta == 0)
    delta = static_cast<uint64_t>(
        std::ceil((double)y * std::exp(-std::pow(std::log((double)y), 0.25))));
  return *this;
}

namespace {

void validate_common(const ConstructionParams& p) {
  if (p.k == 0 || p.betas.size() != p.k)
    throw argument_error("need k >= 1 betas; got k = " + std::to_string(p.k) + " and " +
                         std::to_string(p.betas.size()) + " betas");
  for (size_t i = 0; i < p.betas.size(); ++i) {
    if (p.betas[i] < 0) throw argument_error("betas must be nonnegative");
    if (i && p.betas[i] < p.betas[i - 1]) throw argument_error("betas must be nondecreasing");
  }
  if (p.x < 1.0) throw argument_error("x must be >= 1");
  if (!(p.y1 < p.y2 && p.y2 < p.y && p.y < p.z))
    throw argument_error("parameter ordering y1 < y2 < y < z violated: y1=" +
                         std::to_string(p.y1) + " y2=" + std::to_string(p.y2) + " y=" +
                         std::to_string(p.y) + " z=" + std::to_string(p.z));
  if (p.y <= p.k) throw argument_error("y must exceed k");
  if (p.delta < 1) throw argument_error("delta must be >= 1");
  for (uint64_t q : p.excluded) {
    if (!is_small_prime(q)) throw argument_error("excluded set must contain primes only");
    if (q == 2) throw argument_error("excluded set must not contain 2");
  }
  if (!p.excluded.empty()) {
    // Sparseness: tail sums of reciprocals bounded by 2/p' and 2/log z.
    for (uint64_t q : p.excluded) {
      double tail = 0;
      for (uint64_t r : p.excluded)
        if (r >= q) tail += 1.0 / (double)r;
      if (tail > 2.0 / (double)q)
        throw argument_error("excluded set too dense at p = " + std::to_string(q));
      if (tail > 2.0 / std::log((double)p.z))
        throw argument_error("excluded set too dense for z = " + std::to_string(p.z));
    }
  }
  if (p.ell) {
    if (!is_small_prime(*p.ell) || *p.ell > p.y1)
      throw argument_error("ell must be a prime <= y1");
    if (p.excluded.count(*p.ell)) throw argument_error("ell must not be excluded");
  }
}

}  // namespace

void ConstructionParams::validate() const {
  validate_common(*this);
  const double lhs = 2.0 * (double)y * (1.0 + (1.0 + betas.back()) * x);
  if (lhs > 2.0 * (double)z)
    throw argument_error("feasibility bound 2y(1+(1+beta_k)x) <= 2z violated: " +
                         std::to_string(lhs) + " > " + std::to_string(2.0 * (double)z));
}

namespace {

ConstructionReport run_construction(const PrimeStore& store, const ConstructionParams& params) {
  const uint64_t y = params.y, z = params.z;
  if (z > store.limit())
    throw range_error("construction needs store limit >= z = " + std::to_string(z));

  ConstructionReport rep;
  rep.params = params;
  ResidueCover& cover = rep.cover;
  cover.excluded = params.excluded;
  cover.bound = y;
  auto skip = [&](uint64_t p) { return params.excluded.count(p) > 0; };

  std::vector<uint8_t> alive(z + 1, 1);
  alive[0] = 0;
  auto strike = [&](uint64_t p, uint64_t a) {
    cover.entries[p] = a;
    uint64_t g = (a == 0) ? p : a;
    uint64_t removed = 0;
    for (; g <= z; g += p) {
      removed += alive[g];
      alive[g] = 0;
    }
    return removed;
  };
  auto alive_count = [&] {
    uint64_t c = 0;
    for (uint64_t g = 1; g <= z; ++g) c += alive[g];
    return c;
  };

  // Zero classes on the middle range (y1, y2].
  for (uint64_t p : store.primes()) {
    if (p > params.y2) break;
    if (p <= params.y1 || skip(p)) continue;
    strike(p, 0);
  }
  rep.res1_size = alive_count();

  // Greedy classes for the odd primes up to y1 (ell stays reserved).
  uint64_t P1 = 1;
  for (uint64_t p : store.primes()) {
    if (p > params.y1) break;
    if (p == 2 || skip(p) || (params.ell && *params.ell == p)) continue;
    std::vector<uint64_t> current;
    current.reserve(alive.size());
    for (uint64_t g = 1; g <= z; ++g)
      if (alive[g]) current.push_back(g);
    const uint64_t a = greedy_residue(current, p);
    const uint64_t removed = strike(p, a);
    if (P1 > (uint64_t(1) << 62) / p)
      throw argument_error("P1 overflow: y1 = " + std::to_string(params.y1) + " is too large");
    P1 *= p;
    rep.greedy_steps.push_back({p, a, removed, alive_count()});
  }
  rep.res2_size = alive_count();
  rep.P1 = P1;

  // Progression class A mod P1: opposite of each greedy class at 1.
  uint64_t A = 0, M = 1;
  for (const auto& step : rep.greedy_steps) {
    const uint64_t p = step.p;
    const uint64_t want = (step.residue % p == 1 % p) ? p - 1 : 1;
    // CRT: A + M*t = want (mod p)
    const uint64_t t = ((want + p - A % p) % p) * mod_inverse(M % p, p) % p;
    A += M * t;
    M *= p;
  }
  rep.progression_residue = A;

  // Tuple primes from the windows (beta_i*x*y + y, +delta].
  std::vector<uint64_t> chosen;
  const auto& primes = store.primes();
  for (uint32_t i = 0; i < params.k; ++i) {
    const double u = params.betas[i] * params.x * (double)y + (double)y;
    const uint64_t lo = static_cast<uint64_t>(std::floor(u)) + 1;
    const uint64_t hi = static_cast<uint64_t>(std::floor(u + (double)params.delta));
    if (hi > z)
      throw argument_error("window " + std::to_string(i + 1) + " extends past z (u_i + delta = " +
                           std::to_string(hi) + ")");
    IntervalInfo info;
    info.lo = u;
    info.hi = u + (double)params.delta;
    std::vector<uint64_t> candidates;
    for (auto it = std::lower_bound(primes.begin(), primes.end(), lo);
         it != primes.end() && *it <= hi; ++it) {
      if (*it % P1 == A % P1) candidates.push_back(*it);
    }
    info.candidates = candidates.size();
    if (candidates.size() < params.k) {
      std::ostringstream msg;
      msg << "window " << (i + 1) << " of " << params.k << ": (" << u << ", "
          << u + (double)params.delta << "] holds " << candidates.size()
          << " primes in class " << A << " (mod " << P1 << "); need " << params.k;
      throw infeasible_error(msg.str());
    }
    bool picked = false;
    for (uint64_t h : candidates) {
      if (std::find(chosen.begin(), chosen.end(), h) == chosen.end()) {
        chosen.push_back(h);
        info.chosen = h;
        picked = true;
        break;
      }
    }
    if (!picked)
      throw infeasible_error("window " + std::to_string(i + 1) +
                             " exhausted by earlier picks");
    rep.intervals.push_back(info);
  }
  std::vector<uint64_t> sorted_offsets(chosen);
  std::sort(sorted_offsets.begin(), sorted_offsets.end());
  rep.tuple = KTuple(sorted_offsets);
  for (uint64_t h : sorted_offsets)
    if (!alive[h])
      throw error("internal: selected tuple prime " + std::to_string(h) +
                  " was already sieved");

  // Extension stage: one class per remaining prime (2, ell and everything in
  // (y2, y]), chosen to remove as many survivors as possible while never
  // touching the tuple. Smallest prime, then smallest residue, on ties.
  std::vector<uint64_t> ext_primes;
  if (!skip(2) && 2 <= y) ext_primes.push_back(2);
  if (params.ell) ext_primes.push_back(*params.ell);
  for (uint64_t p : primes) {
    if (p > y) break;
    if (p <= params.y2 || skip(p)) continue;
    ext_primes.push_back(p);
  }
  std::sort(ext_primes.begin(), ext_primes.end());

  std::vector<uint64_t> remaining;
  for (uint64_t g = 1; g <= z; ++g)
    if (alive[g] && !rep.tuple.contains(g)) remaining.push_back(g);

  std::vector<uint8_t> used(ext_primes.size(), 0);
  while (!remaining.empty()) {
    uint64_t best_count = 0, best_a = 0;
    size_t best_idx = ext_primes.size();
    for (size_t i = 0; i < ext_primes.size(); ++i) {
      if (used[i]) continue;
      const uint64_t p = ext_primes[i];
      std::vector<uint64_t> cnt(p, 0);
      for (uint64_t g : remaining) ++cnt[g % p];
      for (uint64_t h : sorted_offsets) cnt[h % p] = 0;  // classes through the tuple are off-limits
      for (uint64_t a = 0; a < p; ++a) {
        if (cnt[a] > best_count) {
          best_count = cnt[a];
          best_a = a;
          best_idx = i;
        }
      }
    }
    if (best_idx == ext_primes.size()) {
      uint64_t unused = 0;
      for (auto u : used) unused += (u == 0);
      std::ostringstream msg;
      msg << "cover extension stuck: " << remaining.size()
          << " survivors cannot be removed (smallest " << remaining.front() << "), "
          << unused << " primes unused";
      throw infeasible_error(msg.str());
    }
    used[best_idx] = 1;
    const uint64_t p = ext_primes[best_idx];
    cover.entries[p] = best_a;
    std::erase_if(remaining, [&](uint64_t g) { return g % p == best_a; });
    for (uint64_t g = (best_a == 0) ? p : best_a; g <= z; g += p) alive[g] = 0;
    ++rep.extension_rounds;
  }
  for (size_t i = 0; i < ext_primes.size(); ++i) {
    if (used[i]) continue;
    const uint64_t p = ext_primes[i];
    uint64_t b = 0;
    for (; b < p; ++b) {
      bool hit = false;
      for (uint64_t h : sorted_offsets)
        if (h % p == b) { hit = true; break; }
      if (!hit) break;
    }
    if (b == p) throw error("internal: tuple covers every class mod " + std::to_string(p));
    cover.entries[p] = b;
  }

  // Post-verification, all run unconditionally.
  rep.residual_exact = (residual(z, cover) == sorted_offsets);
  if (!rep.residual_exact) throw error("internal: residual mismatch after construction");

  rep.max_diff_prime_factor = 0;
  for (size_t i = 0; i < sorted_offsets.size(); ++i) {
    for (size_t j = i + 1; j < sorted_offsets.size(); ++j) {
      uint64_t d = sorted_offsets[j] - sorted_offsets[i];
      for (uint64_t p : primes) {
        if (p * p > d) break;
        while (d % p == 0) {
          d /= p;
          rep.max_diff_prime_factor = std::max(rep.max_diff_prime_factor, p);
        }
      }
      if (d > 1) rep.max_diff_prime_factor = std::max(rep.max_diff_prime_factor, d);
    }
  }
  if (rep.max_diff_prime_factor > y)
    throw infeasible_error("pairwise difference has prime factor " +
                           std::to_string(rep.max_diff_prime_factor) + " > y");

  rep.max_position_error = 0;
  for (uint32_t i = 0; i < params.k; ++i) {
    const double u = params.betas[i] * params.x * (double)y + (double)y;
    const double err = std::abs((double)chosen[i] - u);
    rep.max_position_error =
        std::max(rep.max_position_error, static_cast<uint64_t>(std::ceil(err)));
  }
  if (rep.max_position_error > params.delta)
    throw error("internal: position error exceeds delta");

  rep.admissible = is_admissible(rep.tuple);
  if (!rep.admissible) throw error("internal: constructed tuple not admissible");
  return rep;
}

}  // namespace

ConstructionReport construct_tuple(const PrimeStore& store, const ConstructionParams& params) {
  ConstructionParams p(params);
  p.apply_defaults();
  p.validate();
  return run_construction(store, p);
}

ConstructionReport construct_tuple_unchecked_scale(const PrimeStore& store,
                                                   const ConstructionParams& params) {
  ConstructionParams p(params);
  p.apply_defaults();
  validate_common(p);
  return run_construction(store, p);
}

bool verify_sieved_interval(const PrimeStore& store, const KTuple& t,
                            const ResidueCover& cover, uint64_t n, uint64_t z) {
  cover.validate();
  for (const auto& [p, a] : cover.entries) {
    if (n % p != (p - a % p) % p)
      throw argument_error("n = " + std::to_string(n) + " fails n = -a_p (mod " +
                           std::to_string(p) + ")");
  }
  if (n <= cover.bound)
    throw argument_error("base point must exceed the cover bound " +
                         std::to_string(cover.bound));
  if (n + z > store.limit())
    throw range_error("verification window (n, n+z] exceeds store limit");

  const auto& primes = store.primes();
  for (auto it = std::upper_bound(primes.begin(), primes.end(), n);
       it != primes.end() && *it <= n + z; ++it) {
    if (!t.contains(*it - n)) return false;
  }
  return true;
}

BigInt crt_base_point(const ResidueCover& cover, uint64_t floor_exclusive) {
  cover.validate();
  BigInt r = 0, M = 1;
  for (const auto& [p, a] : cover.entries) {
    const uint64_t want = (p - a % p) % p;
    const uint64_t cur = static_cast<uint64_t>(r % p);
    const uint64_t minv = mod_inverse(static_cast<uint64_t>(M % p), p);
    const uint64_t t = ((want + p - cur) % p) * minv % p;
    r += M * t;
    M *= p;
  }
  while (r <= floor_exclusive) r += M;
  return r;
}

}  // namespace gaplab
