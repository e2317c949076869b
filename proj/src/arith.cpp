#include "gaplab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "gaplab/errors.hpp"

namespace gaplab {

namespace {

uint64_t isqrt(uint64_t n) {
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<uint64_t> simple_sieve(uint64_t limit) {
  std::vector<uint8_t> mark(limit + 1, 1);
  if (limit >= 0) mark[0] = 0;
  if (limit >= 1) mark[1] = 0;
  for (uint64_t i = 2; i * i <= limit; ++i)
    if (mark[i])
      for (uint64_t j = i * i; j <= limit; j += i) mark[j] = 0;
  std::vector<uint64_t> primes;
  for (uint64_t i = 2; i <= limit; ++i)
    if (mark[i]) primes.push_back(i);
  return primes;
}

// Primes in [lo, hi] given the base primes up to sqrt(hi).
std::vector<uint64_t> sieve_range(uint64_t lo, uint64_t hi,
                                  const std::vector<uint64_t>& base) {
  std::vector<uint8_t> flags(hi - lo + 1, 1);
  for (uint64_t p : base) {
    if (p * p > hi) break;
    uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
    for (uint64_t j = start; j <= hi; j += p) flags[j - lo] = 0;
  }
  std::vector<uint64_t> out;
  for (uint64_t v = std::max<uint64_t>(lo, 2); v <= hi; ++v)
    if (flags[v - lo]) out.push_back(v);
  return out;
}

// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0, c = 0;
  void add(double v) {
    double t = v - c;
    double s = sum + t;
    c = (s - sum) - t;
    sum = s;
  }
};

}  // namespace

PrimeStore PrimeStore::build(uint64_t limit, uint32_t segment_size, unsigned threads) {
  if (limit < 2) throw argument_error("prime store limit must be >= 2");
  if (segment_size < 64) throw argument_error("segment size must be >= 64");

  // Rough footprint: the prime vector dominates (pi(x) ~ x / (log x - 1.1)).
  const double lx = std::log(static_cast<double>(limit));
  const double est_count = limit < 100 ? 30.0 : static_cast<double>(limit) / (lx - 1.1);
  const uint64_t est_bytes = static_cast<uint64_t>(est_count * 8.0 * 1.1) + segment_size;
  if (est_bytes > kMemoryBudgetBytes) {
    throw resource_error("prime store for limit " + std::to_string(limit) + " needs ~" +
                         std::to_string(est_bytes >> 20) + " MiB, over the " +
                         std::to_string(kMemoryBudgetBytes >> 20) + " MiB budget");
  }

  PrimeStore store;
  store.limit_ = limit;
  store.segment_size_ = segment_size;

  const uint64_t root = isqrt(limit);
  std::vector<uint64_t> base = simple_sieve(root);
  for (uint64_t p : base)
    if (p <= limit) store.primes_.push_back(p);

  if (root + 1 > limit) return store;

  // Segments are sieved independently (possibly in parallel) and appended in
  // ascending order, so the result is independent of segmentation and thread
  // count.
  std::vector<std::pair<uint64_t, uint64_t>> segments;
  for (uint64_t lo = root + 1; lo <= limit; lo += segment_size) {
    segments.emplace_back(lo, std::min(limit, lo + segment_size - 1));
  }
  unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
  nthreads = std::max(1u, std::min<unsigned>(nthreads, 16));
  if (nthreads == 1 || segments.size() < 4) {
    for (auto [lo, hi] : segments) {
      auto part = sieve_range(lo, hi, base);
      store.primes_.insert(store.primes_.end(), part.begin(), part.end());
    }
  } else {
    std::vector<std::future<std::vector<uint64_t>>> futs;
    futs.reserve(segments.size());
    for (auto [lo, hi] : segments) {
      futs.push_back(std::async(std::launch::async | std::launch::deferred,
                                [lo, hi, &base] { return sieve_range(lo, hi, base); }));
    }
    for (auto& f : futs) {
      auto part = f.get();
      store.primes_.insert(store.primes_.end(), part.begin(), part.end());
    }
  }
  return store;
}

uint64_t PrimeStore::rank(uint64_t x) const {
  if (x > limit_) throw range_error("rank(" + std::to_string(x) + ") beyond store limit " +
                                    std::to_string(limit_));
  return static_cast<uint64_t>(
      std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

uint64_t PrimeStore::select(uint64_t n) const {
  if (n == 0 || n > primes_.size())
    throw range_error("select(" + std::to_string(n) + ") out of range; store holds " +
                      std::to_string(primes_.size()) + " primes");
  return primes_[n - 1];
}

bool PrimeStore::is_prime(uint64_t n) const {
  if (n > limit_) throw range_error("is_prime(" + std::to_string(n) + ") beyond store limit");
  return std::binary_search(primes_.begin(), primes_.end(), n);
}

ArithCache ArithCache::build(uint64_t limit) {
  if (limit < 1) throw argument_error("arith cache limit must be >= 1");
  const uint64_t bytes = (limit + 1) * (1 + 8 + 4);
  if (bytes > PrimeStore::kMemoryBudgetBytes)
    throw resource_error("arith cache for limit " + std::to_string(limit) + " needs ~" +
                         std::to_string(bytes >> 20) + " MiB, over the " +
                         std::to_string(PrimeStore::kMemoryBudgetBytes >> 20) + " MiB budget");

  ArithCache cache;
  cache.limit = limit;
  cache.mu.assign(limit + 1, 0);
  cache.phi.assign(limit + 1, 0);
  cache.gpf.assign(limit + 1, 0);
  cache.mu[1] = 1;
  cache.phi[1] = 1;
  cache.gpf[1] = 1;

  // Linear sieve: each n > 1 is struck once via its smallest prime factor.
  std::vector<uint32_t> primes;
  for (uint64_t i = 2; i <= limit; ++i) {
    if (cache.gpf[i] == 0) {  // i prime
      primes.push_back(static_cast<uint32_t>(i));
      cache.mu[i] = -1;
      cache.phi[i] = i - 1;
      cache.gpf[i] = static_cast<uint32_t>(i);
    }
    for (uint32_t p : primes) {
      const uint64_t ip = static_cast<uint64_t>(p) * i;
      if (ip > limit) break;
      cache.gpf[ip] = std::max<uint32_t>(cache.gpf[i], p);
      if (i % p == 0) {
        cache.mu[ip] = 0;
        cache.phi[ip] = cache.phi[i] * p;
        break;
      }
      cache.mu[ip] = -cache.mu[i];
      cache.phi[ip] = cache.phi[i] * (p - 1);
    }
  }
  return cache;
}

double chebyshev_psi(const PrimeStore& store, uint64_t N) {
  if (N > store.limit()) throw range_error("psi(" + std::to_string(N) + ") beyond store limit");
  Kahan acc;
  for (uint64_t p : store.primes()) {
    if (p > N) break;
    const double lp = std::log(static_cast<double>(p));
    for (uint64_t pw = p; pw <= N; ) {
      acc.add(lp);
      if (pw > N / p) break;
      pw *= p;
    }
  }
  return acc.sum;
}

double psi_progression(const PrimeStore& store, uint64_t N, uint64_t q, uint64_t a) {
  if (N > store.limit()) throw range_error("psi progression beyond store limit");
  if (q < 1) throw argument_error("psi progression modulus must be >= 1");
  a %= q;
  Kahan acc;
  for (uint64_t p : store.primes()) {
    if (p > N) break;
    const double lp = std::log(static_cast<double>(p));
    for (uint64_t pw = p; pw <= N; ) {
      if (pw % q == a) acc.add(lp);
      if (pw > N / p) break;
      pw *= p;
    }
  }
  return acc.sum;
}

uint64_t smooth_count(uint64_t x, uint64_t y) {
  if (x < 1 || y < 1) throw argument_error("smooth_count arguments must be >= 1");
  if (y >= x) return x;
  const uint64_t bytes = (x + 1) * 4;
  if (bytes > PrimeStore::kMemoryBudgetBytes)
    throw resource_error("smooth_count(" + std::to_string(x) +
                         ", ...) table would exceed the memory budget");
  // gpf sieve: ascending prime passes leave the greatest prime factor behind.
  std::vector<uint32_t> g(x + 1, 1);
  for (uint64_t i = 2; i <= x; ++i) {
    if (g[i] == 1) {
      for (uint64_t j = i; j <= x; j += i) g[j] = static_cast<uint32_t>(i);
    }
  }
  uint64_t count = 0;
  for (uint64_t n = 1; n <= x; ++n)
    if (g[n] <= y) ++count;
  return count;
}

MertensReport mertens_report(const PrimeStore& store, uint64_t x) {
  if (x < 2) throw argument_error("mertens_report needs x >= 2");
  if (x > store.limit()) throw range_error("mertens_report beyond store limit");
  Kahan recip;
  long double prod = 1.0L;
  for (uint64_t p : store.primes()) {
    if (p > x) break;
    recip.add(1.0 / static_cast<double>(p));
    prod *= (1.0L - 1.0L / static_cast<long double>(p));
  }
  MertensReport rep;
  rep.sum_reciprocal = recip.sum;
  rep.product_form = static_cast<double>(prod);
  rep.predicted = kExpMinusEulerGamma / std::log(static_cast<double>(x));
  return rep;
}

}  // namespace gaplab
