#pragma once

#include <cstdint>
#include <vector>

namespace gaplab {

// Immutable store of all primes up to `limit`, built by a segmented sieve.
// Safe for concurrent reads once built.
class PrimeStore {
 public:
  static constexpr uint32_t kDefaultSegment = 1u << 16;
  // Bytes the store may occupy before build() refuses with a resource error.
  static constexpr uint64_t kMemoryBudgetBytes = 1ull << 30;

  static PrimeStore build(uint64_t limit, uint32_t segment_size = kDefaultSegment,
                          unsigned threads = 0);

  uint64_t limit() const { return limit_; }
  uint32_t segment_size() const { return segment_size_; }
  const std::vector<uint64_t>& primes() const { return primes_; }
  uint64_t count() const { return primes_.size(); }

  // pi(x); x may exceed limit only by 0 (checked).
  uint64_t rank(uint64_t x) const;
  // p_n, 1-based.
  uint64_t select(uint64_t n) const;
  bool is_prime(uint64_t n) const;

 private:
  PrimeStore() = default;
  uint64_t limit_ = 0;
  uint32_t segment_size_ = kDefaultSegment;
  std::vector<uint64_t> primes_;
};

// Tables of Euler phi, Moebius mu and the greatest prime factor for 1..limit.
// Conventions: phi(1)=1, mu(1)=1, gpf(1)=1.
struct ArithCache {
  uint64_t limit = 0;
  std::vector<int8_t> mu;
  std::vector<uint64_t> phi;
  std::vector<uint32_t> gpf;

  static ArithCache build(uint64_t limit);
};

// Chebyshev psi(N) = sum of von Mangoldt Lambda(n) for n <= N.
double chebyshev_psi(const PrimeStore& store, uint64_t N);

// psi(N; q, a): same sum restricted to n = a (mod q).
double psi_progression(const PrimeStore& store, uint64_t N, uint64_t q, uint64_t a);

// |{n <= x : every prime factor of n is <= y}|, counting 1.
uint64_t smooth_count(uint64_t x, uint64_t y);

struct MertensReport {
  double sum_reciprocal;  // sum over p <= x of 1/p
  double product_form;    // prod over p <= x of (1 - 1/p)
  double predicted;       // exp(-gamma) / log x
};

MertensReport mertens_report(const PrimeStore& store, uint64_t x);

inline constexpr double kExpMinusEulerGamma = 0.5614594835668851698;

}  // namespace gaplab
