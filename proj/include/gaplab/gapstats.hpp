#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gaplab/arith.hpp"
#include "gaplab/rational.hpp"

namespace gaplab {

struct GapRecord {
  uint64_t n = 0;       // index: p is the n-th prime
  uint64_t p = 0;
  uint64_t p_next = 0;
  uint64_t gap = 0;
  double normalized = 0;  // gap / log p (natural log by default)
};

// Consecutive-prime gaps within the store. The normalizer hook replaces
// log p; it defaults to the natural logarithm.
std::vector<GapRecord> gap_stream(const PrimeStore& store);
std::vector<GapRecord> gap_stream(const PrimeStore& store,
                                  const std::function<double(double)>& normalizer);

struct HistogramRow {
  double lo = 0, hi = 0;  // bin (lo, hi]
  uint64_t count = 0;
  double empirical = 0;
  double predicted = 0;   // exp(-lo) - exp(-hi)
};

struct PoissonHistogram {
  std::vector<HistogramRow> rows;
  HistogramRow overflow;  // (last edge, infinity), always emitted
  uint64_t total = 0;
  double max_cdf_discrepancy = 0;  // max over edges of |emp CDF - model CDF|
};

// Bins normalized gaps against the exponential model. Reported, never
// asserted: the model is a heuristic.
PoissonHistogram poisson_histogram(std::span<const GapRecord> records,
                                   std::span<const double> edges);

// Sliding windows of m consecutive normalized gaps.
std::vector<std::vector<double>> chain_points(std::span<const GapRecord> records, uint32_t m);

struct DifferenceHits {
  uint32_t i = 0, j = 0;  // 1-based pair indices, i < j
  double target = 0;      // beta_j - beta_i
  std::vector<uint64_t> hits;  // record indices n with |normalized - target| <= tol
};

std::vector<DifferenceHits> difference_hits(std::span<const GapRecord> records,
                                            std::span<const double> betas, double tol);

struct MeasureBound {
  uint32_t kappa = 0;
  Rat asymptotic_density;  // 1/(kappa-1)
  Rat effective_density;   // 1/((kappa-1) * H_{kappa-1})
};

MeasureBound measure_bounds(uint32_t kappa);

struct BvRow {
  uint64_t q = 0;
  double max_error = 0;          // max over (a,q)=1 of |psi(N;q,a) - psi(N)/phi(q)|
  double partition_residual = 0; // |sum_a psi(N;q,a) - psi(N)| / psi(N)
};

struct BvScan {
  uint64_t N = 0;
  double theta = 0;
  uint64_t q0 = 1;
  uint64_t Z = 1;
  double psi_N = 0;
  std::vector<BvRow> rows;   // q <= N^theta, q0 | q, (q, Z) = 1
  double summed_total = 0;   // sum of max errors
};

// Empirical distribution-in-progressions scan; the per-q residue partition
// identity is enforced to 1e-9 relative. q0 must be squarefree.
BvScan bv_error_scan(const PrimeStore& store, uint64_t N, double theta, uint64_t q0,
                     uint64_t Z);

}  // namespace gaplab
