#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gaplab/arith.hpp"
#include "gaplab/tuples.hpp"

namespace gaplab {

// One univariate factor: a polynomial on [0, cap], zero beyond.
struct UnivariatePiece {
  std::vector<double> coeffs;  // coeffs[i] * t^i
  double cap = 0;

  double eval(double t) const;
};

// Weights lambda_{d_1..d_k} = (prod mu(d_i)) * sum_j prod_l F_{l,j}(log d_l / log N)
// when (d_1...d_k, Z) = 1, zero otherwise; also zero when any d_i is not
// squarefree or prod d_i exceeds N^delta.
struct SieveWeightSpec {
  uint32_t k = 0;
  uint32_t J = 1;
  double delta = 0.05;
  uint64_t excluded_modulus = 1;  // Z; weights vanish on shared factors
  std::vector<std::vector<UnivariatePiece>> pieces;  // [j][l], l = 0..k-1

  void validate() const;  // per-j sum of caps <= delta

  // F_{l,1}(t) = (1 - k t / delta)^2 on [0, delta/k]: a simple smooth-ish
  // bump meeting the support budget with equality.
  static SieveWeightSpec triangle(uint32_t k, double delta, uint64_t excluded = 1);
  // caps = 0: lambda is the indicator of d = (1,...,1).
  static SieveWeightSpec ones_indicator(uint32_t k);
};

double sieve_weight(const SieveWeightSpec& spec, std::span<const uint64_t> d,
                    uint64_t N, uint64_t Z);

enum class SumVariant { S, SPrime };
enum class EvalPath { Direct, Swapped, Checked };

struct WeightedSumResult {
  double value = 0;
  double direct_value = 0;
  double swapped_value = 0;
  uint64_t qualifying_n = 0;
};

// The partitioned prime-detecting sum over n in (N, 2N], n = b (mod W):
//   [ sum_i 1_P(n+h_i) - m - c * sum_j sum_{h != h' in part j} 1_P(n+h) 1_P(n+h') ]
//   * ( sum_{d_i | n+h_i} lambda_d )^2
// with c = 1 for variant S and c = m+1 for SPrime. Checked mode evaluates
// both the per-n divisor enumeration and the swapped-order accumulation and
// requires 1e-6 relative agreement.
WeightedSumResult weighted_sum_S(const PrimeStore& store, const KTuple& t, uint64_t b,
                                 uint64_t W, uint64_t N, uint32_t m,
                                 const SieveWeightSpec& spec, SumVariant variant,
                                 EvalPath path = EvalPath::Checked);

// First n in (N, 2N], n = b (mod W), with >= m+1 parts containing a prime
// translate.
std::optional<uint64_t> locate_witness(const PrimeStore& store, const KTuple& t,
                                       uint64_t b, uint64_t W, uint64_t N, uint32_t m);

}  // namespace gaplab
