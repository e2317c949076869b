#pragma once

#include <cstdint>

namespace gaplab {

struct QuadratureConfig {
  uint64_t samples = 200000;
  uint64_t seed = 1729;
  uint32_t chunks = 64;   // independent seeded streams, combined in order
  uint32_t threads = 0;   // 0 = hardware choice; result independent of it
};

// The product test function F(t) = prod g(k t_i) on the unit simplex with
// g(t) = 1/(1+At) on [0,T], A = log k - 2 log log k, T = (e^A - 1)/A.
struct ProductG {
  uint32_t k = 0;
  double rho = 1.0;    // reported scale factor rho*delta
  double delta = 1.0;
  double A = 0;
  double T = 0;

  static ProductG make(uint32_t k, double rho = 1.0, double delta = 1.0);

  double g(double t) const;         // g(t) on [0, T]
  double g_integral(double x) const;   // int_0^x g, closed form
  double g_sq_integral(double x) const;  // int_0^x g^2, closed form
};

struct McEstimate {
  double value = 0;
  double std_error = 0;
  uint64_t samples = 0;
};

struct ProductGIntegrals {
  double gsq_cell = 0;   // int_0^{T/k} g(kt)^2 dt
  // Log-scale absolute values (the k-fold products underflow doubles for
  // large k); ratios are the quantities of interest.
  double log_I = 0, log_J = 0, log_L = 0;
  McEstimate mc_I, mc_J, mc_L;  // simplex-truncation factors
  double J_over_I = 0, J_over_I_se = 0;
  double L_over_I = 0, L_over_I_se = 0;
};

ProductGIntegrals product_g_integrals(const ProductG& f, const QuadratureConfig& cfg);

struct Lemma46Report {
  uint32_t k = 0;
  double rho = 0, delta = 0;
  double A = 0, T = 0;
  ProductGIntegrals integrals;
  double logk_over_k = 0;     // reference (log k)/k
  double logk_over_k_sq = 0;  // reference ((log k)/k)^2
  // max over sampled x of (int_0^x g)^2 - (log k) int_0^x g^2 (<= 0 expected)
  double pointwise_max_violation = 0;
  uint32_t pointwise_samples = 0;
};

// Numeric study of the product family: Monte-Carlo I, J, L with standard
// errors, ratios against (log k)/k and its square, and the closed-form
// pointwise inequality scan. Requires k >= 3 (so A > 0).
Lemma46Report lemma46_report(uint32_t k, double rho, double delta, const QuadratureConfig& cfg);

}  // namespace gaplab
