#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gaplab/arith.hpp"
#include "gaplab/rational.hpp"
#include "gaplab/tuples.hpp"

namespace gaplab {

// A covering system: one residue class a_p per assigned prime p, plus a set
// of excluded primes that never receive a class.
struct ResidueCover {
  std::map<uint64_t, uint64_t> entries;  // p -> a_p, 0 <= a_p < p
  std::set<uint64_t> excluded;
  uint64_t bound = 0;  // all assigned primes <= bound

  void validate() const;
};

// Residue class of p hitting the most elements of S; ties broken by the
// smallest residue. The maximum is at least ceil(|S|/p).
uint64_t greedy_residue(const std::vector<uint64_t>& S, uint64_t p);

// {g in (0, z] : g != a_p (mod p) for every assigned p}.
std::vector<uint64_t> residual(uint64_t z, const ResidueCover& cover);

// Extends classes over `primes` so that exactly the tuple survives from S.
// Requires: t admissible, offsets(t) subset of S subset of [0, x^2], and
// more than |S| + k primes above x. Every prime gets a residue; primes not
// needed for elimination get a class avoiding all tuple offsets.
ResidueCover extend_cover(const KTuple& t, const std::vector<uint64_t>& S,
                          const std::vector<uint64_t>& primes, uint64_t x);

struct ConstructionParams {
  uint32_t k = 1;
  std::vector<double> betas;  // nondecreasing, nonnegative
  double x = 1.0;             // >= 1
  uint64_t y = 0;
  uint64_t z = 0;
  uint64_t y1 = 0;     // 0 -> default ceil((log y)^{1/4})
  uint64_t y2 = 0;     // 0 -> default ceil(y / log_3 y)
  uint64_t delta = 0;  // 0 -> default ceil(y * exp(-(log y)^{1/4}))
  std::set<uint64_t> excluded;    // primes removed from play entirely
  std::optional<uint64_t> ell;    // optional reserved prime <= y1

  // Fills y1/y2/delta defaults in place and returns self.
  ConstructionParams& apply_defaults();
  void validate() const;
};

struct GreedyStep {
  uint64_t p = 0;
  uint64_t residue = 0;
  uint64_t removed = 0;
  uint64_t remaining = 0;
};

struct IntervalInfo {
  double lo = 0, hi = 0;   // (lo, hi]
  uint64_t candidates = 0; // primes = A (mod P1) inside
  uint64_t chosen = 0;
};

struct ConstructionReport {
  ConstructionParams params;
  uint64_t res1_size = 0;   // after zeroing primes in (y1, y2]
  uint64_t res2_size = 0;   // after the greedy stage
  std::vector<GreedyStep> greedy_steps;
  uint64_t progression_residue = 0;  // class A of the tuple primes mod P1
  uint64_t P1 = 1;
  std::vector<IntervalInfo> intervals;
  KTuple tuple{std::vector<uint64_t>{0}};
  ResidueCover cover;
  uint64_t extension_rounds = 0;
  // post-verification
  bool residual_exact = false;
  uint64_t max_diff_prime_factor = 0;  // largest prime factor over all pairwise differences
  uint64_t max_position_error = 0;     // max |h_i - (beta_i*x*y + y)|
  bool admissible = false;
};

// Staged covering construction: zero classes on (y1, y2], greedy classes on
// odd primes <= y1, tuple primes picked from the progression A (mod P1) in
// the windows (beta_i*x*y + y, +delta], then a class per remaining prime so
// that exactly the tuple survives in (0, z]. Every supply condition is
// checked at run time; failures raise infeasible_error with the failing
// stage spelled out.
ConstructionReport construct_tuple(const PrimeStore& store, const ConstructionParams& params);

// Same stages without the feasibility bound 2y(1+(1+beta_k)x) <= 2z on the
// parameters; used to drive miniature end-to-end runs.
ConstructionReport construct_tuple_unchecked_scale(const PrimeStore& store,
                                                   const ConstructionParams& params);

// True iff every prime in (n, n+z] belongs to the translated tuple.
// Requires n = -a_p (mod p) for every assigned prime, n > cover.bound and
// n + z <= store.limit.
bool verify_sieved_interval(const PrimeStore& store, const KTuple& t,
                            const ResidueCover& cover, uint64_t n, uint64_t z);

// Least n > floor_exclusive with n = -a_p (mod p) for all assigned primes.
BigInt crt_base_point(const ResidueCover& cover, uint64_t floor_exclusive);

}  // namespace gaplab
