#include "gaplab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaplab/errors.hpp"

namespace gaplab {

namespace {

struct Kahan {
  double sum = 0, c = 0;
  void add(double v) {
    double t = v - c;
    double s = sum + t;
    c = (s - sum) - t;
    sum = s;
  }
};

// mu(n) by trial division; arguments stay small (<= N^delta).
int moebius_small(uint64_t n) {
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

uint64_t support_bound(uint64_t N, double delta) {
  return static_cast<uint64_t>(std::floor(std::exp(delta * std::log((double)N)) + 1e-9));
}

// Squarefree divisors (with mu) of n that do not exceed cap.
std::vector<std::pair<uint64_t, int>> squarefree_divisors(uint64_t n, uint64_t cap) {
  std::vector<uint64_t> primes;
  uint64_t m = n;
  for (uint64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    primes.push_back(p);
    while (m % p == 0) m /= p;
  }
  if (m > 1) primes.push_back(m);
  std::vector<std::pair<uint64_t, int>> divs{{1, 1}};
  for (uint64_t p : primes) {
    const size_t sz = divs.size();
    for (size_t i = 0; i < sz; ++i) {
      if (divs[i].first > cap / p) continue;
      divs.push_back({divs[i].first * p, -divs[i].second});
    }
  }
  std::erase_if(divs, [&](const auto& d) { return d.first > cap; });
  std::sort(divs.begin(), divs.end());
  return divs;
}

double bracket_term(const PrimeStore& store, const KTuple& t, uint64_t n, uint32_t m,
                    SumVariant variant) {
  std::vector<uint32_t> counts(t.parts(), 0);
  const auto& h = t.offsets();
  uint64_t total = 0;
  for (uint32_t i = 0; i < t.k(); ++i) {
    if (store.is_prime(n + h[i])) {
      ++counts[t.label(i)];
      ++total;
    }
  }
  uint64_t pairs = 0;  // ordered pairs within a part
  for (uint32_t c : counts) pairs += static_cast<uint64_t>(c) * (c - 1);
  const double coef = (variant == SumVariant::S) ? 1.0 : (double)(m + 1);
  return (double)total - (double)m - coef * (double)pairs;
}

}  // namespace

double UnivariatePiece::eval(double t) const {
  if (t < 0 || t > cap + 1e-15) return 0;
  double v = 0;
  for (size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
  return v;
}

void SieveWeightSpec::validate() const {
  if (k < 1 || J < 1) throw argument_error("weight spec needs k >= 1 and J >= 1");
  if (delta <= 0 || delta >= 1) throw argument_error("support budget delta must lie in (0,1)");
  if (pieces.size() != J) throw argument_error("weight spec needs one piece row per j");
  for (const auto& row : pieces) {
    if (row.size() != k) throw argument_error("each piece row needs k univariate factors");
    double caps = 0;
    for (const auto& f : row) {
      if (f.cap < 0) throw argument_error("negative support cap");
      caps += f.cap;
    }
    if (caps > delta + 1e-12)
      throw argument_error("support caps sum to " + std::to_string(caps) +
                           " which exceeds delta = " + std::to_string(delta));
  }
}

SieveWeightSpec SieveWeightSpec::triangle(uint32_t k, double delta, uint64_t excluded) {
  SieveWeightSpec spec;
  spec.k = k;
  spec.J = 1;
  spec.delta = delta;
  spec.excluded_modulus = excluded;
  const double cap = delta / k;
  UnivariatePiece f;
  // (1 - t/cap)^2 on [0, cap]
  f.cap = cap;
  f.coeffs = {1.0, -2.0 / cap, 1.0 / (cap * cap)};
  spec.pieces.assign(1, std::vector<UnivariatePiece>(k, f));
  return spec;
}

SieveWeightSpec SieveWeightSpec::ones_indicator(uint32_t k) {
  SieveWeightSpec spec;
  spec.k = k;
  spec.J = 1;
  spec.delta = 0.05;
  spec.excluded_modulus = 1;
  UnivariatePiece f;
  f.cap = 0;  // only log d / log N = 0 survives
  f.coeffs = {1.0};
  spec.pieces.assign(1, std::vector<UnivariatePiece>(k, f));
  return spec;
}

double sieve_weight(const SieveWeightSpec& spec, std::span<const uint64_t> d, uint64_t N,
                    uint64_t Z) {
  if (d.size() != spec.k) throw argument_error("divisor tuple has wrong length");
  if (N < 2) throw argument_error("sieve weights need N >= 2");
  int mu_prod = 1;
  uint64_t prod = 1;
  const uint64_t bound = support_bound(N, spec.delta);
  for (uint64_t di : d) {
    if (di < 1) throw argument_error("divisors must be >= 1");
    const int mu = moebius_small(di);
    if (mu == 0) return 0;
    mu_prod *= mu;
    if (prod > bound / di) return 0;  // support restriction
    prod *= di;
  }
  if (prod > bound) return 0;
  if (Z > 1 && std::gcd(prod, Z) != 1) return 0;
  const double logN = std::log((double)N);
  double sum = 0;
  for (uint32_t j = 0; j < spec.J; ++j) {
    double term = 1;
    for (uint32_t l = 0; l < spec.k && term != 0; ++l)
      term *= spec.pieces[j][l].eval(std::log((double)d[l]) / logN);
    sum += term;
  }
  return mu_prod * sum;
}

namespace {

double sum_direct(const PrimeStore& store, const KTuple& t, uint64_t b, uint64_t W,
                  uint64_t N, uint32_t m, const SieveWeightSpec& spec, SumVariant variant,
                  uint64_t* qualifying) {
  const auto& h = t.offsets();
  const uint64_t bound = support_bound(N, spec.delta);
  Kahan total;
  uint64_t count = 0;
  uint64_t n = N + 1;
  n += (b % W + W - n % W) % W;
  for (; n <= 2 * N; n += W) {
    ++count;
    // accumulate sum over divisor tuples d_i | n + h_i with prod <= bound
    std::vector<std::vector<std::pair<uint64_t, int>>> divs(t.k());
    for (uint32_t i = 0; i < t.k(); ++i)
      divs[i] = squarefree_divisors(n + h[i], bound);
    double acc = 0;
    std::vector<uint64_t> d(t.k(), 1);
    // depth-first over tuple slots, pruning on the running product
    auto rec = [&](auto&& self, uint32_t i, uint64_t prod) -> void {
      if (i == t.k()) {
        acc += sieve_weight(spec, d, N, spec.excluded_modulus);
        return;
      }
      for (const auto& [di, mu] : divs[i]) {
        if (di > bound / prod) break;
        d[i] = di;
        self(self, i + 1, prod * di);
      }
      d[i] = 1;
    };
    rec(rec, 0, 1);
    total.add(bracket_term(store, t, n, m, variant) * acc * acc);
  }
  if (qualifying) *qualifying = count;
  return total.sum;
}

double sum_swapped(const PrimeStore& store, const KTuple& t, uint64_t b, uint64_t W,
                   uint64_t N, uint32_t m, const SieveWeightSpec& spec, SumVariant variant) {
  const auto& h = t.offsets();
  const uint64_t bound = support_bound(N, spec.delta);

  // index qualifying n = b (mod W) in (N, 2N]
  uint64_t first = N + 1;
  if (W > 1) first += (b % W + W - first % W) % W;
  if (first > 2 * N) return 0;
  const uint64_t slots = (2 * N - first) / W + 1;
  std::vector<double> acc(slots, 0.0);

  std::vector<uint64_t> sf;  // squarefree values up to the support bound
  for (uint64_t v = 1; v <= bound; ++v)
    if (moebius_small(v) != 0) sf.push_back(v);

  // For a divisor tuple d, the n with d_i | n + h_i form one progression
  // (or none); accumulate lambda_d over it.
  std::vector<uint64_t> d(t.k(), 1);
  auto rec = [&](auto&& self, uint32_t i, uint64_t prod, unsigned __int128 mod,
                 unsigned __int128 res) -> void {
    if (i == t.k()) {
      const double lambda = sieve_weight(spec, d, N, spec.excluded_modulus);
      if (lambda == 0) return;
      // first n >= first with n = res (mod mod)
      unsigned __int128 start = res;
      if (start < first) {
        const unsigned __int128 diff = first - start;
        start += ((diff + mod - 1) / mod) * mod;
      }
      for (unsigned __int128 n = start; n <= 2 * N; n += mod)
        acc[(static_cast<uint64_t>(n) - first) / W] += lambda;
      return;
    }
    for (uint64_t di : sf) {
      if (di > bound / prod) break;
      // combine n = res (mod mod) with n = -h_i (mod di)
      const uint64_t g = std::gcd(static_cast<uint64_t>(mod % di), di);
      const uint64_t want = (di - (h[i] % di)) % di;
      const uint64_t cur = static_cast<uint64_t>(res % di);
      if ((want + di - cur) % g != 0) continue;
      // step through the progression to find the merged residue (moduli are
      // tiny; a walk is simpler than a general CRT and obviously right)
      unsigned __int128 merged = res;
      bool ok = false;
      for (uint64_t step = 0; step < di / g; ++step) {
        if (static_cast<uint64_t>(merged % di) == want) {
          ok = true;
          break;
        }
        merged += mod;
      }
      if (!ok) continue;
      d[i] = di;
      self(self, i + 1, prod * di, mod / g * di, merged);
      d[i] = 1;
    }
  };
  rec(rec, 0, 1, W > 1 ? W : 1, W > 1 ? (b % W) : 0);

  // residue classes fixed; n must also satisfy n = b (mod W), which the
  // recursion seeded, so every slot is a qualifying n
  Kahan total;
  for (uint64_t s = 0; s < slots; ++s) {
    const uint64_t n = first + s * W;
    total.add(bracket_term(store, t, n, m, variant) * acc[s] * acc[s]);
  }
  return total.sum;
}

}  // namespace

WeightedSumResult weighted_sum_S(const PrimeStore& store, const KTuple& t, uint64_t b,
                                 uint64_t W, uint64_t N, uint32_t m,
                                 const SieveWeightSpec& spec, SumVariant variant,
                                 EvalPath path) {
  spec.validate();
  if (spec.k != t.k()) throw argument_error("weight spec arity differs from tuple size");
  if (!t.has_partition()) throw argument_error("weighted sums need a partitioned tuple");
  if (W < 1) throw argument_error("W must be >= 1");
  if (2 * N + t.max_offset() > store.limit())
    throw range_error("weighted sum needs store limit >= 2N + max offset");
  b %= W;
  // the progression must keep every translate coprime to W
  if (W > 1) {
    for (uint64_t hi : t.offsets()) {
      const uint64_t r = (b + hi) % W;
      const uint64_t g = (r == 0) ? W : std::gcd(r, W);
      if (g != 1)
        throw argument_error("(b + h_i, W) != 1 at offset " + std::to_string(hi) +
                             " (gcd " + std::to_string(g) + ")");
    }
  }

  WeightedSumResult out;
  if (path == EvalPath::Direct) {
    out.direct_value = sum_direct(store, t, b, W, N, m, spec, variant, &out.qualifying_n);
    out.value = out.direct_value;
    return out;
  }
  if (path == EvalPath::Swapped) {
    out.swapped_value = sum_swapped(store, t, b, W, N, m, spec, variant);
    out.value = out.swapped_value;
    return out;
  }
  out.direct_value = sum_direct(store, t, b, W, N, m, spec, variant, &out.qualifying_n);
  out.swapped_value = sum_swapped(store, t, b, W, N, m, spec, variant);
  const double scale = std::max({1.0, std::fabs(out.direct_value), std::fabs(out.swapped_value)});
  if (std::fabs(out.direct_value - out.swapped_value) > 1e-6 * scale)
    throw error("weighted-sum evaluation paths disagree: direct " +
                std::to_string(out.direct_value) + " vs swapped " +
                std::to_string(out.swapped_value));
  out.value = out.direct_value;
  return out;
}

std::optional<uint64_t> locate_witness(const PrimeStore& store, const KTuple& t, uint64_t b,
                                       uint64_t W, uint64_t N, uint32_t m) {
  if (!t.has_partition()) throw argument_error("witness scan needs a partitioned tuple");
  if (2 * N + t.max_offset() > store.limit())
    throw range_error("witness scan needs store limit >= 2N + max offset");
  if (W < 1) throw argument_error("W must be >= 1");
  b %= W;
  uint64_t n = N + 1;
  if (W > 1) n += (b + W - n % W) % W;
  for (; n <= 2 * N; n += W) {
    std::vector<uint8_t> part_hit(t.parts(), 0);
    uint32_t parts_with_prime = 0;
    for (uint32_t i = 0; i < t.k(); ++i) {
      if (store.is_prime(n + t.offsets()[i])) {
        if (!part_hit[t.label(i)]) {
          part_hit[t.label(i)] = 1;
          ++parts_with_prime;
        }
      }
    }
    if (parts_with_prime >= m + 1) return n;
  }
  return std::nullopt;
}

}  // namespace gaplab
