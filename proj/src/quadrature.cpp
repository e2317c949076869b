#include "gaplab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>
#include <vector>

#include "gaplab/errors.hpp"

namespace gaplab {

namespace {

// splitmix64: cheap, reproducible stream derivation
uint64_t mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t x = state;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct Kahan {
  double sum = 0, c = 0;
  void add(double v) {
    double t = v - c;
    double s = sum + t;
    c = (s - sum) - t;
    sum = s;
  }
};

struct ChunkMoments {
  double sum = 0, sumsq = 0;
  uint64_t n = 0;
};

// Mean/SE over per-chunk Kahan partial sums combined in chunk order.
McEstimate combine(const std::vector<ChunkMoments>& chunks) {
  Kahan s, s2;
  uint64_t n = 0;
  for (const auto& c : chunks) {
    s.add(c.sum);
    s2.add(c.sumsq);
    n += c.n;
  }
  McEstimate est;
  est.samples = n;
  est.value = s.sum / static_cast<double>(n);
  const double var =
      std::max(0.0, s2.sum / static_cast<double>(n) - est.value * est.value);
  est.std_error = std::sqrt(var / static_cast<double>(n));
  return est;
}

// One integrand evaluated under the g^2-weighted product sampler.
template <typename Fn>
McEstimate mc_run(const ProductG& f, const QuadratureConfig& cfg, uint32_t dims,
                  uint64_t stream_tag, Fn&& integrand) {
  const double A = f.A, T = f.T;
  const double C = T / (1.0 + A * T);  // int_0^T g^2
  const uint32_t chunks = std::max<uint32_t>(1, cfg.chunks);
  const uint64_t per_chunk = (cfg.samples + chunks - 1) / chunks;

  auto run_chunk = [&](uint32_t ci) {
    Rng rng(mix(cfg.seed ^ stream_tag) ^ mix(ci + 1));
    ChunkMoments m;
    for (uint64_t s = 0; s < per_chunk; ++s) {
      double sum_u = 0;
      for (uint32_t d = 0; d < dims; ++d) {
        const double v = rng.uniform();
        // inverse CDF of the density g(u)^2 / C on [0, T]
        const double u = v * C / (1.0 - A * v * C);
        sum_u += u;
      }
      const double val = integrand(sum_u);
      m.sum += val;  // per-chunk plain sums; chunk totals combine with Kahan
      m.sumsq += val * val;
      ++m.n;
    }
    return m;
  };

  std::vector<ChunkMoments> results(chunks);
  unsigned nthreads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  nthreads = std::max(1u, std::min<unsigned>(nthreads, 16));
  if (nthreads <= 1 || chunks == 1) {
    for (uint32_t ci = 0; ci < chunks; ++ci) results[ci] = run_chunk(ci);
  } else {
    std::vector<std::future<ChunkMoments>> futs;
    futs.reserve(chunks);
    for (uint32_t ci = 0; ci < chunks; ++ci)
      futs.push_back(std::async(std::launch::async | std::launch::deferred,
                                [&, ci] { return run_chunk(ci); }));
    for (uint32_t ci = 0; ci < chunks; ++ci) results[ci] = futs[ci].get();
  }
  return combine(results);
}

}  // namespace

ProductG ProductG::make(uint32_t k, double rho, double delta) {
  if (k < 3) throw argument_error("product family needs k >= 3");
  ProductG f;
  f.k = k;
  f.rho = rho;
  f.delta = delta;
  const double lk = std::log(static_cast<double>(k));
  f.A = lk - 2.0 * std::log(lk);
  if (f.A <= 0) throw argument_error("log k - 2 log log k must be positive");
  f.T = (std::exp(f.A) - 1.0) / f.A;
  return f;
}

double ProductG::g(double t) const {
  if (t < 0 || t > T) return 0;
  return 1.0 / (1.0 + A * t);
}

double ProductG::g_integral(double x) const {
  const double u = std::clamp(x, 0.0, T);
  return std::log1p(A * u) / A;
}

double ProductG::g_sq_integral(double x) const {
  const double u = std::clamp(x, 0.0, T);
  return u / (1.0 + A * u);
}

ProductGIntegrals product_g_integrals(const ProductG& f, const QuadratureConfig& cfg) {
  const uint32_t k = f.k;
  const double A = f.A, T = f.T;
  const double cell = (T / (1.0 + A * T)) / k;  // int_0^{T/k} g(kt)^2 dt

  // Everything is sampled from the g^2-weighted product measure; the
  // simplex constraint and the inner integrals are the integrands.
  // I:  gsq^k     * E[ 1{sum u <= k} ]
  // J:  gsq^{k-1} * E[ (G1(min(k - sum u, T)) / k)^2 ]  over k-1 draws
  // L:  gsq^{k-2} * E[ D(k - sum u)^2 ]                 over k-2 draws
  auto G1 = [&](double x) { return f.g_integral(x); };
  auto D = [&](double c) {
    // (1/k^2) int_0^{min(c,T)} g(w) G1(min(c - w, T)) dw by Simpson
    if (c <= 0) return 0.0;
    const double hi = std::min(c, T);
    const int n = 256;  // even
    const double h = hi / n;
    double acc = f.g(0) * G1(c) + f.g(hi) * G1(c - hi);
    for (int i = 1; i < n; ++i) {
      const double w = h * i;
      acc += f.g(w) * G1(std::min(c - w, T)) * ((i & 1) ? 4.0 : 2.0);
    }
    return acc * h / 3.0 / (static_cast<double>(k) * k);
  };

  ProductGIntegrals out;
  out.gsq_cell = cell;
  out.mc_I = mc_run(f, cfg, k, 0x49ull,
                    [&](double su) { return su <= (double)k ? 1.0 : 0.0; });
  out.mc_J = mc_run(f, cfg, k - 1, 0x4aull, [&](double su) {
    if (su > (double)k) return 0.0;
    const double inner = G1(std::min((double)k - su, T)) / k;
    return inner * inner;
  });
  out.mc_L = mc_run(f, cfg, k - 2, 0x4cull, [&](double su) {
    if (su > (double)k) return 0.0;
    const double d = D((double)k - su);
    return d * d;
  });

  const double log_cell = std::log(cell);
  out.log_I = k * log_cell + std::log(out.mc_I.value);
  out.log_J = (k - 1) * log_cell + std::log(out.mc_J.value);
  out.log_L = (k - 2) * log_cell + std::log(out.mc_L.value);

  out.J_over_I = out.mc_J.value / (out.mc_I.value * cell);
  out.L_over_I = out.mc_L.value / (out.mc_I.value * cell * cell);
  // independent streams: relative errors add in quadrature
  auto rel = [](const McEstimate& e) { return e.std_error / e.value; };
  out.J_over_I_se =
      out.J_over_I * std::sqrt(rel(out.mc_J) * rel(out.mc_J) + rel(out.mc_I) * rel(out.mc_I));
  out.L_over_I_se =
      out.L_over_I * std::sqrt(rel(out.mc_L) * rel(out.mc_L) + rel(out.mc_I) * rel(out.mc_I));
  return out;
}

Lemma46Report lemma46_report(uint32_t k, double rho, double delta,
                             const QuadratureConfig& cfg) {
  const ProductG f = ProductG::make(k, rho, delta);
  Lemma46Report rep;
  rep.k = k;
  rep.rho = rho;
  rep.delta = delta;
  rep.A = f.A;
  rep.T = f.T;
  rep.integrals = product_g_integrals(f, cfg);
  const double lk = std::log(static_cast<double>(k));
  rep.logk_over_k = lk / k;
  rep.logk_over_k_sq = rep.logk_over_k * rep.logk_over_k;

  // (int_0^x g)^2 <= (log k) int_0^x g^2 at deterministically sampled x.
  rep.pointwise_samples = 1000;
  Rng rng(mix(cfg.seed ^ 0x70ull));
  double worst = -1e300;
  for (uint32_t i = 0; i < rep.pointwise_samples; ++i) {
    const double x = rng.uniform() * 2.0 * f.T;  // beyond T exercises the plateau
    const double lhs = f.g_integral(x);
    const double rhs = lk * f.g_sq_integral(x);
    worst = std::max(worst, lhs * lhs - rhs);
  }
  rep.pointwise_max_violation = worst;
  return rep;
}

}  // namespace gaplab
