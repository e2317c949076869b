#include "gaplab/gapstats.hpp"

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

bool squarefree_small(uint64_t n) {
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return false;
  }
  return true;
}

uint64_t euler_phi_small(uint64_t n) {
  uint64_t result = n;
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

}  // namespace

std::vector<GapRecord> gap_stream(const PrimeStore& store) {
  return gap_stream(store, [](double p) { return std::log(p); });
}

std::vector<GapRecord> gap_stream(const PrimeStore& store,
                                  const std::function<double(double)>& normalizer) {
  if (store.limit() < 3) throw argument_error("gap stream needs a store limit >= 3");
  const auto& primes = store.primes();
  std::vector<GapRecord> out;
  if (primes.size() < 2) return out;
  out.reserve(primes.size() - 1);
  for (size_t i = 0; i + 1 < primes.size(); ++i) {
    GapRecord rec;
    rec.n = i + 1;
    rec.p = primes[i];
    rec.p_next = primes[i + 1];
    rec.gap = primes[i + 1] - primes[i];
    rec.normalized = static_cast<double>(rec.gap) / normalizer(static_cast<double>(rec.p));
    out.push_back(rec);
  }
  return out;
}

PoissonHistogram poisson_histogram(std::span<const GapRecord> records,
                                   std::span<const double> edges) {
  if (edges.empty() || edges[0] != 0)
    throw argument_error("histogram edges must start at 0");
  for (size_t i = 1; i < edges.size(); ++i)
    if (edges[i] <= edges[i - 1]) throw argument_error("histogram edges must increase");

  PoissonHistogram hist;
  hist.total = records.size();
  for (size_t i = 0; i + 1 < edges.size(); ++i)
    hist.rows.push_back({edges[i], edges[i + 1], 0, 0.0,
                         std::exp(-edges[i]) - std::exp(-edges[i + 1])});
  hist.overflow = {edges.back(), std::numeric_limits<double>::infinity(), 0, 0.0,
                   std::exp(-edges.back())};

  for (const auto& rec : records) {
    const double v = rec.normalized;
    if (v > edges.back()) {
      ++hist.overflow.count;
      continue;
    }
    // rightmost bin with lo < v <= hi; v <= 0 cannot occur (gaps positive)
    const auto it = std::lower_bound(edges.begin(), edges.end(), v);
    size_t idx = static_cast<size_t>(it - edges.begin());
    if (idx == 0) idx = 1;
    ++hist.rows[idx - 1].count;
  }

  const double tot = hist.total ? static_cast<double>(hist.total) : 1.0;
  double cum_emp = 0, cum_model = 0;
  for (auto& row : hist.rows) {
    row.empirical = row.count / tot;
    cum_emp += row.empirical;
    cum_model += row.predicted;
    hist.max_cdf_discrepancy =
        std::max(hist.max_cdf_discrepancy, std::fabs(cum_emp - cum_model));
  }
  hist.overflow.empirical = hist.overflow.count / tot;
  return hist;
}

std::vector<std::vector<double>> chain_points(std::span<const GapRecord> records, uint32_t m) {
  if (m < 1) throw argument_error("chain length m must be >= 1");
  std::vector<std::vector<double>> out;
  if (records.size() < m) return out;
  out.reserve(records.size() - m + 1);
  for (size_t i = 0; i + m <= records.size(); ++i) {
    std::vector<double> w(m);
    for (uint32_t j = 0; j < m; ++j) w[j] = records[i + j].normalized;
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<DifferenceHits> difference_hits(std::span<const GapRecord> records,
                                            std::span<const double> betas, double tol) {
  if (tol < 0) throw argument_error("tolerance must be nonnegative");
  for (size_t i = 1; i < betas.size(); ++i)
    if (betas[i] < betas[i - 1]) throw argument_error("betas must be nondecreasing");
  std::vector<DifferenceHits> out;
  for (size_t i = 0; i < betas.size(); ++i) {
    for (size_t j = i + 1; j < betas.size(); ++j) {
      DifferenceHits hits;
      hits.i = static_cast<uint32_t>(i + 1);
      hits.j = static_cast<uint32_t>(j + 1);
      hits.target = betas[j] - betas[i];
      for (const auto& rec : records)
        if (std::fabs(rec.normalized - hits.target) <= tol) hits.hits.push_back(rec.n);
      out.push_back(std::move(hits));
    }
  }
  return out;
}

MeasureBound measure_bounds(uint32_t kappa) {
  if (kappa < 2) throw argument_error("measure bound needs kappa >= 2");
  MeasureBound mb;
  mb.kappa = kappa;
  mb.asymptotic_density = Rat(1, kappa - 1);
  Rat harmonic = 0;
  for (uint32_t j = 1; j <= kappa - 1; ++j) harmonic += Rat(1, j);
  mb.effective_density = Rat(1) / (Rat(kappa - 1) * harmonic);
  return mb;
}

BvScan bv_error_scan(const PrimeStore& store, uint64_t N, double theta, uint64_t q0,
                     uint64_t Z) {
  if (N > store.limit()) throw range_error("scan bound exceeds store limit");
  if (N < 2) throw argument_error("scan needs N >= 2");
  if (theta <= 0 || theta >= 1) throw argument_error("theta must lie in (0, 1)");
  if (q0 < 1 || !squarefree_small(q0)) throw argument_error("q0 must be squarefree");

  // one Lambda pass; per-q bucketing reuses it
  std::vector<double> lambda(N + 1, 0.0);
  for (uint64_t p : store.primes()) {
    if (p > N) break;
    const double lp = std::log(static_cast<double>(p));
    for (uint64_t pw = p; pw <= N; ) {
      lambda[pw] = lp;
      if (pw > N / p) break;
      pw *= p;
    }
  }
  Kahan psi;
  for (uint64_t n = 1; n <= N; ++n) psi.add(lambda[n]);

  BvScan scan;
  scan.N = N;
  scan.theta = theta;
  scan.q0 = q0;
  scan.Z = Z;
  scan.psi_N = psi.sum;
  const uint64_t qmax =
      static_cast<uint64_t>(std::floor(std::pow(static_cast<double>(N), theta) + 1e-9));
  Kahan total;
  for (uint64_t q = q0; q <= qmax; q += q0) {
    if (Z > 1 && std::gcd(q, Z) != 1) continue;
    std::vector<Kahan> buckets(q);
    for (uint64_t n = 1; n <= N; ++n)
      if (lambda[n] != 0) buckets[n % q].add(lambda[n]);
    Kahan partition;
    for (const auto& bucket : buckets) partition.add(bucket.sum);
    BvRow row;
    row.q = q;
    row.partition_residual = std::fabs(partition.sum - psi.sum) / std::max(psi.sum, 1.0);
    if (row.partition_residual > 1e-9)
      throw error("residue partition identity failed at q = " + std::to_string(q));
    const double expected = psi.sum / static_cast<double>(euler_phi_small(q));
    double worst = 0;
    for (uint64_t a = 0; a < q; ++a) {
      if (std::gcd(a == 0 ? q : a, q) != 1) continue;
      worst = std::max(worst, std::fabs(buckets[a].sum - expected));
    }
    if (q == 1) worst = std::fabs(buckets[0].sum - psi.sum);
    row.max_error = worst;
    total.add(worst);
    scan.rows.push_back(row);
  }
  scan.summed_total = total.sum;
  return scan;
}

}  // namespace gaplab
