#include <cmath>

#include "doctest.h"
#include "gaplab/errors.hpp"
#include "gaplab/gapstats.hpp"
#include "oracles.hpp"

using namespace gaplab;

TEST_CASE("gap records") {
  auto store = PrimeStore::build(100);
  const auto records = gap_stream(store);
  REQUIRE(!records.empty());
  CHECK(records[0].n == 1);
  CHECK(records[0].p == 2);
  CHECK(records[0].p_next == 3);
  CHECK(records[0].gap == 1);
  CHECK(records[0].normalized == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-14));

  // the record at p = 7 jumps to 11
  const auto& r7 = records[3];
  CHECK(r7.p == 7);
  CHECK(r7.gap == 4);

  // telescoping: gaps sum to p_{N+1} - 2
  uint64_t total = 0;
  for (const auto& r : records) total += r.gap;
  CHECK(total == records.back().p_next - 2);

  // normalizer hook
  const auto log2_records =
      gap_stream(store, [](double p) { return std::log2(p); });
  CHECK(log2_records[0].normalized == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("poisson histogram accounting") {
  auto store = PrimeStore::build(100000);
  const auto records = gap_stream(store);

  std::vector<double> edges{0, 0.5, 1.0, 2.0};
  const auto hist = poisson_histogram(records, edges);
  uint64_t counted = hist.overflow.count;
  double fractions = hist.overflow.empirical;
  for (const auto& row : hist.rows) {
    counted += row.count;
    fractions += row.empirical;
    CHECK(row.predicted == doctest::Approx(std::exp(-row.lo) - std::exp(-row.hi)));
  }
  CHECK(counted == records.size());  // exact normalization, counts included
  CHECK(fractions == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hist.max_cdf_discrepancy >= 0);

  // single unbounded bin
  const auto single = poisson_histogram(records, std::vector<double>{0});
  CHECK(single.rows.empty());
  CHECK(single.overflow.count == records.size());
  CHECK(single.overflow.empirical == 1.0);
  CHECK(single.overflow.predicted == 1.0);

  // empty record set
  const auto empty = poisson_histogram(std::span<const GapRecord>{}, edges);
  for (const auto& row : empty.rows) CHECK(row.count == 0);
  CHECK(empty.overflow.count == 0);

  CHECK_THROWS_AS(poisson_histogram(records, std::vector<double>{0, 2, 1}), argument_error);
  CHECK_THROWS_AS(poisson_histogram(records, std::vector<double>{1, 2}), argument_error);
}

TEST_CASE("chains of consecutive gaps") {
  auto store = PrimeStore::build(1000);
  const auto records = gap_stream(store);
  const auto singles = chain_points(records, 1);
  REQUIRE(singles.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i)
    CHECK(singles[i][0] == records[i].normalized);

  const auto pairs = chain_points(records, 2);
  CHECK(pairs.size() == records.size() - 1);
  CHECK(pairs[0][0] == doctest::Approx(1.0 / std::log(2.0)));
  CHECK(pairs[0][1] == doctest::Approx(2.0 / std::log(3.0)));

  CHECK(chain_points(records, static_cast<uint32_t>(records.size() + 1)).empty());
  CHECK_THROWS_AS(chain_points(records, 0), argument_error);
}

TEST_CASE("difference hits") {
  auto store = PrimeStore::build(100000);
  const auto records = gap_stream(store);

  // identical betas target zero: hits are the tiny normalized gaps
  const auto zero = difference_hits(records, std::vector<double>{0, 0}, 0.1);
  REQUIRE(zero.size() == 1);
  for (uint64_t n : zero[0].hits) CHECK(records[n - 1].normalized <= 0.1);

  const auto pair = difference_hits(records, std::vector<double>{0, 1}, 0.01);
  REQUIRE(pair.size() == 1);
  CHECK(pair[0].target == 1.0);
  CHECK(!pair[0].hits.empty());  // near-average gaps abound

  // exact-match tolerance is generically empty
  const auto exact = difference_hits(records, std::vector<double>{0, 0.123456789}, 0.0);
  CHECK(exact[0].hits.empty());

  CHECK_THROWS_AS(difference_hits(records, std::vector<double>{1, 0}, 0.1), argument_error);
}

TEST_CASE("measure bounds") {
  const auto mb9 = measure_bounds(9);
  CHECK(mb9.asymptotic_density == Rat(1, 8));
  CHECK(mb9.effective_density == Rat(35, 761));
  // cross multiplication: 35/761 > 1/22
  CHECK(Rat(35, 761) > Rat(1, 22));
  CHECK(BigInt(35) * 22 > BigInt(761));

  const auto mb2 = measure_bounds(2);
  CHECK(mb2.asymptotic_density == Rat(1));
  CHECK(mb2.effective_density == Rat(1));

  for (uint32_t kappa = 3; kappa <= 12; ++kappa) {
    const auto mb = measure_bounds(kappa);
    CHECK(mb.effective_density < mb.asymptotic_density);
    CHECK(mb.asymptotic_density * Rat(kappa - 1) == Rat(1));
  }
  CHECK_THROWS_AS(measure_bounds(1), argument_error);
}

TEST_CASE("distribution scan over progressions") {
  auto store = PrimeStore::build(1000);
  const auto scan = bv_error_scan(store, 1000, 0.3, 1, 1);
  // N^0.3 ~ 7.9, so q runs over 1..7
  REQUIRE(scan.rows.size() == 7);
  CHECK(scan.rows[0].q == 1);
  CHECK(scan.rows[0].max_error == 0.0);
  for (const auto& row : scan.rows) CHECK(row.partition_residual <= 1e-9);

  const auto multiples = bv_error_scan(store, 1000, 0.5, 6, 1);
  for (const auto& row : multiples.rows) CHECK(row.q % 6 == 0);

  const auto coprime = bv_error_scan(store, 1000, 0.5, 1, 6);
  for (const auto& row : coprime.rows) {
    CHECK(row.q % 2 != 0);
    CHECK(row.q % 3 != 0);
  }

  CHECK_THROWS_AS(bv_error_scan(store, 1000, 0.3, 4, 1), argument_error);
  CHECK_THROWS_AS(bv_error_scan(store, 1000, 1.5, 1, 1), argument_error);
  CHECK_THROWS_AS(bv_error_scan(store, 2000, 0.3, 1, 1), gaplab::range_error);
}
