#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "gaplab/errors.hpp"
#include "gaplab/weights.hpp"
#include "oracles.hpp"

using namespace gaplab;

TEST_CASE("sieve weight zeros") {
  auto spec = SieveWeightSpec::triangle(3, 0.5, 1);
  const uint64_t N = 10000;
  CHECK(sieve_weight(spec, std::vector<uint64_t>{4, 1, 1}, N, 1) == 0.0);   // mu(4) = 0
  CHECK(sieve_weight(spec, std::vector<uint64_t>{1, 12, 1}, N, 1) == 0.0);  // mu(12) = 0
  // exceeding the support budget kills the weight: N^0.5 = 100
  CHECK(sieve_weight(spec, std::vector<uint64_t>{101, 1, 1}, N, 1) == 0.0);
  CHECK(sieve_weight(spec, std::vector<uint64_t>{51, 3, 1}, N, 1) == 0.0);
  // shared factor with the excluded modulus (3 stays inside the piece cap)
  CHECK(sieve_weight(spec, std::vector<uint64_t>{3, 1, 1}, N, 3) == 0.0);
  CHECK(sieve_weight(spec, std::vector<uint64_t>{3, 1, 1}, N, 7) != 0.0);
}

TEST_CASE("sieve weight at the all-ones tuple") {
  auto spec = SieveWeightSpec::triangle(3, 0.5, 1);
  // log 1 / log N = 0, each factor evaluates to F(0) = 1
  CHECK(sieve_weight(spec, std::vector<uint64_t>{1, 1, 1}, 10000, 1) == 1.0);

  auto ind = SieveWeightSpec::ones_indicator(3);
  CHECK(sieve_weight(ind, std::vector<uint64_t>{1, 1, 1}, 10000, 1) == 1.0);
  CHECK(sieve_weight(ind, std::vector<uint64_t>{2, 1, 1}, 10000, 1) == 0.0);
}

TEST_CASE("weight spec validation") {
  auto spec = SieveWeightSpec::triangle(3, 0.5, 1);
  spec.pieces[0][0].cap = 1.0;  // caps now sum past delta
  CHECK_THROWS_AS(spec.validate(), argument_error);
  auto bad = SieveWeightSpec::triangle(2, 0.5, 1);
  bad.pieces.clear();
  CHECK_THROWS_AS(bad.validate(), argument_error);
}

namespace {

KTuple random_admissible(std::mt19937_64& rng, uint32_t k, uint64_t max_offset) {
  for (;;) {
    std::set<uint64_t> offs{0};
    while (offs.size() < k) offs.insert(rng() % (max_offset + 1));
    KTuple t(std::vector<uint64_t>(offs.begin(), offs.end()));
    if (is_admissible(t)) return t;
  }
}

uint64_t coprime_base_point(const KTuple& t, uint64_t W) {
  for (uint64_t b = 0; b < W; ++b) {
    bool ok = true;
    for (uint64_t h : t.offsets()) {
      const uint64_t r = (b + h) % W;
      if (r == 0 || std::gcd(r, W) != 1) { ok = false; break; }
    }
    if (ok) return b;
  }
  throw std::runtime_error("no coprime base point");
}

}  // namespace

TEST_CASE("weighted sums: degenerate weight counts the bracket directly") {
  auto store = PrimeStore::build(25000);
  auto t = partition_equal(KTuple({0, 2, 6}), 3);
  const uint64_t N = 10000, W = 210;
  const uint64_t b = coprime_base_point(t, W);
  auto ind = SieveWeightSpec::ones_indicator(3);
  const auto res = weighted_sum_S(store, t, b, W, N, 1, ind, SumVariant::S);

  // independent accumulation of the same sum
  double expected = 0;
  for (uint64_t n = N + 1; n <= 2 * N; ++n) {
    if (n % W != b) continue;
    double primes = 0, pairs = 0;
    std::vector<int> cnt(3, 0);
    for (uint32_t i = 0; i < 3; ++i) {
      if (oracles::trial_division_is_prime(n + t.offsets()[i])) {
        ++cnt[t.label(i)];
        ++primes;
      }
    }
    for (int c : cnt) pairs += c * (c - 1);
    expected += primes - 1 - pairs;
  }
  CHECK(res.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("weighted sums: the two evaluation orders agree") {
  auto store = PrimeStore::build(25000);
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 3; ++trial) {
    auto t = partition_equal(random_admissible(rng, 3, 20), 3);
    const uint64_t N = 10000, W = 210;
    const uint64_t b = coprime_base_point(t, W);
    for (double delta : {0.05, 0.5}) {
      auto spec = SieveWeightSpec::triangle(3, delta, 1);
      const auto res = weighted_sum_S(store, t, b, W, N, 1, spec, SumVariant::S);
      CHECK(std::fabs(res.direct_value - res.swapped_value) <=
            1e-6 * std::max({1.0, std::fabs(res.direct_value), std::fabs(res.swapped_value)}));
      const auto sp = weighted_sum_S(store, t, b, W, N, 1, spec, SumVariant::SPrime);
      CHECK(sp.value <= res.value + 1e-9);  // extra penalty only lowers the sum
    }
  }
}

TEST_CASE("weighted sums: empty progressions and bad arguments") {
  auto store = PrimeStore::build(25000);
  auto t = partition_equal(KTuple({0, 2, 6}), 3);
  auto spec = SieveWeightSpec::triangle(3, 0.5, 1);
  // W beyond the range leaves no qualifying n
  const auto res = weighted_sum_S(store, t, 25, 20011, 10000, 1, spec, SumVariant::S);
  CHECK(res.value == 0.0);
  CHECK(res.qualifying_n == 0);

  // (b + 0, 210) shares the factor 2 when b is even
  CHECK_THROWS_AS(weighted_sum_S(store, t, 2, 210, 10000, 1, spec, SumVariant::S),
                  argument_error);
  auto unlabeled = KTuple({0, 2, 6});
  CHECK_THROWS_AS(weighted_sum_S(store, unlabeled, 1, 210, 10000, 1, spec, SumVariant::S),
                  argument_error);
  CHECK_THROWS_AS(weighted_sum_S(store, t, 1, 210, 30000, 1, spec, SumVariant::S),
                  gaplab::range_error);
}

TEST_CASE("positive sums come with witnesses") {
  auto store = PrimeStore::build(25000);
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    auto t = partition_equal(random_admissible(rng, 3, 20), 3);
    const uint64_t N = 10000, W = 210;
    const uint64_t b = coprime_base_point(t, W);
    auto spec = SieveWeightSpec::triangle(3, 0.5, 1);
    const auto res = weighted_sum_S(store, t, b, W, N, 1, spec, SumVariant::S);
    if (res.value > 0) {
      const auto witness = locate_witness(store, t, b, W, N, 1);
      REQUIRE(witness.has_value());
      // the witness really has primes in two distinct parts
      std::set<uint32_t> parts;
      for (uint32_t i = 0; i < t.k(); ++i)
        if (store.is_prime(*witness + t.offsets()[i])) parts.insert(t.label(i));
      CHECK(parts.size() >= 2);
    }
  }
}
