#include <random>

#include "doctest.h"
#include "gaplab/errors.hpp"
#include "gaplab/quadrature.hpp"
#include "gaplab/variational.hpp"
#include "oracles.hpp"

using namespace gaplab;

namespace {

TestFunction constant_one(uint32_t k, Rat eta = 0) {
  return TestFunction{Polynomial::constant(k, 1), eta};
}

TestFunction one_minus_sum(uint32_t k, Rat eta = 0) {
  Polynomial p = Polynomial::constant(k, 1);
  for (uint32_t i = 0; i < k; ++i) p = p - Polynomial::variable(k, i);
  return TestFunction{p, eta};
}

}  // namespace

TEST_CASE("exact I integrals") {
  CHECK(integral_I(constant_one(2)) == Rat(1, 2));
  CHECK(integral_I(constant_one(1)) == Rat(1));
  CHECK(integral_I(one_minus_sum(2)) == Rat(1, 12));
  CHECK(integral_I(constant_one(3)) == Rat(1, 6));
}

TEST_CASE("exact J integrals") {
  CHECK(integral_J(constant_one(2), 2) == Rat(1, 3));
  CHECK(integral_J(constant_one(1), 1) == Rat(1));
  // symmetric test functions are blind to the integration index
  Polynomial sym = Polynomial::constant(3, 1);
  for (uint32_t i = 0; i < 3; ++i) {
    sym = sym - Polynomial::variable(3, i);
    sym = sym + Polynomial::variable(3, i) * Polynomial::variable(3, i);
  }
  TestFunction f{sym, 0};
  const Rat j1 = integral_J(f, 1);
  CHECK(integral_J(f, 2) == j1);
  CHECK(integral_J(f, 3) == j1);
  CHECK_THROWS_AS(integral_J(constant_one(2), 3), argument_error);
}

TEST_CASE("exact L integrals") {
  CHECK(integral_L(constant_one(2)) == Rat(1, 4));
  TestFunction zero{Polynomial(2), 0};
  CHECK(integral_L(zero) == Rat(0));
  CHECK_THROWS_AS(integral_L(constant_one(1)), argument_error);
}

TEST_CASE("quadratic homogeneity under scaling") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    Polynomial p(2);
    for (int t = 0; t < 4; ++t)
      p.add_term({static_cast<uint32_t>(rng() % 3), static_cast<uint32_t>(rng() % 3)},
                 Rat(static_cast<int64_t>(rng() % 7) - 3));
    if (p.empty()) continue;
    TestFunction f{p, 0};
    TestFunction g{p.scaled(Rat(3, 2)), 0};
    CHECK(integral_I(g) == integral_I(f) * Rat(9, 4));
    CHECK(integral_J(g, 1) == integral_J(f, 1) * Rat(9, 4));
    CHECK(integral_L(g) == integral_L(f) * Rat(9, 4));
  }
}

TEST_CASE("scaled-simplex integrals with eta > 0") {
  // hand-derived values for F = 1, k = 2, eta = 1/4
  const Rat eta(1, 4);
  CHECK(integral_I(constant_one(2, eta)) == Rat(25, 32));  // (1+eta)^2 / 2
  // J = int_0^{3/4} ((5/4) - t)^2 dt = ((5/4)^3 - (1/2)^3) / 3
  CHECK(integral_J(constant_one(2, eta), 2) == Rat(39, 64));
  CHECK(integral_L(constant_one(2, eta)) == Rat(625, 1024));
}

TEST_CASE("exact integrals agree with grid sums") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    Polynomial p(2);
    for (int t = 0; t < 3; ++t)
      p.add_term({static_cast<uint32_t>(rng() % 3), static_cast<uint32_t>(rng() % 2)},
                 Rat(static_cast<int64_t>(rng() % 9) - 4, 1 + rng() % 3));
    if (p.empty()) p.add_term({0, 0}, 1);
    for (Rat eta : {Rat(0), Rat(1, 5)}) {
      TestFunction f{p, eta};
      const auto gi = oracles::grid_I_k2(f, 600);
      CHECK(std::fabs(rat_to_double(integral_I(f)) - gi.value) <= gi.error_bound);
      const auto gj = oracles::grid_J_k2(f, 2, 600);
      CHECK(std::fabs(rat_to_double(integral_J(f, 2)) - gj.value) <= gj.error_bound);
    }
  }
}

TEST_CASE("variational lower bounds") {
  const auto mk = mk_lower_bound(2, 0, 0);
  CHECK(mk.bound == Rat(4, 3));
  CHECK(mk.coefficients.size() == 1);

  // enlarging the basis never lowers the certified value
  Rat prev = 0;
  for (uint32_t degree = 0; degree <= 3; ++degree) {
    const auto b = mk_lower_bound(3, 0, degree);
    CHECK(b.bound >= prev);
    prev = b.bound;
  }

  const auto m5 = mk_lower_bound(5, 0, 3);
  CHECK(m5.bound > 2);
  CHECK(m5.bracketed);
  CHECK(m5.bracket_hi >= m5.bound);

  CHECK_THROWS_AS(mk_lower_bound(1, 0, 2), argument_error);
  CHECK_THROWS_AS(mk_lower_bound(3, 1, 2), argument_error);
}

TEST_CASE("bound is invariant under basis rescaling") {
  Polynomial p1 = Polynomial::constant(3, 1);
  Polynomial p2 = Polynomial::constant(3, 0);
  for (uint32_t i = 0; i < 3; ++i) {
    p1 = p1 - Polynomial::variable(3, i);
    p2 = p2 + Polynomial::variable(3, i) * Polynomial::variable(3, i);
  }
  std::vector<TestFunction> basis = {
      {Polynomial::constant(3, 1), 0}, {p1, 0}, {p2, 0}};
  std::vector<TestFunction> scaled = basis;
  scaled[1].poly = scaled[1].poly.scaled(7);
  const auto a = mk_lower_bound_with_basis(basis);
  const auto b = mk_lower_bound_with_basis(scaled);
  CHECK(a.bound == b.bound);
}

TEST_CASE("degenerate bases are reported") {
  std::vector<TestFunction> dup = {
      {Polynomial::constant(2, 1), 0}, {Polynomial::constant(2, 2), 0}};
  try {
    mk_lower_bound_with_basis(dup);
    FAIL("expected a degenerate-basis error");
  } catch (const argument_error& e) {
    CHECK(std::string(e.what()).find("degenerate basis") != std::string::npos);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("declarative test-function format") {
  const std::string text =
      "# a quadratic\n"
      "k 2\n"
      "eta 1/4\n"
      "term -1/2 : 1 0\n"
      "term 1 : 0 0\n";
  const TestFunction f = parse_test_function(text);
  CHECK(f.poly.arity() == 2);
  CHECK(f.eta == Rat(1, 4));
  CHECK(f.poly.terms().size() == 2);
  const TestFunction again = parse_test_function(serialize_test_function(f));
  CHECK(again.poly.terms() == f.poly.terms());
  CHECK(again.eta == f.eta);

  CHECK_THROWS_AS(parse_test_function("term 1 : 0 0\n"), parse_error);
  CHECK_THROWS_AS(parse_test_function("k 2\nterm 1 : 0\n"), parse_error);
  CHECK_THROWS_AS(parse_test_function("k 2\nfoo bar\n"), parse_error);

  const auto basis = parse_basis_file(
      "k 2\npoly\nterm 1 : 0 0\npoly\nterm 1 : 1 0\nterm 1 : 0 1\n");
  CHECK(basis.size() == 2);
  CHECK(basis[1].poly.terms().size() == 2);
}

TEST_CASE("product family sanity") {
  const auto f = ProductG::make(100);
  CHECK(f.g(0) == 1.0);  // A * 0 = 0
  CHECK(f.A == doctest::Approx(std::log(100.0) - 2 * std::log(std::log(100.0))));
  CHECK(f.T == doctest::Approx((std::exp(f.A) - 1) / f.A));
  CHECK_THROWS_AS(ProductG::make(2), argument_error);

  QuadratureConfig cfg;
  cfg.samples = 20000;
  const auto rep = lemma46_report(50, 1.0, 0.05, cfg);
  CHECK(rep.pointwise_max_violation <= 1e-9);
  CHECK(rep.integrals.L_over_I <= rep.logk_over_k_sq + 3 * rep.integrals.L_over_I_se);

  // identical seeds reproduce identical estimates
  const auto again = lemma46_report(50, 1.0, 0.05, cfg);
  CHECK(again.integrals.mc_I.value == rep.integrals.mc_I.value);
  CHECK(again.integrals.mc_L.value == rep.integrals.mc_L.value);
}
