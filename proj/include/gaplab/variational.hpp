#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaplab/rational.hpp"

namespace gaplab {

// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  using Terms = std::map<std::vector<uint32_t>, Rat>;

  explicit Polynomial(uint32_t arity) : arity_(arity) {}
  static Polynomial constant(uint32_t arity, const Rat& c);
  static Polynomial variable(uint32_t arity, uint32_t index);

  void add_term(std::vector<uint32_t> exps, const Rat& coeff);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rat& c) const;
  Polynomial pow(uint32_t e) const;

  uint32_t arity() const { return arity_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  uint32_t degree() const;
  double eval(std::span<const double> t) const;

 private:
  uint32_t arity_;
  Terms terms_;
};

// A square-integrable test function: the polynomial restricted to the
// simplex {t_i >= 0, sum t_i <= 1 + eta}, zero outside.
struct TestFunction {
  Polynomial poly;
  Rat eta = 0;  // in [0, 1)

  uint32_t k() const { return poly.arity(); }
};

// I(F)  = integral of F^2 over the support simplex.
// J_i(F) = integral over the (1-eta)-scaled outer simplex of the squared
//          inner integral in t_i.
// L(F)  = like J but with a double inner integral in the last two variables
//          (k >= 2).
// All exact; bilinear forms are exposed for Gram assembly.
Rat bilinear_I(const TestFunction& a, const TestFunction& b);
Rat bilinear_J(const TestFunction& a, const TestFunction& b, uint32_t i);  // 1-based i
Rat bilinear_L(const TestFunction& a, const TestFunction& b);
Rat integral_I(const TestFunction& f);
Rat integral_J(const TestFunction& f, uint32_t i);
Rat integral_L(const TestFunction& f);

struct MkBound {
  uint32_t k = 0;
  uint32_t degree = 0;
  Rat eta = 0;
  std::vector<std::pair<uint32_t, uint32_t>> basis;  // (a, b): (1-P1)^a * P2^b
  std::vector<Rat> coefficients;
  Rat bound;               // exact Rayleigh quotient at `coefficients`
  double float_estimate = 0;
  bool bracketed = false;  // pencil-determinant bisection ran
  Rat bracket_lo, bracket_hi;
};

// Certified lower bound for the variational constant M_{k,eta}: maximizes
// (sum_i J_i)/I over symmetric polynomials spanned by (1-P1)^a P2^b with
// a + 2b <= degree, P1 = sum t_i, P2 = sum t_i^2. The returned bound is the
// quotient re-evaluated in exact rational arithmetic.
MkBound mk_lower_bound(uint32_t k, const Rat& eta, uint32_t degree);

// Same optimization over a caller-supplied basis.
MkBound mk_lower_bound_with_basis(const std::vector<TestFunction>& basis);

// Declarative text format: lines "k <int>", "eta <rational>" and
// "term <rational> : e1 e2 ... ek"; '#' starts a comment.
TestFunction parse_test_function(std::string_view text);
std::string serialize_test_function(const TestFunction& f);
// Multiple functions: shared k/eta header, blocks opened by a "poly" line.
std::vector<TestFunction> parse_basis_file(std::string_view text);

}  // namespace gaplab
