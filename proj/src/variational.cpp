#include "gaplab/variational.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "gaplab/errors.hpp"

namespace gaplab {

namespace {

// integral over the unit simplex in m variables of (1 - sum t)^A * prod t^f
Rat dirichlet_integral(uint32_t m, uint32_t A, const std::vector<uint32_t>& f) {
  BigInt num = factorial(A);
  uint32_t total = A + m;
  for (uint32_t e : f) {
    num *= factorial(e);
    total += e;
  }
  return Rat(num, factorial(total));
}

uint32_t exp_sum(const std::vector<uint32_t>& e) {
  uint32_t s = 0;
  for (uint32_t v : e) s += v;
  return s;
}

using InnerRep = std::map<std::vector<uint32_t>, Rat>;  // key = outer exps ++ [s-power]

void check_compatible(const TestFunction& a, const TestFunction& b) {
  if (a.poly.arity() != b.poly.arity())
    throw argument_error("test functions have different arity");
  if (a.eta != b.eta) throw argument_error("test functions have different eta");
  if (a.eta < 0 || a.eta >= 1) throw argument_error("eta must lie in [0, 1)");
}

}  // namespace

Polynomial Polynomial::constant(uint32_t arity, const Rat& c) {
  Polynomial p(arity);
  p.add_term(std::vector<uint32_t>(arity, 0), c);
  return p;
}

Polynomial Polynomial::variable(uint32_t arity, uint32_t index) {
  if (index >= arity) throw argument_error("variable index out of range");
  Polynomial p(arity);
  std::vector<uint32_t> e(arity, 0);
  e[index] = 1;
  p.add_term(std::move(e), 1);
  return p;
}

void Polynomial::add_term(std::vector<uint32_t> exps, const Rat& coeff) {
  if (exps.size() != arity_) throw argument_error("exponent vector has wrong arity");
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(std::move(exps), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (arity_ != o.arity_) throw argument_error("arity mismatch");
  Polynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  return *this + o.scaled(-1);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (arity_ != o.arity_) throw argument_error("arity mismatch");
  Polynomial out(arity_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      std::vector<uint32_t> e(arity_);
      for (uint32_t i = 0; i < arity_; ++i) e[i] = e1[i] + e2[i];
      out.add_term(std::move(e), c1 * c2);
    }
  }
  return out;
}

Polynomial Polynomial::scaled(const Rat& c) const {
  Polynomial out(arity_);
  if (c == 0) return out;
  for (const auto& [e, v] : terms_) out.terms_[e] = v * c;
  return out;
}

Polynomial Polynomial::pow(uint32_t e) const {
  Polynomial acc = Polynomial::constant(arity_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    if (e >>= 1) base = base * base;
  }
  return acc;
}

uint32_t Polynomial::degree() const {
  uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, exp_sum(e));
  return d;
}

double Polynomial::eval(std::span<const double> t) const {
  if (t.size() != arity_) throw argument_error("eval point has wrong arity");
  double sum = 0;
  for (const auto& [e, c] : terms_) {
    double term = rat_to_double(c);
    for (uint32_t i = 0; i < arity_; ++i)
      for (uint32_t j = 0; j < e[i]; ++j) term *= t[i];
    sum += term;
  }
  return sum;
}

Rat bilinear_I(const TestFunction& a, const TestFunction& b) {
  check_compatible(a, b);
  const uint32_t k = a.poly.arity();
  const Rat one_plus = 1 + a.eta;
  Rat sum = 0;
  for (const auto& [e1, c1] : a.poly.terms()) {
    for (const auto& [e2, c2] : b.poly.terms()) {
      std::vector<uint32_t> e(k);
      for (uint32_t i = 0; i < k; ++i) e[i] = e1[i] + e2[i];
      sum += c1 * c2 * rat_pow(one_plus, k + exp_sum(e)) * dirichlet_integral(k, 0, e);
    }
  }
  return sum;
}

namespace {

// Inner integral in variable i over [0, (1+eta) - sum_{j != i} t_j]: one
// monomial becomes (prod_{j != i} t^e) * s^{e_i + 1} / (e_i + 1).
InnerRep inner_rep_J(const TestFunction& f, uint32_t i) {
  const uint32_t k = f.poly.arity();
  InnerRep rep;
  for (const auto& [e, c] : f.poly.terms()) {
    std::vector<uint32_t> key;
    key.reserve(k);
    for (uint32_t j = 0; j < k; ++j)
      if (j != i) key.push_back(e[j]);
    key.push_back(e[i] + 1);
    Rat v = c / Rat(e[i] + 1);
    auto [it, inserted] = rep.emplace(std::move(key), v);
    if (!inserted) it->second += v;
  }
  return rep;
}

// Double inner integral over the last two variables: monomial ->
// (prod_{j<k-2} t^e) * s^{e1+e2+2} * e1! e2! / (e1+e2+2)!.
InnerRep inner_rep_L(const TestFunction& f) {
  const uint32_t k = f.poly.arity();
  InnerRep rep;
  for (const auto& [e, c] : f.poly.terms()) {
    std::vector<uint32_t> key(e.begin(), e.end() - 2);
    const uint32_t e1 = e[k - 2], e2 = e[k - 1];
    key.push_back(e1 + e2 + 2);
    Rat v = c * Rat(factorial(e1) * factorial(e2), factorial(e1 + e2 + 2));
    auto [it, inserted] = rep.emplace(std::move(key), v);
    if (!inserted) it->second += v;
  }
  return rep;
}

InnerRep convolve(const InnerRep& a, const InnerRep& b) {
  InnerRep out;
  for (const auto& [k1, c1] : a) {
    for (const auto& [k2, c2] : b) {
      std::vector<uint32_t> key(k1.size());
      for (size_t i = 0; i < k1.size(); ++i) key[i] = k1[i] + k2[i];
      const Rat v = c1 * c2;
      auto [it, inserted] = out.emplace(std::move(key), v);
      if (!inserted) it->second += v;
    }
  }
  return out;
}

}  // namespace

Rat bilinear_J(const TestFunction& a, const TestFunction& b, uint32_t i) {
  check_compatible(a, b);
  const uint32_t k = a.poly.arity();
  if (i < 1 || i > k) throw argument_error("inner-integral index out of range");
  const InnerRep prod = convolve(inner_rep_J(a, i - 1), inner_rep_J(b, i - 1));
  const uint32_t m = k - 1;
  const Rat eta = a.eta;
  Rat sum = 0;
  for (const auto& [key, c] : prod) {
    std::vector<uint32_t> f(key.begin(), key.end() - 1);
    const uint32_t g = key.back();
    if (eta == 0) {
      sum += c * dirichlet_integral(m, g, f);
      continue;
    }
    // over the (1-eta)-scaled outer simplex: s = (1-eta)(1-P1) + 2 eta
    const Rat one_minus = 1 - eta;
    Rat inner = 0;
    for (uint32_t r = 0; r <= g; ++r) {
      inner += Rat(binomial(g, r)) * rat_pow(one_minus, r) * rat_pow(2 * eta, g - r) *
               dirichlet_integral(m, r, f);
    }
    sum += c * rat_pow(one_minus, m + exp_sum(f)) * inner;
  }
  return sum;
}

Rat bilinear_L(const TestFunction& a, const TestFunction& b) {
  check_compatible(a, b);
  const uint32_t k = a.poly.arity();
  if (k < 2) throw argument_error("the double-inner functional needs k >= 2");
  const InnerRep prod = convolve(inner_rep_L(a), inner_rep_L(b));
  const uint32_t m = k - 2;
  const Rat one_plus = 1 + a.eta;
  Rat sum = 0;
  for (const auto& [key, c] : prod) {
    std::vector<uint32_t> f(key.begin(), key.end() - 1);
    const uint32_t g = key.back();
    sum += c * rat_pow(one_plus, m + exp_sum(f) + g) * dirichlet_integral(m, g, f);
  }
  return sum;
}

Rat integral_I(const TestFunction& f) { return bilinear_I(f, f); }
Rat integral_J(const TestFunction& f, uint32_t i) { return bilinear_J(f, f, i); }
Rat integral_L(const TestFunction& f) { return bilinear_L(f, f); }

namespace {

Rat rat_from_double(double x, uint64_t max_den) {
  if (!std::isfinite(x)) throw argument_error("cannot rationalize a non-finite value");
  const bool neg = x < 0;
  double v = std::fabs(x);
  // continued-fraction convergents with bounded denominator
  uint64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(frac);
    if (fl > 9e18) break;
    const uint64_t a = static_cast<uint64_t>(fl);
    if (q1 != 0 && a > (max_den - q0) / q1) break;
    const uint64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rem = frac - fl;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) return 0;
  Rat r{BigInt(p1), BigInt(q1)};
  return neg ? -r : r;
}

using RatMatrix = std::vector<std::vector<Rat>>;

struct pencil_singular {};

// Count of positive pivots in a symmetric elimination; by Sylvester this is
// the number of eigenvalues of the pencil above the shift when applied to
// J - lambda*I with I positive definite. Throws on a zero pivot.
uint32_t ldl_positive_pivots(RatMatrix m) {
  const size_t n = m.size();
  uint32_t pos = 0;
  for (size_t i = 0; i < n; ++i) {
    const Rat piv = m[i][i];
    if (piv == 0) {
      bool rest = false;
      for (size_t r = i; r < n && !rest; ++r)
        for (size_t c = i; c < n && !rest; ++c)
          if (m[r][c] != 0) rest = true;
      if (!rest) return pos;  // matrix exhausted
      throw pencil_singular{};
    }
    if (piv > 0) ++pos;
    for (size_t r = i + 1; r < n; ++r) {
      if (m[r][i] == 0) continue;
      const Rat f = m[r][i] / piv;
      for (size_t c = i; c < n; ++c) m[r][c] -= f * m[i][c];
    }
  }
  return pos;
}

// First index at which the leading minors of a PSD matrix stop being
// positive, or npos if positive definite.
size_t first_dependent_index(RatMatrix m) {
  const size_t n = m.size();
  for (size_t i = 0; i < n; ++i) {
    const Rat piv = m[i][i];
    if (piv <= 0) return i;
    for (size_t r = i + 1; r < n; ++r) {
      if (m[r][i] == 0) continue;
      const Rat f = m[r][i] / piv;
      for (size_t c = i; c < n; ++c) m[r][c] -= f * m[i][c];
    }
  }
  return static_cast<size_t>(-1);
}

MkBound optimize_pencil(const std::vector<TestFunction>& basis_in,
                        const std::vector<std::pair<uint32_t, uint32_t>>& labels,
                        bool symmetric_basis, uint32_t degree) {
  const size_t n = basis_in.size();
  const uint32_t k = basis_in.front().k();
  const Rat eta = basis_in.front().eta;

  // Normalize each basis function by its leading coefficient so the result
  // is exactly invariant under rescaling any of them.
  std::vector<TestFunction> basis(basis_in);
  for (auto& f : basis) {
    if (f.poly.empty()) throw argument_error("zero polynomial in basis");
    const Rat lead = f.poly.terms().rbegin()->second;
    f.poly = f.poly.scaled(Rat(1) / lead);
  }

  RatMatrix I(n, std::vector<Rat>(n)), J(n, std::vector<Rat>(n));
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = r; c < n; ++c) {
      I[r][c] = bilinear_I(basis[r], basis[c]);
      if (symmetric_basis) {
        J[r][c] = Rat(k) * bilinear_J(basis[r], basis[c], k);
      } else {
        Rat s = 0;
        for (uint32_t i = 1; i <= k; ++i) s += bilinear_J(basis[r], basis[c], i);
        J[r][c] = s;
      }
      I[c][r] = I[r][c];
      J[c][r] = J[r][c];
    }
  }

  const size_t dep = first_dependent_index(I);
  if (dep != static_cast<size_t>(-1)) {
    std::ostringstream msg;
    msg << "degenerate basis: element " << dep;
    if (dep < labels.size())
      msg << " ((1-P1)^" << labels[dep].first << " * P2^" << labels[dep].second << ")";
    msg << " is linearly dependent on its predecessors";
    throw argument_error(msg.str());
  }

  Eigen::MatrixXd Id(n, n), Jd(n, n);
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) {
      Id(r, c) = rat_to_double(I[r][c]);
      Jd(r, c) = rat_to_double(J[r][c]);
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Jd, Id);
  if (ges.info() != Eigen::Success)
    throw error("generalized eigensolver failed on the Gram pencil");
  const Eigen::VectorXd v = ges.eigenvectors().col(n - 1);
  const double lambda_float = ges.eigenvalues()(n - 1);

  // Any coefficient vector certifies a lower bound; rationalize and
  // re-evaluate the quotient exactly.
  double vmax = 0;
  for (size_t i = 0; i < n; ++i) vmax = std::max(vmax, std::fabs(v(i)));
  std::vector<Rat> coeffs(n);
  for (size_t i = 0; i < n; ++i)
    coeffs[i] = rat_from_double(v(i) / (vmax > 0 ? vmax : 1.0), 1u << 24);

  auto quadratic_form = [&](const RatMatrix& m) {
    Rat s = 0;
    for (size_t r = 0; r < n; ++r)
      for (size_t c = 0; c < n; ++c)
        if (coeffs[r] != 0 && coeffs[c] != 0) s += coeffs[r] * coeffs[c] * m[r][c];
    return s;
  };
  Rat den = quadratic_form(I);
  if (den == 0) {  // all coefficients rounded away; fall back to one element
    coeffs.assign(n, 0);
    coeffs[n - 1] = 1;
    den = quadratic_form(I);
  }
  const Rat num = quadratic_form(J);
  MkBound out;
  out.k = k;
  out.degree = degree;
  out.eta = eta;
  out.basis = labels;
  out.coefficients = coeffs;
  out.bound = num / den;
  out.float_estimate = lambda_float;

  // Pencil-determinant bisection: an exact bracket for the top generalized
  // eigenvalue, feasible for small bases.
  if (n <= 16) {
    auto inertia_above = [&](const Rat& lam) -> uint32_t {
      for (int attempt = 0; attempt < 4; ++attempt) {
        Rat shift = lam;
        if (attempt > 0)
          shift += Rat(attempt, BigInt(1) << 96);  // escape exact eigenvalues
        RatMatrix m(n, std::vector<Rat>(n));
        for (size_t r = 0; r < n; ++r)
          for (size_t c = 0; c < n; ++c) m[r][c] = J[r][c] - shift * I[r][c];
        try {
          return ldl_positive_pivots(std::move(m));
        } catch (const pencil_singular&) {
          continue;
        }
      }
      throw error("pencil bisection could not sidestep a singular shift");
    };
    Rat lo = out.bound;
    Rat hi = Rat(rat_from_double(std::fabs(lambda_float), 1u << 20)) * 2 + 1;
    int guard = 0;
    while (inertia_above(hi) > 0) {
      hi = hi * 2 + 1;
      if (++guard > 64) throw error("pencil bisection failed to bracket the spectrum");
    }
    if (inertia_above(lo) == 0) {
      // the rationalized vector already sits at the top eigenvalue
      hi = lo;
    } else {
      for (int iter = 0; iter < 48 && hi - lo > Rat(1, 1000000000); ++iter) {
        const Rat mid = (lo + hi) / 2;
        if (inertia_above(mid) > 0)
          lo = mid;
        else
          hi = mid;
      }
    }
    out.bracketed = true;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
  }
  return out;
}

}  // namespace

MkBound mk_lower_bound(uint32_t k, const Rat& eta, uint32_t degree) {
  if (k < 2) throw argument_error("mk_lower_bound needs k >= 2");
  if (eta < 0 || eta >= 1) throw argument_error("eta must lie in [0, 1)");

  Polynomial p1(k);
  Polynomial p2(k);
  {
    Polynomial sum_t = Polynomial::constant(k, 0);
    Polynomial sum_t2 = Polynomial::constant(k, 0);
    for (uint32_t i = 0; i < k; ++i) {
      const Polynomial v = Polynomial::variable(k, i);
      sum_t = sum_t + v;
      sum_t2 = sum_t2 + v * v;
    }
    p1 = Polynomial::constant(k, 1) - sum_t;  // 1 - P1
    p2 = sum_t2;                              // P2
  }

  std::vector<TestFunction> basis;
  std::vector<std::pair<uint32_t, uint32_t>> labels;
  for (uint32_t b = 0; 2 * b <= degree; ++b) {
    for (uint32_t a = 0; a + 2 * b <= degree; ++a) {
      basis.push_back(TestFunction{p1.pow(a) * p2.pow(b), eta});
      labels.emplace_back(a, b);
    }
  }
  return optimize_pencil(basis, labels, /*symmetric_basis=*/true, degree);
}

MkBound mk_lower_bound_with_basis(const std::vector<TestFunction>& basis) {
  if (basis.empty()) throw argument_error("empty basis");
  std::vector<std::pair<uint32_t, uint32_t>> labels;
  uint32_t deg = 0;
  for (const auto& f : basis) deg = std::max(deg, f.poly.degree());
  return optimize_pencil(basis, labels, /*symmetric_basis=*/false, deg);
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::vector<TestFunction> parse_basis_file(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<uint32_t> k;
  Rat eta = 0;
  std::vector<TestFunction> out;
  Polynomial current(1);
  bool open = false;
  auto flush = [&] {
    if (open) {
      if (current.empty()) throw parse_error("empty poly block");
      out.push_back(TestFunction{current, eta});
    }
    open = false;
  };
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    auto bad = [&](const std::string& why) {
      throw parse_error("line " + std::to_string(lineno) + ": " + why);
    };
    if (head == "k") {
      if (toks.size() != 2) bad("expected 'k <int>'");
      k = static_cast<uint32_t>(std::stoul(toks[1]));
      if (*k < 1) bad("k must be >= 1");
    } else if (head == "eta") {
      if (toks.size() != 2) bad("expected 'eta <rational>'");
      eta = parse_rational(toks[1]);
    } else if (head == "poly") {
      if (!k) bad("'poly' before 'k'");
      flush();
      current = Polynomial(*k);
      open = true;
    } else if (head == "term") {
      if (!k) bad("'term' before 'k'");
      if (!open) {  // single-function files may omit the poly marker
        current = Polynomial(*k);
        open = true;
      }
      if (toks.size() != 3 + *k || toks[2] != ":")
        bad("expected 'term <coeff> : " + std::to_string(*k) + " exponents'");
      std::vector<uint32_t> exps(*k);
      for (uint32_t i = 0; i < *k; ++i)
        exps[i] = static_cast<uint32_t>(std::stoul(toks[3 + i]));
      current.add_term(std::move(exps), parse_rational(toks[1]));
    } else {
      bad("unknown directive '" + head + "'");
    }
  }
  flush();
  if (out.empty()) throw parse_error("no polynomial terms found");
  return out;
}

TestFunction parse_test_function(std::string_view text) {
  auto all = parse_basis_file(text);
  if (all.size() != 1) throw parse_error("expected exactly one test function");
  return all[0];
}

std::string serialize_test_function(const TestFunction& f) {
  std::ostringstream out;
  out << "k " << f.poly.arity() << "\n";
  out << "eta " << rat_to_string(f.eta) << "\n";
  for (const auto& [e, c] : f.poly.terms()) {
    out << "term " << rat_to_string(c) << " :";
    for (uint32_t v : e) out << ' ' << v;
    out << "\n";
  }
  return out.str();
}

}  // namespace gaplab
