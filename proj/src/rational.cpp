#include "gaplab/rational.hpp"

#include <mutex>
#include <vector>

#include "gaplab/errors.hpp"

namespace gaplab {

const BigInt& factorial(uint32_t n) {
  static std::vector<BigInt> cache{1, 1};
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= n) {
    cache.push_back(cache.back() * BigInt(cache.size()));
  }
  return cache[n];
}

BigInt binomial(uint32_t n, uint32_t k) {
  if (k > n) return 0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

Rat rat_pow(const Rat& base, uint32_t e) {
  Rat acc = 1;
  Rat b = base;
  while (e) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

std::string rat_to_string(const Rat& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rat parse_rational(std::string_view s) {
  auto fail = [&] { throw parse_error("bad rational literal: '" + std::string(s) + "'"); };
  if (s.empty()) fail();
  const auto slash = s.find('/');
  try {
    if (slash != std::string_view::npos) {
      BigInt num(std::string(s.substr(0, slash)));
      BigInt den(std::string(s.substr(slash + 1)));
      if (den == 0) fail();
      return Rat(num, den);
    }
    const auto dot = s.find('.');
    if (dot == std::string_view::npos) {
      return Rat(BigInt(std::string(s)));
    }
    // decimal: sign, integer part, fractional digits
    std::string head(s.substr(0, dot)), tail(s.substr(dot + 1));
    if (tail.empty()) fail();
    bool neg = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) head.erase(0, 1);
    if (head.empty()) head = "0";
    BigInt scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    BigInt value = BigInt(head) * scale + BigInt(tail);
    Rat r(value, scale);
    return neg ? -r : r;
  } catch (const std::runtime_error&) {
    fail();
  }
  return 0;  // unreachable
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace gaplab
