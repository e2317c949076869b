#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace gaplab {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// n! as a big integer, cached.
const BigInt& factorial(uint32_t n);

BigInt binomial(uint32_t n, uint32_t k);

Rat rat_pow(const Rat& base, uint32_t e);

// "p/q" (or "p" when q == 1), canonical sign on the numerator.
std::string rat_to_string(const Rat& r);

// Accepts "p", "p/q" and plain decimals like "0.25" or "-1.5".
Rat parse_rational(std::string_view s);

double rat_to_double(const Rat& r);

}  // namespace gaplab
