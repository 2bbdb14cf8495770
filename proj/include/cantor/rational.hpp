#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace cantor {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline Integer denominator(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

/// Lowest-terms text form: "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& q);

/// Accepts "n", "-n", "n/d"; the result is normalised. Throws InvalidInput.
Rational parse_rational(const std::string& text);

/// Exponent of `p` in |n| (n != 0).
unsigned valuation(Integer n, std::uint64_t p);

/// Prime factorisation of |n| by trial division, ascending primes.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(Integer n);

bool is_prime(std::uint64_t n);

Integer floor(const Rational& q);

}  // namespace cantor
