#pragma once

// Shared descriptors used across the test suites.

#include "cantor/values.hpp"

#include <map>

namespace cantor::testing {

inline Exponent inf() { return Exponent::infinite(); }
inline Exponent fin(unsigned n) { return Exponent::finite(n); }

inline GroupDescriptor rational_descriptor(
    Exponent default_exponent, std::map<std::uint64_t, Exponent> exceptions) {
  return GroupDescriptor(RationalGroup(default_exponent, std::move(exceptions)));
}

inline GroupDescriptor dyadic() { return rational_descriptor(fin(0), {{2, inf()}}); }
inline GroupDescriptor triadic() { return rational_descriptor(fin(0), {{3, inf()}}); }
inline GroupDescriptor sixadic() {
  return rational_descriptor(fin(0), {{2, inf()}, {3, inf()}});
}
inline GroupDescriptor all_rationals() { return rational_descriptor(inf(), {}); }
/// n_2 = 3, every other exponent 0.
inline GroupDescriptor two_cubed() { return rational_descriptor(fin(0), {{2, fin(3)}}); }
/// n_2 = inf, n_3 = 1, every other exponent 0.
inline GroupDescriptor dyadic_third() {
  return rational_descriptor(fin(0), {{2, inf()}, {3, fin(1)}});
}
/// n_5 = 2, every other exponent inf.
inline GroupDescriptor five_squared() { return rational_descriptor(inf(), {{5, fin(2)}}); }

inline SymbolRef sqrt2_minus_one() {
  static const SymbolRef alpha =
      IrrationalSymbol::make("alpha", SqrtEnclosure{2, Rational(-1)});
  return alpha;
}

/// (Z + alpha Z) n [0, 1] with alpha = sqrt(2) - 1.
inline GroupDescriptor z_alpha() {
  return GroupDescriptor(RationalGroup::integers(),
                         {IrrationalComponent{sqrt2_minus_one(), RationalGroup::integers()}});
}

inline ExactValue q(long long num, long long den = 1) {
  return ExactValue(Rational(num, den));
}

inline ExactValue alpha(long long num = 1, long long den = 1) {
  return ExactValue::symbol(sqrt2_minus_one(), Rational(num, den));
}

}  // namespace cantor::testing
