#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace jnlab {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;

/// Builds num/den and canonicalizes it.
Rational make_rational(long num, unsigned long den = 1);

/// 2^-k exactly.
Rational pow2_inv(unsigned k);

/// Serializes as "p/q" (the denominator is always written, "0/1" for zero).
std::string to_string(const Rational& q);

/// Accepts "p/q" or a bare integer "p"; throws Error(kSchema) otherwise.
Rational parse_rational(std::string_view text);

/// Decimal rendering for display columns only.
std::string to_decimal(const Rational& q, int digits = 12);

}  // namespace jnlab
