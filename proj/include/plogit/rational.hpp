#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace plogit {

/// Arbitrary-precision rational. GMP keeps every arithmetic result in
/// canonical form (positive denominator, coprime parts).
using Rational = mpq_class;
using BigInt = mpz_class;

/// Canonicalized num/den. Throws std::invalid_argument when den == 0.
Rational make_rational(long num, long den = 1);
Rational make_rational(const BigInt& num, const BigInt& den);

/// Serialized as "numerator/denominator", always with an explicit
/// denominator ("3/1", "-3/7").
std::string to_string(const Rational& q);

/// Accepts "p/q" or a bare integer "p". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

Rational abs(const Rational& q);

/// Integer power, exponent >= 0.
Rational pow(const Rational& base, unsigned exponent);

double to_double(const Rational& q);

}  // namespace plogit
