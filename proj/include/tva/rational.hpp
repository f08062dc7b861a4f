#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace tva {

/// Exact rational scalar. GMP keeps every value in canonical form
/// (reduced, positive denominator) after each arithmetic operation.
using Rational = mpq_class;

/// Parses "p", "-p", "p/q" or "-p/q". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text ("p" when the denominator is 1).
std::string to_string(const Rational& q);

/// Generalized binomial coefficient C(n, i) = n(n-1)...(n-i+1)/i! for any
/// integer n and i >= 0; zero for i < 0.
const mpz_class& binomial(long n, long i);

/// (-1)^e for any integer e.
constexpr int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace tva
