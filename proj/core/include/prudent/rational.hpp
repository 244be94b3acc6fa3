#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace prudent {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q", "p" or a finite decimal such as "0.25" into an exact
/// rational. Throws ContractError on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" rendering (always with a denominator, "0/1" for zero).
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// base^exp for a nonnegative integer exponent.
Rational pow(const Rational& base, unsigned exp);

}  // namespace prudent
