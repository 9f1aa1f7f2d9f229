#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace lemnis {

// Arbitrary-precision rational, always kept in lowest terms with a positive
// denominator (gmp canonical form).
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

// Parses "p/q", "p", or a plain decimal such as "-0.25" (exact).
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

// Exact conversion of a finite double.
Rational rational_from_double(double value);

double to_double(const Rational& value);

std::vector<double> to_doubles(const RationalVector& values);

// Least common multiple of the denominators.
mpz_class common_denominator(const RationalVector& values);

}  // namespace lemnis
