#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace ietlab {

// All lengths, measures and defects are exact rationals; nothing in the
// library ever rounds. GMP supplies the arithmetic, canonical form
// (denominator > 0, gcd(|num|, den) = 1) is maintained by mpq_class.
using Int = mpz_class;
using Rational = mpq_class;

// Parses "p/q" or a bare integer "p". Throws ParseError on malformed input
// or zero denominator.
Rational parse_rational(const std::string& text);

// Serializes with an explicit denominator, "p/q" even when q == 1, so that
// persisted values are unambiguous and round-trip exactly.
std::string format_rational(const Rational& x);

// Comma-separated rationals, e.g. "1/3,2/3".
std::vector<Rational> parse_rational_list(const std::string& text);

inline Rational rat(long num, long den = 1) { return Rational(num, den); }

// Largest integer <= x.
Int floor_int(const Rational& x);

// x - floor(x), in [0, 1).
Rational frac_part(const Rational& x);

// Distance from x to the nearest integer, in [0, 1/2].
Rational circle_norm(const Rational& x);

double to_double(const Rational& x);

}  // namespace ietlab
