#pragma once

#include <gmpxx.h>

#include <string>

namespace matchfree {

using Integer = mpz_class;
using Rational = mpq_class;

/// Binomial coefficient C(n, k); zero when k < 0 or k > n.
Integer binom(long n, long k);

inline Rational binom_q(long n, long k) { return Rational(binom(n, k)); }

/// Canonical "p/q" form; integers are written as "p/1".
std::string to_string(const Rational& r);

/// Parses "p/q" or "p"; throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

inline Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace matchfree
