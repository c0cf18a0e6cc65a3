// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace mdlseq {

// Exact rational arithmetic backs model parameters, weights, and the oracle
// evaluation path. Arbitrary precision: products over long strings and
// mixture sums do not overflow.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q" or a plain integer "p". Throws ValidationError on malformed
// input or q == 0.
Rational parse_rational(const std::string& text);

// Canonical "p/q" (or "p" when the denominator is 1).
std::string format_rational(const Rational& r);

double to_double(const Rational& r);

// Natural log; -infinity for zero. Safe for rationals whose numerator or
// denominator exceeds double range.
double log_rational(const Rational& r);

// 2^{-bits} as an exact dyadic rational, bits >= 0.
Rational dyadic_pow2(int bits);

}  // namespace mdlseq
