// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "mdlseq/errors.hpp"

namespace mdlseq {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

// ln of a positive big integer, via the top bits when it exceeds double
// range.
double log_big(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  const unsigned bits = boost::multiprecision::msb(x);
  if (bits < 900) {
    return std::log(x.convert_to<double>());
  }
  const unsigned shift = bits - 900;
  const BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den)) {
    throw ValidationError("malformed rational '" + text +
                          "' (expected integer or p/q)");
  }
  BigInt p(num), q(den);
  if (q == 0) throw ValidationError("malformed rational '" + text + "' (zero denominator)");
  return Rational(p, q);
}

std::string format_rational(const Rational& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << '/' << denominator(r);
  return out.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

double log_rational(const Rational& r) {
  if (r == 0) return -std::numeric_limits<double>::infinity();
  return log_big(numerator(r)) - log_big(denominator(r));
}

Rational dyadic_pow2(int bits) {
  if (bits < 0) throw ValidationError("dyadic_pow2: negative bit count");
  return Rational(BigInt(1), BigInt(1) << bits);
}

}  // namespace mdlseq
