// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/alphabet.hpp"

#include <string>

#include "mdlseq/errors.hpp"

namespace mdlseq {

Alphabet::Alphabet(int n) : size(n) {
  if (n < 2) {
    throw ValidationError("alphabet size must be >= 2, got " +
                          std::to_string(n));
  }
}

SymbolString parse_symbols(const std::string& digits, const Alphabet& alphabet) {
  SymbolString out;
  out.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw ValidationError(std::string("invalid symbol character '") + c + "'");
    }
    const Symbol a = c - '0';
    if (!alphabet.contains(a)) {
      throw ValidationError("symbol " + std::to_string(a) +
                            " out of alphabet of size " +
                            std::to_string(alphabet.size));
    }
    out.push_back(a);
  }
  return out;
}

std::string format_symbols(std::span<const Symbol> x) {
  std::string out;
  out.reserve(x.size());
  for (Symbol a : x) out += static_cast<char>('0' + a);
  return out;
}

void check_symbols(std::span<const Symbol> x, const Alphabet& alphabet) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!alphabet.contains(x[i])) {
      throw ValidationError("symbol " + std::to_string(x[i]) +
                            " at position " + std::to_string(i) +
                            " out of alphabet of size " +
                            std::to_string(alphabet.size));
    }
  }
}

}  // namespace mdlseq
