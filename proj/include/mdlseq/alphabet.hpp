// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

namespace mdlseq {

using Symbol = int;
using SymbolString = std::vector<Symbol>;

struct Alphabet {
  int size = 2;

  Alphabet() = default;
  explicit Alphabet(int n);  // throws ValidationError if n < 2

  bool contains(Symbol a) const { return a >= 0 && a < size; }
  bool operator==(const Alphabet&) const = default;
};

// "0110" -> {0,1,1,0}. Digits only, so alphabets above size 10 need the
// programmatic API. Empty string is the empty SymbolString.
SymbolString parse_symbols(const std::string& digits, const Alphabet& alphabet);

std::string format_symbols(std::span<const Symbol> x);

// Throws ValidationError naming the offending position/symbol.
void check_symbols(std::span<const Symbol> x, const Alphabet& alphabet);

}  // namespace mdlseq
