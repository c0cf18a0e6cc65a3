// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdlseq/model.hpp"
#include "mdlseq/rational.hpp"

namespace mdlseq {

// Deterministic rule applied to the within-tolerance tie set of the MAP
// search. weight-then-index is the default (larger weight wins, then lower
// index). alternating cycles through the tie set by node depth and exists
// to reproduce oscillating hybrid predictions on ambiguous classes.
enum class TieBreak { WeightThenIndex, Index, Alternating };

TieBreak parse_tie_break(const std::string& name);
std::string format_tie_break(TieBreak tb);

struct ClassEntry {
  std::string name;
  Model model;
  Rational weight;      // exact, > 0
  double log_weight;    // cached ln(weight)
};

// A finite weighted class of semimeasures. Indices are stable (file order
// for parsed configs) because tie-breaking depends on them. Immutable after
// construction.
class WeightedClass {
 public:
  // Validates: nonempty, weights > 0 with exact sum <= 1, one common
  // alphabet, and (when designated) a true model flagged as a measure.
  WeightedClass(Alphabet alphabet, std::vector<ClassEntry> entries,
                std::optional<std::size_t> true_index,
                TieBreak tie_break = TieBreak::WeightThenIndex);

  std::size_t size() const { return entries_.size(); }
  const ClassEntry& entry(std::size_t i) const { return entries_[i]; }
  const Alphabet& alphabet() const { return alphabet_; }
  TieBreak tie_break() const { return tie_break_; }

  std::optional<std::size_t> true_index() const { return true_index_; }
  // Throws ValidationError when no true model is designated.
  std::size_t require_true_index() const;
  const Model& true_model() const;
  const Rational& true_weight() const;

  std::optional<std::size_t> index_of(const std::string& name) const;

 private:
  Alphabet alphabet_;
  std::vector<ClassEntry> entries_;
  std::optional<std::size_t> true_index_;
  TieBreak tie_break_;
};

}  // namespace mdlseq
