// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/weighted_class.hpp"

#include "mdlseq/errors.hpp"

namespace mdlseq {

TieBreak parse_tie_break(const std::string& name) {
  if (name == "weight-then-index") return TieBreak::WeightThenIndex;
  if (name == "index") return TieBreak::Index;
  if (name == "alternating") return TieBreak::Alternating;
  throw ValidationError("unknown tie-break strategy '" + name + "'");
}

std::string format_tie_break(TieBreak tb) {
  switch (tb) {
    case TieBreak::WeightThenIndex: return "weight-then-index";
    case TieBreak::Index: return "index";
    case TieBreak::Alternating: return "alternating";
  }
  return "weight-then-index";
}

WeightedClass::WeightedClass(Alphabet alphabet, std::vector<ClassEntry> entries,
                             std::optional<std::size_t> true_index,
                             TieBreak tie_break)
    : alphabet_(alphabet),
      entries_(std::move(entries)),
      true_index_(true_index),
      tie_break_(tie_break) {
  if (entries_.empty()) throw ValidationError("class must contain a model");
  Rational weight_sum = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ClassEntry& e = entries_[i];
    if (e.model.alphabet() != alphabet_) {
      throw ValidationError("model '" + e.name +
                            "' uses a different alphabet than the class");
    }
    if (e.weight <= 0) {
      throw ValidationError("model '" + e.name + "' has non-positive weight " +
                            format_rational(e.weight));
    }
    weight_sum += e.weight;
  }
  if (weight_sum > 1) {
    throw ValidationError("weights sum to " + format_rational(weight_sum) +
                          " > 1");
  }
  if (true_index_) {
    if (*true_index_ >= entries_.size()) {
      throw ValidationError("true-model index out of range");
    }
    if (!entries_[*true_index_].model.is_measure()) {
      throw ValidationError("true model '" + entries_[*true_index_].name +
                            "' must be a measure");
    }
  }
}

std::size_t WeightedClass::require_true_index() const {
  if (!true_index_) throw ValidationError("class designates no true model");
  return *true_index_;
}

const Model& WeightedClass::true_model() const {
  return entries_[require_true_index()].model;
}

const Rational& WeightedClass::true_weight() const {
  return entries_[require_true_index()].weight;
}

std::optional<std::size_t> WeightedClass::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

}  // namespace mdlseq
