// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "mdlseq/alphabet.hpp"
#include "mdlseq/rational.hpp"

namespace mdlseq {

// A Model is a semimeasure nu on finite strings: nu(eps) <= 1 and
// nu(x) >= sum_a nu(xa), evaluated in the natural-log domain with -infinity
// as the explicit zero. Every model also carries an exact-rational
// evaluation path used by the validation oracle (cheap only to modest
// depths; the log path is the workhorse).
//
// Models are immutable after construction and cheap to copy (shared state).

enum class ModelKind { Iid, Deterministic, Factorizable, Tabular };

// Closed-form per-step generators. Both are binary measures whose
// per-step probability of symbol 1 approaches one; their ratio along 1^inf
// converges while oscillating around the limit.
//   OscillatingMu:  P(1) at step i is 1 - 2^-(2*ceil(i/2))
//   OscillatingNu:  P(1) at step i is 1 - 2^-(2*ceil((i+1)/2) - 1)
enum class StepGenerator { None, OscillatingMu, OscillatingNu };

struct IidSpec {
  std::vector<Rational> theta;  // theta[a] = P(symbol a), exact, sums to 1
};

struct DeterministicSpec {
  SymbolString prefix;  // may be empty
  SymbolString period;  // nonempty; sequence = prefix then period repeated
};

struct FactorizableSpec {
  // Explicit leading per-step rows (row[a] = P_i(symbol a), sum <= 1;
  // rows summing to exactly 1 keep the model a measure).
  std::vector<std::vector<Rational>> steps;
  // Constant distribution for all steps beyond the table. Required unless a
  // generator is named.
  std::vector<Rational> tail;
  StepGenerator generator = StepGenerator::None;
};

struct TabularSpec {
  // Explicit node values. Unlisted nodes are 0, except the root which
  // defaults to 1. Every node must satisfy value(x) >= sum_a value(xa).
  std::vector<std::pair<SymbolString, Rational>> nodes;
};

using ModelSpec = std::variant<IidSpec, DeterministicSpec, FactorizableSpec, TabularSpec>;

class Model {
 public:
  ModelKind kind() const;
  const Alphabet& alphabet() const;

  // True iff equality holds in both semimeasure inequalities by
  // construction (iid, deterministic, factorizable with measure rows).
  // Tabular models are never flagged as measures.
  bool is_measure() const;

  // The validated construction spec (parameter introspection / rendering).
  const ModelSpec& spec() const;

  double log_prob(std::span<const Symbol> x) const;
  Rational exact_prob(std::span<const Symbol> x) const;

  // Per-step symbol distribution for kinds with product structure
  // (iid/deterministic/factorizable); nullopt for tabular. `step` is 1-based.
  std::optional<std::vector<Rational>> step_distribution(int step) const;

  // Incremental evaluation along a string; cheap to copy, so tree engines
  // fork one per branch.
  class Walker {
   public:
    void advance(Symbol a);
    double log_value() const { return logv_; }
    bool alive() const;

   private:
    friend class Model;
    const void* impl_ = nullptr;
    const void* node_ = nullptr;  // tabular position
    double logv_ = 0.0;
    int pos_ = 0;
  };
  Walker walker() const;

  class ExactWalker {
   public:
    void advance(Symbol a);
    const Rational& value() const { return value_; }

   private:
    friend class Model;
    const void* impl_ = nullptr;
    const void* node_ = nullptr;
    Rational value_ = 1;
    int pos_ = 0;
  };
  ExactWalker exact_walker() const;

 private:
  friend Model build_model(const Alphabet&, const ModelSpec&);
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Validates the spec and constructs the model; throws ValidationError
// naming the offending field.
Model build_model(const Alphabet& alphabet, const ModelSpec& spec);

// nu(x) as a double in [0,1]; log-domain evaluation under the hood.
double probability(const Model& model, std::span<const Symbol> x);

// nu(xa)/nu(x) if nu(x) > 0, else 0 (the defined convention, not an error).
double conditional(const Model& model, Symbol a, std::span<const Symbol> x);

// value(x) - sum_a value(xa); >= 0 for semimeasures, 0 for measures.
double deficiency(const Model& model, std::span<const Symbol> x);

// Same, for an arbitrary string function (e.g. the mixture/two-part
// difference).
double deficiency(const std::function<double(const SymbolString&)>& value,
                  const SymbolString& x, const Alphabet& alphabet);

struct StochasticityReport {
  bool uniformly_stochastic = false;
  // Smallest nonzero per-step probability seen within the horizon. The scan
  // certifies a finite horizon only; the property itself quantifies over
  // all steps.
  double min_positive = 1.0;
  // First violating (step, symbol) when not uniformly stochastic.
  std::optional<std::pair<int, Symbol>> witness;
};

// Checks P_i(a) > 0 => P_i(a) >= delta for steps 1..horizon. Requires a
// factorized view; throws UnsupportedError for tabular models.
StochasticityReport is_uniformly_stochastic(const Model& model, double delta,
                                            int horizon);

// sum_i p_i ln(p_i/q_i) with 0 ln(0/q) = 0 and p_i > 0, q_i = 0 -> +infinity.
// Requires equal lengths and p summing to 1.
double kl_divergence(std::span<const double> p, std::span<const double> q);

}  // namespace mdlseq
