// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdlseq/engines.hpp"
#include "mdlseq/weighted_class.hpp"

namespace mdlseq {

// Exit statuses shared by run_experiment and the CLI.
inline constexpr int kStatusOk = 0;
inline constexpr int kStatusValidation = 1;
inline constexpr int kStatusBudget = 2;
inline constexpr int kStatusBoundViolation = 3;

struct ExperimentResult {
  std::string csv;
  int status = kStatusOk;
};

// An ad-hoc error-series experiment over a caller-supplied class. Emits CSV
// with header experiment,t,metric,per_step,cumulative,bound,engine,seed
// (bound empty when no theorem row applies) and returns status 0 when every
// cumulative value respects the attached bound.
ExperimentResult run_series_experiment(const std::string& id,
                                       const WeightedClass& cls,
                                       const SeriesRequest& req);

// Registry of named experiments; each builds its class internally. Series
// entries use the CSV schema above; stabilize-* and normalizer-* entries
// use their own documented schemas.
std::vector<std::string> registry_ids();
ExperimentResult run_registry_experiment(const std::string& id);

// Invariant scan used by the `check` subcommand: semimeasure deficiency,
// conditional mass, the ordering chain, and both two-part semimeasure
// inequalities on every node to the given depth.
struct CheckReport {
  std::size_t nodes = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
CheckReport run_class_check(const WeightedClass& cls, int depth,
                            std::size_t node_budget = kDefaultNodeBudget);

// Example 6's non-stabilizing pair with the weight ratio derived from the
// estimated limit of nu(1^t)/mu(1^t) (dyadic rational, denominator 2^61).
WeightedClass make_oscillating_pair_class();

// The N-model lower-bound class of deterministic measures, equal weights.
WeightedClass make_lower_bound_class(int n_models);

// The 5-element Bernoulli class theta in {0, 1/4, 1/2, 3/4, 1}, equal
// weights, true model theta = 1/2.
WeightedClass make_bernoulli5_class();

// The two-measure ambiguous-tie class (uniform lambda w=2/3 and the
// first-symbol-1 measure nu w=1/3).
WeightedClass make_ambiguous_tie_class();

// Iid pair where the hybrid prediction exceeds 1 at x = "0".
WeightedClass make_hybrid_excess_class();

}  // namespace mdlseq
