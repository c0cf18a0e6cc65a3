// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mdlseq/metrics.hpp"
#include "mdlseq/predictors.hpp"
#include "mdlseq/weighted_class.hpp"

namespace mdlseq {

enum class Engine { ExactTree, ExactCounts, MonteCarlo };

Engine parse_engine(const std::string& name);
std::string format_engine(Engine engine);

// Enumeration guard: surviving (mu-positive) nodes per traversal.
inline constexpr std::size_t kDefaultNodeBudget = std::size_t{1} << 22;

// Expected per-step error series E[metric at step t], t = 1..n, under the
// class's designated true model.
struct ErrorSeries {
  std::vector<double> per_step;    // +inf entries are flagged and excluded
  std::vector<double> cumulative;  // running sum of the finite per-step part
  std::optional<double> bound;     // attached when a theorem row matches
  std::string bound_id;
  Engine engine = Engine::ExactTree;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  std::vector<double> ci_halfwidth;        // per-step 99% CI (monte-carlo)
  double cumulative_ci_halfwidth = 0.0;    // 99% CI of cumulative[n]
  bool has_infinite = false;

  double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  bool bound_holds() const;  // every cumulative <= bound (true if no bound)
};

// E f(x_{1:n}) = sum_{|x|=n} mu(x) f(x) by prefix-tree enumeration with
// mu-null pruning. Throws BudgetError when surviving nodes exceed the
// budget (advising the counts or monte-carlo engine).
double exact_expectation(const std::function<double(const SymbolString&)>& f,
                         const Model& mu, int n,
                         std::size_t node_budget = kDefaultNodeBudget);

// Same expectation for a count-determined f: E f(counts of x_{1:n}) for an
// i.i.d. measure mu, by dynamic programming over count vectors.
double counts_expectation(
    const std::function<double(std::span<const std::int64_t>)>& f,
    const Model& mu, int n, std::size_t state_budget = kDefaultNodeBudget);

struct McEstimate {
  double mean = 0.0;
  double ci_halfwidth = 0.0;  // 99% normal-approximation CI
};

// Empirical mean of f over `samples` sequences drawn from mu; bit-identical
// for a fixed seed.
McEstimate mc_expectation(const std::function<double(const SymbolString&)>& f,
                          const Model& mu, int n, std::int64_t samples,
                          std::uint64_t seed);

struct SeriesRequest {
  PredictionMode mode = PredictionMode::Mixture;
  bool normalized = false;
  ErrorMetric metric = ErrorMetric::Squared;
  int horizon = 1;
  Engine engine = Engine::ExactTree;
  TieBreak tie_break = TieBreak::WeightThenIndex;
  std::int64_t samples = 100000;  // monte-carlo only
  std::uint64_t seed = 1;         // monte-carlo only
  std::size_t node_budget = kDefaultNodeBudget;
};

// The central evaluation: per-step expected metric of the requested
// predictor against the class's true model, with the matching theorem bound
// attached. The class must designate a true model and it must be a measure.
ErrorSeries error_series(const WeightedClass& cls, const SeriesRequest& req);

// [0,1) from the raw engine output; uniform_real_distribution is
// implementation-defined, this mapping is not.
double uniform01(std::mt19937_64& rng);

// Draws one length-n sequence from the measure mu.
SymbolString sample_sequence(const Model& mu, int n, std::mt19937_64& rng);

}  // namespace mdlseq
