// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "mdlseq/engines.hpp"
#include "mdlseq/weighted_class.hpp"

namespace mdlseq {

// Where a trajectory comes from: an explicit (true-model-supported) sequence
// or sampling from the class's true model.
struct SequenceSource {
  static SequenceSource explicit_sequence(SymbolString x);
  static SequenceSource sampled(std::uint64_t seed);

  // Materializes the first `horizon` symbols.
  SymbolString realize(const WeightedClass& cls, int horizon) const;

  std::variant<SymbolString, std::uint64_t> source;
};

struct NormalizerConvergence {
  std::vector<double> factors;           // t = 1..horizon
  std::vector<double> partial_products;  // running products
  // Last t with |factor - 1| > 1e-9, if any.
  std::optional<int> last_nonunit_step;
};

// Per-step factors of the two-part value's normalizer N_rho along the
// source trajectory. Throws OffSupportError when rho vanishes on a prefix.
NormalizerConvergence normalizer_convergence(const WeightedClass& cls,
                                             const SequenceSource& source,
                                             int horizon);

struct StabilizationReport {
  // map_indices[t-1] is the MAP index given the length t-1 prefix, t = 1..T.
  std::vector<std::size_t> map_indices;
  // Times t >= 2 where the MAP index differs from time t-1.
  std::vector<int> switch_times;
  std::size_t final_index = 0;
  // Smallest t with no later switch inside the horizon (the last switch
  // time, or 1 when the index never changed).
  std::optional<int> stabilized_by;
};

StabilizationReport stabilization_report(const WeightedClass& cls,
                                         const SequenceSource& source,
                                         int horizon, TieBreak tb);

}  // namespace mdlseq
