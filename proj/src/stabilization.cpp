// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/stabilization.hpp"

#include <cmath>
#include <limits>

#include "mdlseq/errors.hpp"
#include "mdlseq/predictors.hpp"

namespace mdlseq {

SequenceSource SequenceSource::explicit_sequence(SymbolString x) {
  SequenceSource s;
  s.source = std::move(x);
  return s;
}

SequenceSource SequenceSource::sampled(std::uint64_t seed) {
  SequenceSource s;
  s.source = seed;
  return s;
}

SymbolString SequenceSource::realize(const WeightedClass& cls,
                                     int horizon) const {
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  if (const auto* x = std::get_if<SymbolString>(&source)) {
    if (x->size() < static_cast<std::size_t>(horizon)) {
      throw ValidationError("explicit sequence shorter than the horizon");
    }
    check_symbols(*x, cls.alphabet());
    return SymbolString(x->begin(), x->begin() + horizon);
  }
  std::mt19937_64 rng(std::get<std::uint64_t>(source));
  return sample_sequence(cls.true_model(), horizon, rng);
}

NormalizerConvergence normalizer_convergence(const WeightedClass& cls,
                                             const SequenceSource& source,
                                             int horizon) {
  const SymbolString x = source.realize(cls, horizon);
  NormalizerConvergence out;
  ClassWalkers w(cls);
  double product = 1.0;
  for (int t = 1; t <= horizon; ++t) {
    // factor_t uses the length t-1 prefix
    double denom = -std::numeric_limits<double>::infinity();
    const NodeEval node = w.node_eval();
    for (std::size_t i = 0; i < cls.size(); ++i) {
      denom = std::max(denom, cls.entry(i).log_weight + node.log_model[i]);
    }
    if (denom == -std::numeric_limits<double>::infinity()) {
      throw OffSupportError("normalizer: two-part value vanished at step " +
                            std::to_string(t));
    }
    double child_sum = 0.0;
    for (Symbol a = 0; a < cls.alphabet().size; ++a) {
      const NodeEval child = w.child(a).node_eval();
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < cls.size(); ++i) {
        best = std::max(best, cls.entry(i).log_weight + child.log_model[i]);
      }
      child_sum += std::exp(best - denom);
    }
    out.factors.push_back(child_sum);
    product *= child_sum;
    out.partial_products.push_back(product);
    if (std::abs(child_sum - 1.0) > 1e-9) out.last_nonunit_step = t;
    w.advance(x[static_cast<std::size_t>(t - 1)]);
  }
  return out;
}

StabilizationReport stabilization_report(const WeightedClass& cls,
                                         const SequenceSource& source,
                                         int horizon, TieBreak tb) {
  const SymbolString x = source.realize(cls, horizon);
  StabilizationReport report;
  report.map_indices.reserve(static_cast<std::size_t>(horizon));
  ClassWalkers w(cls);
  for (int t = 1; t <= horizon; ++t) {
    const std::size_t idx = map_from_values(cls, w.node_eval(), t - 1, tb);
    if (t >= 2 && idx != report.map_indices.back()) {
      report.switch_times.push_back(t);
    }
    report.map_indices.push_back(idx);
    if (t < horizon) w.advance(x[static_cast<std::size_t>(t - 1)]);
  }
  report.final_index = report.map_indices.back();
  report.stabilized_by =
      report.switch_times.empty() ? 1 : report.switch_times.back();
  return report;
}

}  // namespace mdlseq
