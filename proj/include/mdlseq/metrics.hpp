// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

namespace mdlseq {

// Per-step prediction error metrics.
//   Squared:   sum_a (mu(a|x) - phi(a|x))^2
//   AbsSum:    |1 - sum_a phi(a|x)|
//   AbsLogSum: |ln sum_a phi(a|x)|      (+inf when the sum is 0)
//   Kl:        sum_a mu(a|x) ln(mu(a|x)/phi(a|x))   (+inf on zero phi mass)
enum class ErrorMetric { Squared, AbsSum, AbsLogSum, Kl };

ErrorMetric parse_metric(const std::string& name);
std::string format_metric(ErrorMetric metric);

// mu_cond are the true conditionals (ignored by AbsSum/AbsLogSum); phi is
// the prediction vector the metric is evaluated on (raw or normalized,
// caller's choice). May return +infinity.
double metric_value(ErrorMetric metric, std::span<const double> mu_cond,
                    std::span<const double> phi);

}  // namespace mdlseq
