// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/metrics.hpp"

#include <cmath>
#include <limits>

#include "mdlseq/errors.hpp"

namespace mdlseq {

ErrorMetric parse_metric(const std::string& name) {
  if (name == "squared") return ErrorMetric::Squared;
  if (name == "abs-sum") return ErrorMetric::AbsSum;
  if (name == "abs-log-sum") return ErrorMetric::AbsLogSum;
  if (name == "kl") return ErrorMetric::Kl;
  throw ValidationError("unknown metric '" + name + "'");
}

std::string format_metric(ErrorMetric metric) {
  switch (metric) {
    case ErrorMetric::Squared: return "squared";
    case ErrorMetric::AbsSum: return "abs-sum";
    case ErrorMetric::AbsLogSum: return "abs-log-sum";
    case ErrorMetric::Kl: return "kl";
  }
  return "squared";
}

double metric_value(ErrorMetric metric, std::span<const double> mu_cond,
                    std::span<const double> phi) {
  switch (metric) {
    case ErrorMetric::Squared: {
      double s = 0.0;
      for (std::size_t a = 0; a < phi.size(); ++a) {
        const double d = mu_cond[a] - phi[a];
        s += d * d;
      }
      return s;
    }
    case ErrorMetric::AbsSum: {
      double s = 0.0;
      for (double v : phi) s += v;
      return std::abs(1.0 - s);
    }
    case ErrorMetric::AbsLogSum: {
      double s = 0.0;
      for (double v : phi) s += v;
      if (s <= 0.0) return std::numeric_limits<double>::infinity();
      return std::abs(std::log(s));
    }
    case ErrorMetric::Kl: {
      double d = 0.0;
      for (std::size_t a = 0; a < phi.size(); ++a) {
        if (mu_cond[a] == 0.0) continue;
        if (phi[a] <= 0.0) return std::numeric_limits<double>::infinity();
        d += mu_cond[a] * std::log(mu_cond[a] / phi[a]);
      }
      return d;
    }
  }
  return 0.0;
}

}  // namespace mdlseq
