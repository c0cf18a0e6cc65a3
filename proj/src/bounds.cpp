// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/bounds.hpp"

#include <cmath>

#include "mdlseq/errors.hpp"

namespace mdlseq {

double bound_for(const std::string& theorem, const Rational& w_mu) {
  if (w_mu <= 0 || w_mu > 1) {
    throw ValidationError("true-model weight must be in (0,1], got " +
                          format_rational(w_mu));
  }
  const double inv_w = to_double(Rational(1) / w_mu);
  const double log_inv_w = -log_rational(w_mu);
  if (theorem == "thm1") return log_inv_w;
  if (theorem == "thm3") return inv_w + log_inv_w;
  if (theorem == "thm4i") return 2.0 * inv_w;
  if (theorem == "thm4ii") return 2.0 * inv_w;
  if (theorem == "thm5") return inv_w;
  if (theorem == "cor6-dyn-norm") return 2.0 * inv_w;
  if (theorem == "cor6-dyn") return 8.0 * inv_w;
  if (theorem == "cor6-static") return 21.0 * inv_w;
  if (theorem == "cor6-static-norm") return 32.0 * inv_w;
  throw ValidationError("unknown bound identifier '" + theorem + "'");
}

std::optional<std::string> bound_id_for(PredictionMode mode, bool normalized,
                                        ErrorMetric metric) {
  switch (metric) {
    case ErrorMetric::Squared:
      if (mode == PredictionMode::Mixture && !normalized) return "thm1";
      if (mode == PredictionMode::Dynamic) {
        return normalized ? std::optional<std::string>("thm3")
                          : std::optional<std::string>("cor6-dyn");
      }
      if (mode == PredictionMode::Static) {
        return normalized ? std::optional<std::string>("cor6-static-norm")
                          : std::optional<std::string>("cor6-static");
      }
      return std::nullopt;
    case ErrorMetric::AbsSum:
      if (mode == PredictionMode::Dynamic && !normalized) return "thm4ii";
      if (mode == PredictionMode::Static && !normalized) return "thm5";
      return std::nullopt;
    case ErrorMetric::AbsLogSum:
      if (mode == PredictionMode::Dynamic && !normalized) return "thm4i";
      return std::nullopt;
    case ErrorMetric::Kl:
      // reported, never bound-checked (may be infinite under static MDL)
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace mdlseq
