// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "mdlseq/metrics.hpp"
#include "mdlseq/predictors.hpp"
#include "mdlseq/rational.hpp"

namespace mdlseq {

// Convergence-bound catalog, keyed by the identifiers used throughout the
// experiment registry. All bounds are functions of the true model's weight
// w (0 < w <= 1):
//   thm1             ln(1/w)         mixture, squared
//   thm3             1/w + ln(1/w)   dynamic normalized, squared
//   thm4i            2/w             dynamic raw, abs-log-sum
//   thm4ii           2/w             dynamic raw, abs-sum
//   thm5             1/w             static raw, abs-sum
//   cor6-dyn-norm    2/w             dynamic normalized, squared
//   cor6-dyn         8/w             dynamic raw, squared
//   cor6-static      21/w            static raw, squared
//   cor6-static-norm 32/w            static normalized, squared
// Throws ValidationError for unknown identifiers or w outside (0,1].
double bound_for(const std::string& theorem, const Rational& w_mu);

// The bound identifier attached to an error series with this mode/flag/
// metric combination, if any. Where two identifiers apply (dynamic
// normalized squared), the tighter thm3 is returned.
std::optional<std::string> bound_id_for(PredictionMode mode, bool normalized,
                                        ErrorMetric metric);

}  // namespace mdlseq
