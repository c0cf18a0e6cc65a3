// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mdlseq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameters, malformed config, out-of-alphabet symbols, unknown ids.
struct ValidationError : Error {
  using Error::Error;
};

// Operation requested on a model kind that cannot support it.
struct UnsupportedError : ValidationError {
  using ValidationError::ValidationError;
};

// Zero denominator / sequence outside the support of the relevant value.
struct OffSupportError : Error {
  using Error::Error;
};

// Enumeration would exceed the engine node budget.
struct BudgetError : Error {
  using Error::Error;
};

}  // namespace mdlseq
