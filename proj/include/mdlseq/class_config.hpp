// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "mdlseq/weighted_class.hpp"

namespace mdlseq {

// Class config files are stanza-structured key-value text:
//
//   alphabet = 2
//   true = mu
//   tie-break = weight-then-index
//
//   [model lambda]
//   kind = iid
//   theta = 1/2 1/2
//   weight = 2/3
//
//   [model nu]
//   kind = factorizable
//   step = 0 1            # repeatable, one per leading step
//   tail = 1/2 1/2        # or: generator = oscillating-mu
//   weight = 1/3
//
// Other kinds: deterministic (prefix =, period =), tabular (node = <path>
// <value>, "." for the empty string). A [generate] stanza with
// family = example-lowerbound and n = N expands to the N-model lower-bound
// class (nu1..nu{N-1} deterministic on 1^{i-1}0^inf plus mu on 1^inf, equal
// weights 1/N).
//
// Rationals must be exact "p/q" strings; floats are rejected in weights so
// tie detection stays exact. Model order in the file fixes the indices.
WeightedClass parse_class_config(const std::string& text);

WeightedClass load_class_config(const std::string& path);

// Canonical rendering; parse_class_config(render_class_config(c)) yields an
// identical class.
std::string render_class_config(const WeightedClass& cls);

}  // namespace mdlseq
