// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mdlseq/weighted_class.hpp"

namespace mdlseq {

// Relative tolerance for tie detection on the float path: candidates whose
// log weighted value is within this of the maximum form the tie set.
inline constexpr double kTieLogTolerance = 1e-12;

// Stable log(sum exp(v_i)); -infinity for an empty/all-zero input. The
// result is never below the largest term.
double log_sum_exp(std::span<const double> log_values);

enum class PredictionMode { Mixture, Dynamic, Static, Hybrid };

PredictionMode parse_mode(const std::string& name);
std::string format_mode(PredictionMode mode);

// Per-model unweighted log values at one node of the prefix tree. Engines
// fill these incrementally; predict() fills them by walking from the root.
struct NodeEval {
  std::vector<double> log_model;  // ln nu_i(x), -inf for zero
};

// Incremental per-class evaluation state along a string.
class ClassWalkers {
 public:
  explicit ClassWalkers(const WeightedClass& cls);
  void advance(Symbol a);
  ClassWalkers child(Symbol a) const;
  int depth() const { return depth_; }
  const WeightedClass& cls() const { return *cls_; }
  NodeEval node_eval() const;
  double log_model_value(std::size_t i) const;
  double log_weighted_value(std::size_t i) const;

 private:
  const WeightedClass* cls_;
  std::vector<Model::Walker> walkers_;
  int depth_ = 0;
};

// --- MAP / two-part MDL ---

// Indices within kTieLogTolerance of max_i [ln w_i + ln nu_i(x)]; the whole
// class when every weighted value is zero.
std::vector<std::size_t> tie_set(const WeightedClass& cls,
                                 std::span<const double> log_model);

// Deterministic winner of a tie set at the given node depth.
std::size_t pick_from_tie_set(const WeightedClass& cls,
                              std::span<const std::size_t> ties, TieBreak tb,
                              int depth);

// argmax_i w_i nu_i(x) with deterministic tie-breaking.
std::size_t map_estimator(const WeightedClass& cls, std::span<const Symbol> x,
                          TieBreak tb);
std::size_t map_from_values(const WeightedClass& cls, const NodeEval& node,
                            int depth, TieBreak tb);

// Bayes mixture value xi(x) = sum_i w_i nu_i(x), via stable log-sum-exp.
double mixture(const WeightedClass& cls, std::span<const Symbol> x);
double log_mixture_from_values(const WeightedClass& cls, const NodeEval& node);

// Two-part MDL value rho(x) = max_i w_i nu_i(x). With a basis string y the
// MAP search runs at y and the winner is evaluated at x (rho^y(x)); always
// <= mixture(x).
double two_part_value(const WeightedClass& cls, std::span<const Symbol> x,
                      TieBreak tb = TieBreak::WeightThenIndex);
double two_part_value(const WeightedClass& cls, std::span<const Symbol> x,
                      std::span<const Symbol> basis,
                      TieBreak tb = TieBreak::WeightThenIndex);

// --- prediction ---

struct Prediction {
  PredictionMode mode{};
  std::vector<double> raw;         // one entry per symbol
  std::vector<double> normalized;  // raw / sum(raw); zeros when the sum is 0
};

// Raw next-symbol vector per mode:
//   mixture: xi(xa)/xi(x)
//   dynamic: rho(xa)/rho(x)              (fresh MAP search per extension)
//   static:  nu^x(xa)/nu^x(x)            (one MAP search at x)
//   hybrid:  nu^{xa}(xa)/nu^x(x)         (dynamic with the weights dropped)
// Throws OffSupportError naming the mode when the denominator is zero.
Prediction predict(const WeightedClass& cls, std::span<const Symbol> x,
                   PredictionMode mode, TieBreak tb);

// Same semantics from precomputed node values; children[a] must hold the
// values at xa. `depth` is the length of x (drives alternating tie-break).
Prediction predict_from_values(const WeightedClass& cls, const NodeEval& node,
                               std::span<const NodeEval> children, int depth,
                               PredictionMode mode, TieBreak tb);

// --- normalization ---

struct NormalizerTrace {
  std::vector<double> factors;  // factor_t = sum_a v(x_{<t}a) / v(x_{<t})
  double product = 1.0;
};

// Per-step normalizer factors along x for t = 1..len(x)+1 and their product
// (the Solomonoff normalizer). Throws OffSupportError when a prefix value
// is zero.
NormalizerTrace normalizer_trace(
    const std::function<double(const SymbolString&)>& value,
    std::span<const Symbol> x, const Alphabet& alphabet);

// --- Kraft correspondence ---

// ceil(-lb w) for 0 < w <= 1, computed exactly; inverse returns the exact
// dyadic 2^{-bits}.
int weight_codelength(const Rational& w);
Rational codelength_weight(int bits);

}  // namespace mdlseq
