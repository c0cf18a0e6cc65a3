// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mdlseq/errors.hpp"

namespace mdlseq {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(std::span<const double> log_values) {
  double m = kNegInf;
  for (double v : log_values) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : log_values) s += std::exp(v - m);
  return m + std::log(s);
}

PredictionMode parse_mode(const std::string& name) {
  if (name == "mixture") return PredictionMode::Mixture;
  if (name == "dynamic") return PredictionMode::Dynamic;
  if (name == "static") return PredictionMode::Static;
  if (name == "hybrid") return PredictionMode::Hybrid;
  throw ValidationError("unknown prediction mode '" + name + "'");
}

std::string format_mode(PredictionMode mode) {
  switch (mode) {
    case PredictionMode::Mixture: return "mixture";
    case PredictionMode::Dynamic: return "dynamic";
    case PredictionMode::Static: return "static";
    case PredictionMode::Hybrid: return "hybrid";
  }
  return "mixture";
}

// ---------------------------------------------------------------------------
// class walkers

ClassWalkers::ClassWalkers(const WeightedClass& cls) : cls_(&cls) {
  walkers_.reserve(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i) {
    walkers_.push_back(cls.entry(i).model.walker());
  }
}

void ClassWalkers::advance(Symbol a) {
  for (auto& w : walkers_) w.advance(a);
  ++depth_;
}

ClassWalkers ClassWalkers::child(Symbol a) const {
  ClassWalkers c = *this;
  c.advance(a);
  return c;
}

NodeEval ClassWalkers::node_eval() const {
  NodeEval e;
  e.log_model.resize(walkers_.size());
  for (std::size_t i = 0; i < walkers_.size(); ++i) {
    e.log_model[i] = walkers_[i].log_value();
  }
  return e;
}

double ClassWalkers::log_model_value(std::size_t i) const {
  return walkers_[i].log_value();
}

double ClassWalkers::log_weighted_value(std::size_t i) const {
  return cls_->entry(i).log_weight + walkers_[i].log_value();
}

// ---------------------------------------------------------------------------
// MAP search

std::vector<std::size_t> tie_set(const WeightedClass& cls,
                                 std::span<const double> log_model) {
  double best = kNegInf;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    best = std::max(best, cls.entry(i).log_weight + log_model[i]);
  }
  std::vector<std::size_t> ties;
  if (best == kNegInf) {
    // every weighted value is zero: the whole class ties
    ties.resize(cls.size());
    std::iota(ties.begin(), ties.end(), std::size_t{0});
    return ties;
  }
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const double v = cls.entry(i).log_weight + log_model[i];
    if (best - v <= kTieLogTolerance) ties.push_back(i);
  }
  return ties;
}

std::size_t pick_from_tie_set(const WeightedClass& cls,
                              std::span<const std::size_t> ties, TieBreak tb,
                              int depth) {
  if (ties.size() == 1) return ties[0];
  switch (tb) {
    case TieBreak::Index:
      return *std::min_element(ties.begin(), ties.end());
    case TieBreak::WeightThenIndex: {
      std::size_t best = ties[0];
      for (std::size_t i : ties.subspan(1)) {
        if (cls.entry(i).weight > cls.entry(best).weight) best = i;
      }
      return best;
    }
    case TieBreak::Alternating: {
      // cycle through the tie set (largest weight first) by node depth
      std::vector<std::size_t> order(ties.begin(), ties.end());
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (cls.entry(a).weight != cls.entry(b).weight) {
          return cls.entry(a).weight > cls.entry(b).weight;
        }
        return a < b;
      });
      return order[static_cast<std::size_t>(depth) % order.size()];
    }
  }
  return ties[0];
}

std::size_t map_from_values(const WeightedClass& cls, const NodeEval& node,
                            int depth, TieBreak tb) {
  const auto ties = tie_set(cls, node.log_model);
  return pick_from_tie_set(cls, ties, tb, depth);
}

std::size_t map_estimator(const WeightedClass& cls, std::span<const Symbol> x,
                          TieBreak tb) {
  check_symbols(x, cls.alphabet());
  ClassWalkers w(cls);
  for (Symbol a : x) w.advance(a);
  return map_from_values(cls, w.node_eval(), static_cast<int>(x.size()), tb);
}

// ---------------------------------------------------------------------------
// mixture and two-part values

double log_mixture_from_values(const WeightedClass& cls, const NodeEval& node) {
  std::vector<double> terms(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i) {
    terms[i] = cls.entry(i).log_weight + node.log_model[i];
  }
  return log_sum_exp(terms);
}

double mixture(const WeightedClass& cls, std::span<const Symbol> x) {
  check_symbols(x, cls.alphabet());
  ClassWalkers w(cls);
  for (Symbol a : x) w.advance(a);
  return std::exp(log_mixture_from_values(cls, w.node_eval()));
}

double two_part_value(const WeightedClass& cls, std::span<const Symbol> x,
                      TieBreak tb) {
  check_symbols(x, cls.alphabet());
  ClassWalkers w(cls);
  for (Symbol a : x) w.advance(a);
  const auto node = w.node_eval();
  const std::size_t i = map_from_values(cls, node, static_cast<int>(x.size()), tb);
  return std::exp(cls.entry(i).log_weight + node.log_model[i]);
}

double two_part_value(const WeightedClass& cls, std::span<const Symbol> x,
                      std::span<const Symbol> basis, TieBreak tb) {
  const std::size_t i = map_estimator(cls, basis, tb);
  check_symbols(x, cls.alphabet());
  ClassWalkers w(cls);
  for (Symbol a : x) w.advance(a);
  return std::exp(cls.entry(i).log_weight + w.log_model_value(i));
}

// ---------------------------------------------------------------------------
// prediction

Prediction predict_from_values(const WeightedClass& cls, const NodeEval& node,
                               std::span<const NodeEval> children, int depth,
                               PredictionMode mode, TieBreak tb) {
  const auto n_symbols = children.size();
  Prediction p;
  p.mode = mode;
  p.raw.assign(n_symbols, 0.0);

  switch (mode) {
    case PredictionMode::Mixture: {
      const double log_xi = log_mixture_from_values(cls, node);
      if (log_xi == kNegInf) {
        throw OffSupportError("mixture prediction: zero denominator");
      }
      for (std::size_t a = 0; a < n_symbols; ++a) {
        p.raw[a] = std::exp(log_mixture_from_values(cls, children[a]) - log_xi);
      }
      break;
    }
    case PredictionMode::Dynamic: {
      auto log_rho = [&](const NodeEval& e) {
        double best = kNegInf;
        for (std::size_t i = 0; i < cls.size(); ++i) {
          best = std::max(best, cls.entry(i).log_weight + e.log_model[i]);
        }
        return best;
      };
      const double denom = log_rho(node);
      if (denom == kNegInf) {
        throw OffSupportError("dynamic prediction: zero denominator");
      }
      for (std::size_t a = 0; a < n_symbols; ++a) {
        p.raw[a] = std::exp(log_rho(children[a]) - denom);
      }
      break;
    }
    case PredictionMode::Static: {
      const std::size_t i = map_from_values(cls, node, depth, tb);
      const double denom = node.log_model[i];
      if (denom == kNegInf) {
        throw OffSupportError("static prediction: zero denominator");
      }
      for (std::size_t a = 0; a < n_symbols; ++a) {
        p.raw[a] = std::exp(children[a].log_model[i] - denom);
      }
      break;
    }
    case PredictionMode::Hybrid: {
      const std::size_t i = map_from_values(cls, node, depth, tb);
      const double denom = node.log_model[i];
      if (denom == kNegInf) {
        throw OffSupportError("hybrid prediction: zero denominator");
      }
      for (std::size_t a = 0; a < n_symbols; ++a) {
        const std::size_t ia = map_from_values(cls, children[a], depth + 1, tb);
        p.raw[a] = std::exp(children[a].log_model[ia] - denom);
      }
      break;
    }
  }

  double sum = 0.0;
  for (double v : p.raw) sum += v;
  p.normalized.assign(n_symbols, 0.0);
  if (sum > 0.0) {
    for (std::size_t a = 0; a < n_symbols; ++a) p.normalized[a] = p.raw[a] / sum;
  }
  return p;
}

Prediction predict(const WeightedClass& cls, std::span<const Symbol> x,
                   PredictionMode mode, TieBreak tb) {
  check_symbols(x, cls.alphabet());
  ClassWalkers w(cls);
  for (Symbol a : x) w.advance(a);
  const NodeEval node = w.node_eval();
  std::vector<NodeEval> children;
  children.reserve(static_cast<std::size_t>(cls.alphabet().size));
  for (Symbol a = 0; a < cls.alphabet().size; ++a) {
    children.push_back(w.child(a).node_eval());
  }
  return predict_from_values(cls, node, children, static_cast<int>(x.size()),
                             mode, tb);
}

// ---------------------------------------------------------------------------
// normalization and Kraft conversion

NormalizerTrace normalizer_trace(
    const std::function<double(const SymbolString&)>& value,
    std::span<const Symbol> x, const Alphabet& alphabet) {
  NormalizerTrace trace;
  SymbolString prefix;
  prefix.reserve(x.size() + 1);
  for (std::size_t t = 0; t <= x.size(); ++t) {
    const double vx = value(prefix);
    if (vx <= 0.0) {
      throw OffSupportError("normalizer trace: zero value at prefix length " +
                            std::to_string(t));
    }
    double child_sum = 0.0;
    prefix.push_back(0);
    for (Symbol a = 0; a < alphabet.size; ++a) {
      prefix.back() = a;
      child_sum += value(prefix);
    }
    prefix.pop_back();
    trace.factors.push_back(child_sum / vx);
    trace.product *= trace.factors.back();
    if (t < x.size()) prefix.push_back(x[t]);
  }
  return trace;
}

int weight_codelength(const Rational& w) {
  if (w <= 0 || w > 1) {
    throw ValidationError("weight must be in (0,1], got " + format_rational(w));
  }
  // smallest b >= 0 with p * 2^b >= q for w = p/q
  const BigInt p = numerator(w);
  const BigInt q = denominator(w);
  if (p == q) return 0;
  const int pb = static_cast<int>(boost::multiprecision::msb(p));
  const int qb = static_cast<int>(boost::multiprecision::msb(q));
  int b = std::max(0, qb - pb - 1);
  while ((p << b) < q) ++b;
  return b;
}

Rational codelength_weight(int bits) {
  if (bits < 0) throw ValidationError("code length must be >= 0");
  return dyadic_pow2(bits);
}

}  // namespace mdlseq
