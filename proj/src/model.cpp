// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/model.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "mdlseq/errors.hpp"

namespace mdlseq {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// internal representation

struct TabNode {
  Rational value = 0;
  double log_value = kNegInf;
  bool listed = false;
  std::vector<std::unique_ptr<TabNode>> child;  // sized |X| once touched

  TabNode* get(Symbol a) const {
    if (child.empty()) return nullptr;
    return child[static_cast<std::size_t>(a)].get();
  }
};

struct Model::Impl {
  Alphabet alphabet;
  ModelKind kind = ModelKind::Iid;
  bool measure = false;
  ModelSpec spec;

  // iid
  std::vector<Rational> theta;
  std::vector<double> log_theta;

  // deterministic
  SymbolString prefix;
  SymbolString period;

  // factorizable
  std::vector<std::vector<Rational>> steps;
  std::vector<std::vector<double>> log_steps;
  std::vector<Rational> tail;
  std::vector<double> log_tail;
  StepGenerator generator = StepGenerator::None;

  // tabular
  std::unique_ptr<TabNode> root;

  Symbol deterministic_symbol(int pos) const {
    if (pos < static_cast<int>(prefix.size())) return prefix[pos];
    const int k = (pos - static_cast<int>(prefix.size())) %
                  static_cast<int>(period.size());
    return period[k];
  }

  // generator rows are binary: row[0] = 2^-e, row[1] = 1 - 2^-e
  static int generator_exponent(StepGenerator g, int step /*1-based*/) {
    if (g == StepGenerator::OscillatingMu) return 2 * ((step + 1) / 2);
    return 2 * ((step + 2) / 2) - 1;
  }

  double log_step_entry(int pos /*0-based*/, Symbol a) const {
    if (pos < static_cast<int>(steps.size())) return log_steps[pos][a];
    if (generator != StepGenerator::None) {
      const int e = generator_exponent(generator, pos + 1);
      const double p0 = std::exp2(-static_cast<double>(e));
      return a == 0 ? -e * std::log(2.0) : std::log1p(-p0);
    }
    return log_tail[a];
  }

  Rational exact_step_entry(int pos, Symbol a) const {
    if (pos < static_cast<int>(steps.size())) return steps[pos][a];
    if (generator != StepGenerator::None) {
      const int e = generator_exponent(generator, pos + 1);
      const Rational p0 = dyadic_pow2(e);
      return a == 0 ? p0 : Rational(1) - p0;
    }
    return tail[a];
  }
};

// ---------------------------------------------------------------------------
// construction

namespace {

void validate_distribution_row(const std::vector<Rational>& row,
                               const Alphabet& alphabet,
                               const std::string& field, bool require_measure) {
  if (row.size() != static_cast<std::size_t>(alphabet.size)) {
    throw ValidationError(field + ": expected " +
                          std::to_string(alphabet.size) + " entries, got " +
                          std::to_string(row.size()));
  }
  Rational sum = 0;
  for (const Rational& r : row) {
    if (r < 0 || r > 1) throw ValidationError(field + ": entry out of [0,1]");
    sum += r;
  }
  if (require_measure) {
    if (sum != 1) {
      throw ValidationError(field + ": entries must sum to 1, got " +
                            format_rational(sum));
    }
  } else if (sum > 1) {
    throw ValidationError(field + ": entries sum to " + format_rational(sum) +
                          " > 1");
  }
}

std::vector<double> log_row(const std::vector<Rational>& row) {
  std::vector<double> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = log_rational(row[i]);
  return out;
}

Rational row_sum(const std::vector<Rational>& row) {
  Rational s = 0;
  for (const Rational& r : row) s += r;
  return s;
}

// Builds the explicit-value trie and verifies value(x) >= sum_a value(xa)
// at every node.
std::unique_ptr<TabNode> build_trie(const TabularSpec& spec,
                                    const Alphabet& alphabet) {
  auto root = std::make_unique<TabNode>();
  for (const auto& [path, value] : spec.nodes) {
    check_symbols(path, alphabet);
    if (value < 0 || value > 1) {
      throw ValidationError("node " + (path.empty() ? "." : format_symbols(path)) +
                            ": value out of [0,1]");
    }
    TabNode* node = root.get();
    for (Symbol a : path) {
      if (node->child.empty()) {
        node->child.resize(static_cast<std::size_t>(alphabet.size));
      }
      auto& slot = node->child[static_cast<std::size_t>(a)];
      if (!slot) slot = std::make_unique<TabNode>();
      node = slot.get();
    }
    if (node->listed) {
      throw ValidationError("node " + (path.empty() ? "." : format_symbols(path)) +
                            " listed twice");
    }
    node->listed = true;
    node->value = value;
    node->log_value = log_rational(value);
  }
  if (!root->listed) {
    root->listed = true;
    root->value = 1;
    root->log_value = 0.0;
  }
  // children of unlisted interior nodes are necessarily over-budget (the
  // unlisted node has value 0), which the scan below rejects.
  std::function<void(const TabNode*, SymbolString&)> scan =
      [&](const TabNode* node, SymbolString& path) {
        Rational child_sum = 0;
        for (std::size_t a = 0; a < node->child.size(); ++a) {
          if (node->child[a]) child_sum += node->child[a]->value;
        }
        if (child_sum > node->value) {
          throw ValidationError(
              "node " + (path.empty() ? "." : format_symbols(path)) +
              ": children sum to " + format_rational(child_sum) +
              " > value " + format_rational(node->value));
        }
        for (std::size_t a = 0; a < node->child.size(); ++a) {
          if (!node->child[a]) continue;
          path.push_back(static_cast<Symbol>(a));
          scan(node->child[a].get(), path);
          path.pop_back();
        }
      };
  SymbolString path;
  scan(root.get(), path);
  return root;
}

}  // namespace

Model build_model(const Alphabet& alphabet, const ModelSpec& spec) {
  auto impl = std::make_shared<Model::Impl>();
  impl->alphabet = alphabet;
  impl->spec = spec;

  if (const auto* iid = std::get_if<IidSpec>(&spec)) {
    impl->kind = ModelKind::Iid;
    validate_distribution_row(iid->theta, alphabet, "theta",
                              /*require_measure=*/true);
    impl->theta = iid->theta;
    impl->log_theta = log_row(impl->theta);
    impl->measure = true;
  } else if (const auto* det = std::get_if<DeterministicSpec>(&spec)) {
    impl->kind = ModelKind::Deterministic;
    if (det->period.empty()) throw ValidationError("period: must be nonempty");
    check_symbols(det->prefix, alphabet);
    check_symbols(det->period, alphabet);
    impl->prefix = det->prefix;
    impl->period = det->period;
    impl->measure = true;
  } else if (const auto* fac = std::get_if<FactorizableSpec>(&spec)) {
    impl->kind = ModelKind::Factorizable;
    bool measure = true;
    for (std::size_t i = 0; i < fac->steps.size(); ++i) {
      validate_distribution_row(fac->steps[i], alphabet,
                                "step " + std::to_string(i + 1),
                                /*require_measure=*/false);
      measure = measure && row_sum(fac->steps[i]) == 1;
      impl->steps.push_back(fac->steps[i]);
      impl->log_steps.push_back(log_row(fac->steps[i]));
    }
    if (fac->generator != StepGenerator::None) {
      if (alphabet.size != 2) {
        throw ValidationError("generator: oscillating generators are binary");
      }
      if (!fac->tail.empty()) {
        throw ValidationError("tail: conflicts with a named generator");
      }
      impl->generator = fac->generator;
      // generator rows sum to 1 by construction
    } else {
      if (fac->tail.empty()) {
        throw ValidationError("tail: required when no generator is named");
      }
      validate_distribution_row(fac->tail, alphabet, "tail",
                                /*require_measure=*/false);
      measure = measure && row_sum(fac->tail) == 1;
      impl->tail = fac->tail;
      impl->log_tail = log_row(impl->tail);
    }
    impl->measure = measure;
  } else {
    const auto& tab = std::get<TabularSpec>(spec);
    impl->kind = ModelKind::Tabular;
    impl->root = build_trie(tab, alphabet);
    impl->measure = false;
  }

  Model m;
  m.impl_ = std::move(impl);
  return m;
}

// ---------------------------------------------------------------------------
// accessors and walkers

ModelKind Model::kind() const { return impl_->kind; }
const Alphabet& Model::alphabet() const { return impl_->alphabet; }
bool Model::is_measure() const { return impl_->measure; }
const ModelSpec& Model::spec() const { return impl_->spec; }

void Model::Walker::advance(Symbol a) {
  const auto* impl = static_cast<const Model::Impl*>(impl_);
  switch (impl->kind) {
    case ModelKind::Iid:
      logv_ += impl->log_theta[static_cast<std::size_t>(a)];
      break;
    case ModelKind::Deterministic:
      if (logv_ == 0.0 && a == impl->deterministic_symbol(pos_)) {
        // still on the sequence
      } else {
        logv_ = kNegInf;
      }
      break;
    case ModelKind::Factorizable:
      logv_ += impl->log_step_entry(pos_, a);
      break;
    case ModelKind::Tabular: {
      const auto* n = static_cast<const TabNode*>(node_);
      const TabNode* next = n ? n->get(a) : nullptr;
      node_ = next;
      logv_ = next ? next->log_value : kNegInf;
      break;
    }
  }
  ++pos_;
}

bool Model::Walker::alive() const { return logv_ != kNegInf; }

Model::Walker Model::walker() const {
  Walker w;
  w.impl_ = impl_.get();
  if (impl_->kind == ModelKind::Tabular) {
    w.node_ = impl_->root.get();
    w.logv_ = impl_->root->log_value;
  }
  return w;
}

void Model::ExactWalker::advance(Symbol a) {
  const auto* impl = static_cast<const Model::Impl*>(impl_);
  switch (impl->kind) {
    case ModelKind::Iid:
      value_ *= impl->theta[static_cast<std::size_t>(a)];
      break;
    case ModelKind::Deterministic:
      if (!(value_ == 1 && a == impl->deterministic_symbol(pos_))) value_ = 0;
      break;
    case ModelKind::Factorizable:
      value_ *= impl->exact_step_entry(pos_, a);
      break;
    case ModelKind::Tabular: {
      const auto* n = static_cast<const TabNode*>(node_);
      const TabNode* next = n ? n->get(a) : nullptr;
      node_ = next;
      value_ = next ? next->value : Rational(0);
      break;
    }
  }
  ++pos_;
}

Model::ExactWalker Model::exact_walker() const {
  ExactWalker w;
  w.impl_ = impl_.get();
  if (impl_->kind == ModelKind::Tabular) {
    w.node_ = impl_->root.get();
    w.value_ = impl_->root->value;
  }
  return w;
}

double Model::log_prob(std::span<const Symbol> x) const {
  check_symbols(x, impl_->alphabet);
  Walker w = walker();
  for (Symbol a : x) w.advance(a);
  return w.log_value();
}

Rational Model::exact_prob(std::span<const Symbol> x) const {
  check_symbols(x, impl_->alphabet);
  ExactWalker w = exact_walker();
  for (Symbol a : x) {
    w.advance(a);
    if (w.value() == 0) return 0;
  }
  return w.value();
}

std::optional<std::vector<Rational>> Model::step_distribution(int step) const {
  if (step < 1) throw ValidationError("step must be >= 1");
  const auto& impl = *impl_;
  const auto size = static_cast<std::size_t>(impl.alphabet.size);
  switch (impl.kind) {
    case ModelKind::Iid:
      return impl.theta;
    case ModelKind::Deterministic: {
      std::vector<Rational> row(size, 0);
      row[static_cast<std::size_t>(impl.deterministic_symbol(step - 1))] = 1;
      return row;
    }
    case ModelKind::Factorizable: {
      std::vector<Rational> row(size);
      for (std::size_t a = 0; a < size; ++a) {
        row[a] = impl.exact_step_entry(step - 1, static_cast<Symbol>(a));
      }
      return row;
    }
    case ModelKind::Tabular:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// measure-level operations

double probability(const Model& model, std::span<const Symbol> x) {
  return std::exp(model.log_prob(x));
}

double conditional(const Model& model, Symbol a, std::span<const Symbol> x) {
  if (!model.alphabet().contains(a)) {
    throw ValidationError("symbol " + std::to_string(a) +
                          " out of alphabet of size " +
                          std::to_string(model.alphabet().size));
  }
  check_symbols(x, model.alphabet());
  Model::Walker w = model.walker();
  for (Symbol s : x) w.advance(s);
  if (!w.alive()) return 0.0;
  const double log_x = w.log_value();
  w.advance(a);
  return std::exp(w.log_value() - log_x);
}

double deficiency(const Model& model, std::span<const Symbol> x) {
  Model::Walker w = model.walker();
  for (Symbol s : x) w.advance(s);
  const double vx = std::exp(w.log_value());
  double child_sum = 0.0;
  for (Symbol a = 0; a < model.alphabet().size; ++a) {
    Model::Walker c = w;
    c.advance(a);
    child_sum += std::exp(c.log_value());
  }
  return vx - child_sum;
}

double deficiency(const std::function<double(const SymbolString&)>& value,
                  const SymbolString& x, const Alphabet& alphabet) {
  double child_sum = 0.0;
  SymbolString xa = x;
  xa.push_back(0);
  for (Symbol a = 0; a < alphabet.size; ++a) {
    xa.back() = a;
    child_sum += value(xa);
  }
  return value(x) - child_sum;
}

StochasticityReport is_uniformly_stochastic(const Model& model, double delta,
                                            int horizon) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ValidationError("delta must be in (0,1]");
  }
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  if (model.kind() == ModelKind::Tabular) {
    throw UnsupportedError(
        "uniform stochasticity needs a factorizable view; tabular models "
        "have none");
  }
  StochasticityReport report;
  report.uniformly_stochastic = true;
  for (int i = 1; i <= horizon; ++i) {
    const auto row = model.step_distribution(i);
    for (std::size_t a = 0; a < row->size(); ++a) {
      const Rational& r = (*row)[a];
      if (r == 0) continue;
      const double p = to_double(r);
      if (p < report.min_positive) report.min_positive = p;
      if (p < delta) {
        report.uniformly_stochastic = false;
        report.witness = {i, static_cast<Symbol>(a)};
        return report;
      }
    }
  }
  return report;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ValidationError("kl_divergence: length mismatch (" +
                          std::to_string(p.size()) + " vs " +
                          std::to_string(q.size()) + ")");
  }
  double p_sum = 0.0;
  for (double v : p) {
    if (v < 0) throw ValidationError("kl_divergence: negative entry in p");
    p_sum += v;
  }
  if (std::abs(p_sum - 1.0) > 1e-9) {
    throw ValidationError("kl_divergence: p must sum to 1");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] < 0) throw ValidationError("kl_divergence: negative entry in q");
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

}  // namespace mdlseq
