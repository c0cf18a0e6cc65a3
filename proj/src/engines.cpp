// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/engines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mdlseq/bounds.hpp"
#include "mdlseq/errors.hpp"

namespace mdlseq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

void throw_budget(std::size_t budget) {
  throw BudgetError(
      "engine budget exceeded (" + std::to_string(budget) +
      " surviving nodes); use the exact-counts engine for i.i.d. classes or "
      "the monte-carlo engine");
}

}  // namespace

Engine parse_engine(const std::string& name) {
  if (name == "exact-tree") return Engine::ExactTree;
  if (name == "exact-counts") return Engine::ExactCounts;
  if (name == "monte-carlo") return Engine::MonteCarlo;
  throw ValidationError("unknown engine '" + name + "'");
}

std::string format_engine(Engine engine) {
  switch (engine) {
    case Engine::ExactTree: return "exact-tree";
    case Engine::ExactCounts: return "exact-counts";
    case Engine::MonteCarlo: return "monte-carlo";
  }
  return "exact-tree";
}

bool ErrorSeries::bound_holds() const {
  if (!bound) return true;
  for (double c : cumulative) {
    if (c > *bound + 1e-12) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// expectation primitives

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SymbolString sample_sequence(const Model& mu, int n, std::mt19937_64& rng) {
  if (!mu.is_measure()) {
    throw ValidationError("sampling requires a measure");
  }
  SymbolString x;
  x.reserve(static_cast<std::size_t>(n));
  Model::Walker w = mu.walker();
  for (int t = 0; t < n; ++t) {
    const double log_x = w.log_value();
    const double u = uniform01(rng);
    double cdf = 0.0;
    Symbol pick = mu.alphabet().size - 1;
    Model::Walker chosen = w;
    for (Symbol a = 0; a < mu.alphabet().size; ++a) {
      Model::Walker c = w;
      c.advance(a);
      cdf += std::exp(c.log_value() - log_x);
      if (u < cdf) {
        pick = a;
        chosen = c;
        break;
      }
      if (a == mu.alphabet().size - 1) chosen = c;  // guard rounding gaps
    }
    x.push_back(pick);
    w = chosen;
  }
  return x;
}

double exact_expectation(const std::function<double(const SymbolString&)>& f,
                         const Model& mu, int n, std::size_t node_budget) {
  if (n < 0) throw ValidationError("horizon must be >= 0");
  if (!mu.is_measure()) {
    throw ValidationError("expectation requires the true model to be a measure");
  }
  double total = 0.0;
  std::size_t survived = 0;
  SymbolString x;
  x.reserve(static_cast<std::size_t>(n));

  std::function<void(const Model::Walker&, double, int)> recurse =
      [&](const Model::Walker& w, double mu_p, int depth) {
        if (++survived > node_budget) throw_budget(node_budget);
        if (depth == n) {
          total += mu_p * f(x);
          return;
        }
        const double log_x = w.log_value();
        for (Symbol a = 0; a < mu.alphabet().size; ++a) {
          Model::Walker c = w;
          c.advance(a);
          if (c.log_value() == -kInf) continue;
          const double cond = std::exp(c.log_value() - log_x);
          x.push_back(a);
          recurse(c, mu_p * cond, depth + 1);
          x.pop_back();
        }
      };
  recurse(mu.walker(), 1.0, 0);
  return total;
}

// ---------------------------------------------------------------------------
// count-vector dynamic programming

namespace {

struct CountsState {
  std::vector<std::int64_t> counts;
  double mass;  // mu-probability of all strings with these counts
};

std::vector<double> iid_theta_doubles(const Model& m) {
  const auto row = m.step_distribution(1);
  std::vector<double> out(row->size());
  for (std::size_t a = 0; a < row->size(); ++a) out[a] = to_double((*row)[a]);
  return out;
}

}  // namespace

double counts_expectation(
    const std::function<double(std::span<const std::int64_t>)>& f,
    const Model& mu, int n, std::size_t state_budget) {
  if (n < 0) throw ValidationError("horizon must be >= 0");
  if (mu.kind() != ModelKind::Iid) {
    throw UnsupportedError("counts engine requires an i.i.d. true model");
  }
  const auto theta = iid_theta_doubles(mu);
  const int m = mu.alphabet().size;

  std::map<std::vector<std::int64_t>, double> level;
  level[std::vector<std::int64_t>(static_cast<std::size_t>(m), 0)] = 1.0;
  for (int t = 0; t < n; ++t) {
    std::map<std::vector<std::int64_t>, double> next;
    for (const auto& [counts, mass] : level) {
      for (int a = 0; a < m; ++a) {
        if (theta[static_cast<std::size_t>(a)] == 0.0) continue;
        auto c = counts;
        ++c[static_cast<std::size_t>(a)];
        next[std::move(c)] += mass * theta[static_cast<std::size_t>(a)];
      }
    }
    level = std::move(next);
    if (level.size() > state_budget) throw_budget(state_budget);
  }
  double total = 0.0;
  for (const auto& [counts, mass] : level) total += mass * f(counts);
  return total;
}

// ---------------------------------------------------------------------------
// error series

namespace {

struct SeriesAccumulator {
  std::vector<double> per_step;
  std::vector<bool> infinite;

  explicit SeriesAccumulator(int n)
      : per_step(static_cast<std::size_t>(n), 0.0),
        infinite(static_cast<std::size_t>(n), false) {}

  void add(int step_index, double weight, double metric) {
    if (std::isinf(metric)) {
      infinite[static_cast<std::size_t>(step_index)] = true;
    } else {
      per_step[static_cast<std::size_t>(step_index)] += weight * metric;
    }
  }

  void finish(ErrorSeries& out) const {
    out.per_step.resize(per_step.size());
    out.cumulative.resize(per_step.size());
    double sum = 0.0;
    for (std::size_t t = 0; t < per_step.size(); ++t) {
      if (infinite[t]) {
        out.per_step[t] = kInf;
        out.has_infinite = true;
      } else {
        out.per_step[t] = per_step[t];
        sum += per_step[t];
      }
      out.cumulative[t] = sum;
    }
  }
};

// metric of the requested predictor at one node, given node/child values
double node_metric(const WeightedClass& cls, const SeriesRequest& req,
                   const NodeEval& node, std::span<const NodeEval> children,
                   int depth, std::span<const double> mu_cond) {
  const Prediction p =
      predict_from_values(cls, node, children, depth, req.mode, req.tie_break);
  const auto& phi = req.normalized ? p.normalized : p.raw;
  double raw_sum = 0.0;
  if (req.normalized) {
    for (double v : p.raw) raw_sum += v;
    if (raw_sum == 0.0) return kInf;  // normalization undefined
  }
  return metric_value(req.metric, mu_cond, phi);
}

ErrorSeries tree_series(const WeightedClass& cls, const SeriesRequest& req) {
  const std::size_t ti = cls.require_true_index();
  const int n = req.horizon;
  const int m = cls.alphabet().size;
  SeriesAccumulator acc(n);
  std::size_t survived = 0;

  std::function<void(const ClassWalkers&, double, int)> recurse =
      [&](const ClassWalkers& w, double mu_p, int depth) {
        if (++survived > req.node_budget) throw_budget(req.node_budget);
        std::vector<ClassWalkers> kids;
        kids.reserve(static_cast<std::size_t>(m));
        std::vector<NodeEval> child_evals;
        child_evals.reserve(static_cast<std::size_t>(m));
        for (Symbol a = 0; a < m; ++a) {
          kids.push_back(w.child(a));
          child_evals.push_back(kids.back().node_eval());
        }
        const NodeEval node = w.node_eval();
        std::vector<double> mu_cond(static_cast<std::size_t>(m));
        for (Symbol a = 0; a < m; ++a) {
          mu_cond[static_cast<std::size_t>(a)] = std::exp(
              child_evals[static_cast<std::size_t>(a)].log_model[ti] -
              node.log_model[ti]);
        }
        acc.add(depth, mu_p,
                node_metric(cls, req, node, child_evals, depth, mu_cond));
        if (depth + 1 <= n - 1) {
          for (Symbol a = 0; a < m; ++a) {
            const double cond = mu_cond[static_cast<std::size_t>(a)];
            if (cond <= 0.0) continue;
            recurse(kids[static_cast<std::size_t>(a)], mu_p * cond, depth + 1);
          }
        }
      };
  recurse(ClassWalkers(cls), 1.0, 0);

  ErrorSeries out;
  out.engine = Engine::ExactTree;
  acc.finish(out);
  return out;
}

// per-model log value of an i.i.d. model at a count vector
double iid_log_value(const std::vector<double>& log_theta,
                     std::span<const std::int64_t> counts) {
  double v = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] == 0) continue;
    if (log_theta[a] == -kInf) return -kInf;
    v += static_cast<double>(counts[a]) * log_theta[a];
  }
  return v;
}

ErrorSeries counts_series(const WeightedClass& cls, const SeriesRequest& req) {
  const std::size_t ti = cls.require_true_index();
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (cls.entry(i).model.kind() != ModelKind::Iid) {
      throw UnsupportedError("exact-counts engine requires an all-i.i.d. "
                             "class; model '" +
                             cls.entry(i).name + "' is not i.i.d.");
    }
  }
  const int n = req.horizon;
  const int m = cls.alphabet().size;
  const std::size_t k = cls.size();

  std::vector<std::vector<double>> log_theta(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto row = cls.entry(i).model.step_distribution(1);
    log_theta[i].resize(row->size());
    for (std::size_t a = 0; a < row->size(); ++a) {
      log_theta[i][a] = log_rational((*row)[a]);
    }
  }
  const auto theta_mu = iid_theta_doubles(cls.entry(ti).model);

  auto eval_at = [&](std::span<const std::int64_t> counts) {
    NodeEval e;
    e.log_model.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      e.log_model[i] = iid_log_value(log_theta[i], counts);
    }
    return e;
  };

  SeriesAccumulator acc(n);
  std::map<std::vector<std::int64_t>, double> level;
  level[std::vector<std::int64_t>(static_cast<std::size_t>(m), 0)] = 1.0;
  for (int t = 0; t < n; ++t) {
    for (const auto& [counts, mass] : level) {
      const NodeEval node = eval_at(counts);
      std::vector<NodeEval> children;
      children.reserve(static_cast<std::size_t>(m));
      std::vector<double> mu_cond(static_cast<std::size_t>(m));
      auto c = counts;
      for (int a = 0; a < m; ++a) {
        ++c[static_cast<std::size_t>(a)];
        children.push_back(eval_at(c));
        --c[static_cast<std::size_t>(a)];
        mu_cond[static_cast<std::size_t>(a)] =
            theta_mu[static_cast<std::size_t>(a)];
      }
      acc.add(t, mass, node_metric(cls, req, node, children, t, mu_cond));
    }
    if (t + 1 <= n - 1) {
      std::map<std::vector<std::int64_t>, double> next;
      for (const auto& [counts, mass] : level) {
        for (int a = 0; a < m; ++a) {
          if (theta_mu[static_cast<std::size_t>(a)] == 0.0) continue;
          auto c = counts;
          ++c[static_cast<std::size_t>(a)];
          next[std::move(c)] += mass * theta_mu[static_cast<std::size_t>(a)];
        }
      }
      level = std::move(next);
      if (level.size() > req.node_budget) throw_budget(req.node_budget);
    }
  }

  ErrorSeries out;
  out.engine = Engine::ExactCounts;
  acc.finish(out);
  return out;
}

ErrorSeries mc_series(const WeightedClass& cls, const SeriesRequest& req) {
  const std::size_t ti = cls.require_true_index();
  if (req.samples < 1) throw ValidationError("samples must be >= 1");
  const int n = req.horizon;
  const int m = cls.alphabet().size;

  std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sum_sq(static_cast<std::size_t>(n), 0.0);
  std::vector<bool> infinite(static_cast<std::size_t>(n), false);
  double cum_sum = 0.0;
  double cum_sum_sq = 0.0;

  std::mt19937_64 rng(req.seed);
  for (std::int64_t s = 0; s < req.samples; ++s) {
    ClassWalkers w(cls);
    double cumulative = 0.0;
    for (int t = 0; t < n; ++t) {
      const NodeEval node = w.node_eval();
      std::vector<ClassWalkers> kids;
      kids.reserve(static_cast<std::size_t>(m));
      std::vector<NodeEval> child_evals;
      child_evals.reserve(static_cast<std::size_t>(m));
      for (Symbol a = 0; a < m; ++a) {
        kids.push_back(w.child(a));
        child_evals.push_back(kids.back().node_eval());
      }
      std::vector<double> mu_cond(static_cast<std::size_t>(m));
      for (Symbol a = 0; a < m; ++a) {
        mu_cond[static_cast<std::size_t>(a)] = std::exp(
            child_evals[static_cast<std::size_t>(a)].log_model[ti] -
            node.log_model[ti]);
      }
      const double v =
          node_metric(cls, req, node, child_evals, t, mu_cond);
      if (std::isinf(v)) {
        infinite[static_cast<std::size_t>(t)] = true;
      } else {
        sum[static_cast<std::size_t>(t)] += v;
        sum_sq[static_cast<std::size_t>(t)] += v * v;
        cumulative += v;
      }
      // draw the next symbol from mu
      const double u = uniform01(rng);
      double cdf = 0.0;
      Symbol pick = m - 1;
      for (Symbol a = 0; a < m; ++a) {
        cdf += mu_cond[static_cast<std::size_t>(a)];
        if (u < cdf) {
          pick = a;
          break;
        }
      }
      w = std::move(kids[static_cast<std::size_t>(pick)]);
    }
    cum_sum += cumulative;
    cum_sum_sq += cumulative * cumulative;
  }

  const double ns = static_cast<double>(req.samples);
  ErrorSeries out;
  out.engine = Engine::MonteCarlo;
  out.seed = req.seed;
  out.samples = req.samples;
  out.per_step.resize(static_cast<std::size_t>(n));
  out.cumulative.resize(static_cast<std::size_t>(n));
  out.ci_halfwidth.resize(static_cast<std::size_t>(n), 0.0);
  double running = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    if (infinite[ut]) {
      out.per_step[ut] = kInf;
      out.has_infinite = true;
    } else {
      out.per_step[ut] = sum[ut] / ns;
      running += out.per_step[ut];
    }
    out.cumulative[ut] = running;
    if (req.samples > 1 && !infinite[ut]) {
      const double mean = sum[ut] / ns;
      const double var =
          std::max(0.0, (sum_sq[ut] - ns * mean * mean) / (ns - 1.0));
      out.ci_halfwidth[ut] = kZ99 * std::sqrt(var / ns);
    }
  }
  if (req.samples > 1) {
    const double mean = cum_sum / ns;
    const double var =
        std::max(0.0, (cum_sum_sq - ns * mean * mean) / (ns - 1.0));
    out.cumulative_ci_halfwidth = kZ99 * std::sqrt(var / ns);
  }
  return out;
}

}  // namespace

McEstimate mc_expectation(const std::function<double(const SymbolString&)>& f,
                          const Model& mu, int n, std::int64_t samples,
                          std::uint64_t seed) {
  if (samples < 1) throw ValidationError("samples must be >= 1");
  std::mt19937_64 rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const SymbolString x = sample_sequence(mu, n, rng);
    const double v = f(x);
    sum += v;
    sum_sq += v * v;
  }
  const double ns = static_cast<double>(samples);
  McEstimate est;
  est.mean = sum / ns;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - ns * est.mean * est.mean) / (ns - 1.0));
    est.ci_halfwidth = kZ99 * std::sqrt(var / ns);
  }
  return est;
}

ErrorSeries error_series(const WeightedClass& cls, const SeriesRequest& req) {
  if (req.horizon < 1) throw ValidationError("horizon must be >= 1");
  const std::size_t ti = cls.require_true_index();
  if (!cls.entry(ti).model.is_measure()) {
    throw ValidationError("true model must be a measure");
  }
  ErrorSeries out;
  switch (req.engine) {
    case Engine::ExactTree: out = tree_series(cls, req); break;
    case Engine::ExactCounts: out = counts_series(cls, req); break;
    case Engine::MonteCarlo: out = mc_series(cls, req); break;
  }
  if (const auto id = bound_id_for(req.mode, req.normalized, req.metric)) {
    out.bound_id = *id;
    out.bound = bound_for(*id, cls.true_weight());
  }
  return out;
}

}  // namespace mdlseq
