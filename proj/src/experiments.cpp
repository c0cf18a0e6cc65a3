// SPDX-License-Identifier: Apache-2.0
#include "mdlseq/experiments.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "mdlseq/bounds.hpp"
#include "mdlseq/errors.hpp"
#include "mdlseq/predictors.hpp"
#include "mdlseq/stabilization.hpp"

namespace mdlseq {

namespace {

// locale-free, 17 significant digits
std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

constexpr char kSeriesHeader[] =
    "experiment,t,metric,per_step,cumulative,bound,engine,seed\n";

void append_series_rows(std::ostringstream& out, const std::string& id,
                        ErrorMetric metric, const ErrorSeries& s) {
  for (std::size_t t = 0; t < s.per_step.size(); ++t) {
    out << id << ',' << (t + 1) << ',' << format_metric(metric) << ','
        << format_double(s.per_step[t]) << ','
        << format_double(s.cumulative[t]) << ',';
    if (s.bound) out << format_double(*s.bound);
    out << ',' << format_engine(s.engine) << ',' << s.seed << '\n';
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// canned classes

WeightedClass make_lower_bound_class(int n_models) {
  if (n_models < 2) throw ValidationError("lower-bound class needs n >= 2");
  const Alphabet alphabet(2);
  const Rational w(1, n_models);
  std::vector<ClassEntry> entries;
  for (int i = 1; i <= n_models - 1; ++i) {
    DeterministicSpec spec;
    spec.prefix.assign(static_cast<std::size_t>(i - 1), 1);
    spec.period = {0};
    entries.push_back(ClassEntry{"nu" + std::to_string(i),
                                 build_model(alphabet, spec), w,
                                 log_rational(w)});
  }
  DeterministicSpec mu;
  mu.period = {1};
  entries.push_back(
      ClassEntry{"mu", build_model(alphabet, mu), w, log_rational(w)});
  const std::size_t true_index = entries.size() - 1;
  return WeightedClass(alphabet, std::move(entries), true_index,
                       TieBreak::WeightThenIndex);
}

WeightedClass make_bernoulli5_class() {
  const Alphabet alphabet(2);
  const Rational thetas[] = {Rational(0), Rational(1, 4), Rational(1, 2),
                             Rational(3, 4), Rational(1)};
  const Rational w(1, 5);
  std::vector<ClassEntry> entries;
  for (const Rational& th : thetas) {
    IidSpec spec;
    spec.theta = {Rational(1) - th, th};  // th = P(symbol 1)
    entries.push_back(ClassEntry{"theta" + format_rational(th),
                                 build_model(alphabet, spec), w,
                                 log_rational(w)});
  }
  return WeightedClass(alphabet, std::move(entries), 2,
                       TieBreak::WeightThenIndex);
}

WeightedClass make_ambiguous_tie_class() {
  const Alphabet alphabet(2);
  std::vector<ClassEntry> entries;
  IidSpec lambda;
  lambda.theta = {Rational(1, 2), Rational(1, 2)};
  entries.push_back(ClassEntry{"lambda", build_model(alphabet, lambda),
                               Rational(2, 3), log_rational(Rational(2, 3))});
  FactorizableSpec nu;  // nu(1x) = 2^-len(x), nu(0x) = 0
  nu.steps = {{Rational(0), Rational(1)}};
  nu.tail = {Rational(1, 2), Rational(1, 2)};
  entries.push_back(ClassEntry{"nu", build_model(alphabet, nu), Rational(1, 3),
                               log_rational(Rational(1, 3))});
  return WeightedClass(alphabet, std::move(entries), 0,
                       TieBreak::WeightThenIndex);
}

WeightedClass make_hybrid_excess_class() {
  const Alphabet alphabet(2);
  std::vector<ClassEntry> entries;
  IidSpec a;
  a.theta = {Rational(1, 2), Rational(1, 2)};
  entries.push_back(ClassEntry{"fair", build_model(alphabet, a),
                               Rational(7, 10), log_rational(Rational(7, 10))});
  IidSpec b;
  b.theta = {Rational(9, 10), Rational(1, 10)};
  entries.push_back(ClassEntry{"skewed", build_model(alphabet, b),
                               Rational(3, 10), log_rational(Rational(3, 10))});
  return WeightedClass(alphabet, std::move(entries), 0,
                       TieBreak::WeightThenIndex);
}

WeightedClass make_oscillating_pair_class() {
  const Alphabet alphabet(2);
  FactorizableSpec mu_spec;
  mu_spec.generator = StepGenerator::OscillatingMu;
  FactorizableSpec nu_spec;
  nu_spec.generator = StepGenerator::OscillatingNu;
  const Model mu = build_model(alphabet, mu_spec);
  const Model nu = build_model(alphabet, nu_spec);

  // Derive the weight ratio from the estimated limit of nu(1^t)/mu(1^t).
  // The ratio's partial products straddle their limit, so by t = 200 the
  // double-precision value has converged. The reciprocal, frozen as a
  // dyadic rational (denominator 2^61), makes the weighted values of mu and
  // nu cross repeatedly along 1^inf.
  double log_ratio = 0.0;
  {
    Model::Walker wm = mu.walker();
    Model::Walker wn = nu.walker();
    for (int t = 0; t < 200; ++t) {
      wm.advance(1);
      wn.advance(1);
    }
    log_ratio = wn.log_value() - wm.log_value();
  }
  const double ratio = std::exp(-log_ratio);  // w_nu / w_mu
  const BigInt scale = BigInt(1) << 61;
  const BigInt q(std::llround(ratio * std::exp2(61.0)));
  const Rational w_mu(scale, scale + q);
  const Rational w_nu(q, scale + q);

  std::vector<ClassEntry> entries;
  entries.push_back(ClassEntry{"mu", mu, w_mu, log_rational(w_mu)});
  entries.push_back(ClassEntry{"nu", nu, w_nu, log_rational(w_nu)});
  return WeightedClass(alphabet, std::move(entries), 0,
                       TieBreak::WeightThenIndex);
}

// ---------------------------------------------------------------------------
// experiments

ExperimentResult run_series_experiment(const std::string& id,
                                       const WeightedClass& cls,
                                       const SeriesRequest& req) {
  const ErrorSeries s = error_series(cls, req);
  ExperimentResult result;
  std::ostringstream out;
  out << kSeriesHeader;
  append_series_rows(out, id, req.metric, s);
  result.csv = out.str();
  result.status = s.bound_holds() ? kStatusOk : kStatusBoundViolation;
  return result;
}

namespace {

ExperimentResult series_entry(const std::string& id, const WeightedClass& cls,
                              PredictionMode mode, bool normalized,
                              ErrorMetric metric, int horizon,
                              Engine engine = Engine::ExactTree) {
  SeriesRequest req;
  req.mode = mode;
  req.normalized = normalized;
  req.metric = metric;
  req.horizon = horizon;
  req.engine = engine;
  return run_series_experiment(id, cls, req);
}

// raw hybrid value of the observed next symbol along 1^inf, t = 2..horizon
ExperimentResult hybrid_oscillation(int horizon) {
  WeightedClass cls = make_ambiguous_tie_class();
  ExperimentResult result;
  std::ostringstream out;
  out << kSeriesHeader;
  SymbolString prefix;
  for (int t = 2; t <= horizon; ++t) {
    prefix.assign(static_cast<std::size_t>(t - 1), 1);
    const Prediction p =
        predict(cls, prefix, PredictionMode::Hybrid, TieBreak::Alternating);
    out << "hybrid-tie-oscillation," << t << ",raw-hybrid-at-observed-symbol,"
        << format_double(p.raw[1]) << ",,,exact-tree,0\n";
  }
  result.csv = out.str();
  result.status = kStatusOk;
  return result;
}

ExperimentResult hybrid_exceeds_one() {
  WeightedClass cls = make_hybrid_excess_class();
  const SymbolString x = {0};
  const Prediction p =
      predict(cls, x, PredictionMode::Hybrid, TieBreak::WeightThenIndex);
  std::ostringstream out;
  out << kSeriesHeader;
  out << "hybrid-exceeds-one,1,hybrid-raw-entry," << format_double(p.raw[0])
      << ",,,exact-tree,0\n";
  return ExperimentResult{out.str(), kStatusOk};
}

ExperimentResult stabilization_entry(const std::string& id,
                                     const WeightedClass& cls,
                                     const SequenceSource& source, int horizon,
                                     TieBreak tb) {
  const StabilizationReport report =
      stabilization_report(cls, source, horizon, tb);
  std::ostringstream out;
  out << "experiment,t,switched,map_index\n";
  std::size_t s = 0;
  for (int t = 1; t <= horizon; ++t) {
    const bool switched = s < report.switch_times.size() &&
                          report.switch_times[s] == t;
    if (switched) ++s;
    out << id << ',' << t << ',' << (switched ? 1 : 0) << ','
        << (report.map_indices[static_cast<std::size_t>(t - 1)] + 1) << '\n';
  }
  return ExperimentResult{out.str(), kStatusOk};
}

// fraction of sampled sequences whose MAP choice is already final by step t
ExperimentResult stabilize_iid_entry(int sequences, int horizon,
                                     std::uint64_t seed) {
  WeightedClass cls = make_bernoulli5_class();
  std::vector<int> last_switch_count(static_cast<std::size_t>(horizon + 1), 0);
  for (int s = 0; s < sequences; ++s) {
    const auto report = stabilization_report(
        cls, SequenceSource::sampled(seed + static_cast<std::uint64_t>(s)),
        horizon, TieBreak::WeightThenIndex);
    const int last =
        report.switch_times.empty() ? 1 : report.switch_times.back();
    ++last_switch_count[static_cast<std::size_t>(last)];
  }
  std::ostringstream out;
  out << "experiment,t,stable_by_t_fraction,engine,seed\n";
  int acc = 0;
  for (int t = 1; t <= horizon; ++t) {
    acc += last_switch_count[static_cast<std::size_t>(t)];
    out << "stabilize-iid," << t << ','
        << format_double(static_cast<double>(acc) / sequences)
        << ",monte-carlo," << seed << '\n';
  }
  return ExperimentResult{out.str(), kStatusOk};
}

ExperimentResult normalizer_entry(const std::string& id,
                                  const WeightedClass& cls,
                                  const SequenceSource& source, int horizon) {
  const NormalizerConvergence conv =
      normalizer_convergence(cls, source, horizon);
  std::ostringstream out;
  out << "experiment,t,factor,partial_product\n";
  for (int t = 1; t <= horizon; ++t) {
    out << id << ',' << t << ','
        << format_double(conv.factors[static_cast<std::size_t>(t - 1)]) << ','
        << format_double(conv.partial_products[static_cast<std::size_t>(t - 1)])
        << '\n';
  }
  return ExperimentResult{out.str(), kStatusOk};
}

ExperimentResult cor6_all() {
  WeightedClass cls = make_bernoulli5_class();
  struct Row {
    const char* id;
    PredictionMode mode;
    bool normalized;
  };
  const Row rows[] = {
      {"cor6-dyn-norm", PredictionMode::Dynamic, true},
      {"cor6-dyn", PredictionMode::Dynamic, false},
      {"cor6-static", PredictionMode::Static, false},
      {"cor6-static-norm", PredictionMode::Static, true},
  };
  std::ostringstream out;
  out << kSeriesHeader;
  int status = kStatusOk;
  for (const Row& row : rows) {
    SeriesRequest req;
    req.mode = row.mode;
    req.normalized = row.normalized;
    req.metric = ErrorMetric::Squared;
    req.horizon = 12;
    ErrorSeries s = error_series(cls, req);
    // pin the matching corollary row (dynamic normalized otherwise gets the
    // tighter thm3 bound attached)
    s.bound_id = row.id;
    s.bound = bound_for(row.id, cls.true_weight());
    append_series_rows(out, row.id, req.metric, s);
    if (!s.bound_holds()) status = kStatusBoundViolation;
  }
  return ExperimentResult{out.str(), status};
}

// summary rows for the randomized property suites; exercised in depth by
// the test suite, surfaced here so the CLI can run them standalone
ExperimentResult lemma_suites();

}  // namespace

std::vector<std::string> registry_ids() {
  return {"thm1-mixture",       "thm3-dyn-norm",
          "thm4i-lognorm",      "thm4ii-absnorm",
          "thm5-static",        "cor6-all",
          "example-lowerbound", "hybrid-tie-oscillation",
          "hybrid-exceeds-one", "stabilize-example6",
          "stabilize-iid",      "normalizer-example5",
          "lemma-suites"};
}

ExperimentResult run_registry_experiment(const std::string& id) {
  if (id == "thm1-mixture") {
    return series_entry(id, make_lower_bound_class(8), PredictionMode::Mixture,
                        false, ErrorMetric::Squared, 12);
  }
  if (id == "thm3-dyn-norm") {
    return series_entry(id, make_lower_bound_class(8), PredictionMode::Dynamic,
                        true, ErrorMetric::Squared, 12);
  }
  if (id == "thm4i-lognorm") {
    return series_entry(id, make_lower_bound_class(8), PredictionMode::Dynamic,
                        false, ErrorMetric::AbsLogSum, 20);
  }
  if (id == "thm4ii-absnorm") {
    return series_entry(id, make_lower_bound_class(8), PredictionMode::Dynamic,
                        false, ErrorMetric::AbsSum, 20);
  }
  if (id == "thm5-static") {
    return series_entry(id, make_bernoulli5_class(), PredictionMode::Static,
                        false, ErrorMetric::AbsSum, 12);
  }
  if (id == "cor6-all") return cor6_all();
  if (id == "example-lowerbound") {
    return series_entry(id, make_lower_bound_class(8), PredictionMode::Dynamic,
                        true, ErrorMetric::Squared, 7);
  }
  if (id == "hybrid-tie-oscillation") return hybrid_oscillation(10);
  if (id == "hybrid-exceeds-one") return hybrid_exceeds_one();
  if (id == "stabilize-example6") {
    const SymbolString ones(60, 1);
    return stabilization_entry(id, make_oscillating_pair_class(),
                               SequenceSource::explicit_sequence(ones), 60,
                               TieBreak::WeightThenIndex);
  }
  if (id == "stabilize-iid") return stabilize_iid_entry(1000, 80, 20240);
  if (id == "normalizer-example5") {
    const SymbolString ones(20, 1);
    return normalizer_entry(id, make_lower_bound_class(8),
                            SequenceSource::explicit_sequence(ones), 20);
  }
  if (id == "lemma-suites") return lemma_suites();
  throw ValidationError("unknown experiment id '" + id + "'");
}

// ---------------------------------------------------------------------------
// invariant scans

namespace {

struct NodeScan {
  const WeightedClass& cls;
  int max_depth;
  std::size_t budget;
  std::size_t nodes = 0;
  std::vector<std::string>* violations;

  void report(const SymbolString& x, const std::string& what) {
    if (violations->size() < 20) {
      violations->push_back("node '" + format_symbols(x) + "': " + what);
    }
  }

  void visit(const ClassWalkers& w, SymbolString& x) {
    if (++nodes > budget) {
      throw BudgetError("check budget exceeded; lower the depth");
    }
    const int m = cls.alphabet().size;
    std::vector<ClassWalkers> kids;
    std::vector<NodeEval> child_evals;
    for (Symbol a = 0; a < m; ++a) {
      kids.push_back(w.child(a));
      child_evals.push_back(kids.back().node_eval());
    }
    const NodeEval node = w.node_eval();

    // per-model semimeasure conditions
    for (std::size_t i = 0; i < cls.size(); ++i) {
      const double vx = std::exp(node.log_model[i]);
      double child_sum = 0.0;
      for (Symbol a = 0; a < m; ++a) {
        const double va = std::exp(child_evals[static_cast<std::size_t>(a)]
                                       .log_model[i]);
        child_sum += va;
        if (va > vx + 1e-12) {
          report(x, "model '" + cls.entry(i).name + "' not monotone");
        }
      }
      const double def = vx - child_sum;
      if (def < -1e-12) {
        report(x, "model '" + cls.entry(i).name + "' deficiency " +
                      std::to_string(def));
      }
      if (cls.entry(i).model.is_measure() && std::abs(def) > 1e-12) {
        report(x, "measure '" + cls.entry(i).name + "' deficiency " +
                      std::to_string(def));
      }
    }

    // two-part vs mixture (both semimeasure inequalities)
    auto log_rho_of = [&](const NodeEval& e) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < cls.size(); ++i) {
        best = std::max(best, cls.entry(i).log_weight + e.log_model[i]);
      }
      return best;
    };
    const double xi_x = std::exp(log_mixture_from_values(cls, node));
    const double rho_x = std::exp(log_rho_of(node));
    if (rho_x > xi_x * (1.0 + 1e-12) + 1e-300) {
      report(x, "two-part value exceeds mixture");
    }
    double xi_children = 0.0;
    double rho_children = 0.0;
    double rho_static_children = 0.0;
    const std::size_t map_i = map_from_values(
        cls, node, static_cast<int>(x.size()), cls.tie_break());
    for (Symbol a = 0; a < m; ++a) {
      const auto& ce = child_evals[static_cast<std::size_t>(a)];
      xi_children += std::exp(log_mixture_from_values(cls, ce));
      rho_children += std::exp(log_rho_of(ce));
      rho_static_children +=
          std::exp(cls.entry(map_i).log_weight + ce.log_model[map_i]);
    }
    const double xi_def = xi_x - xi_children;
    if (rho_x - rho_children > xi_def + 1e-12) {
      report(x, "two-part deficiency exceeds mixture deficiency");
    }
    const double rho_static_x =
        std::exp(cls.entry(map_i).log_weight + node.log_model[map_i]);
    if (rho_static_x - rho_static_children > xi_def + 1e-12) {
      report(x, "static two-part deficiency exceeds mixture deficiency");
    }

    if (static_cast<int>(x.size()) < max_depth) {
      for (Symbol a = 0; a < m; ++a) {
        x.push_back(a);
        visit(kids[static_cast<std::size_t>(a)], x);
        x.pop_back();
      }
    }
  }
};

}  // namespace

CheckReport run_class_check(const WeightedClass& cls, int depth,
                            std::size_t node_budget) {
  if (depth < 0) throw ValidationError("depth must be >= 0");
  CheckReport report;
  NodeScan scan{cls, depth, node_budget, 0, &report.violations};
  SymbolString x;
  ClassWalkers w(cls);
  scan.visit(w, x);
  report.nodes = scan.nodes;
  return report;
}

// ---------------------------------------------------------------------------
// lemma suite summary (CLI surface; the full suites live in the tests)

namespace {

ExperimentResult lemma_suites() {
  // Deterministic spot runs of the class-level inequalities on the canned
  // classes, depth 6.
  const WeightedClass classes[] = {make_lower_bound_class(8),
                                   make_bernoulli5_class(),
                                   make_ambiguous_tie_class(),
                                   make_hybrid_excess_class()};
  std::ostringstream out;
  out << "experiment,suite,classes,nodes,max_violation,tolerance,status\n";
  std::size_t nodes = 0;
  std::size_t violations = 0;
  for (const WeightedClass& cls : classes) {
    const CheckReport r = run_class_check(cls, 6);
    nodes += r.nodes;
    violations += r.violations.size();
  }
  out << "lemma-suites,semimeasure-and-two-part,4," << nodes << ','
      << (violations == 0 ? "0" : std::to_string(violations)) << ",1e-12,"
      << (violations == 0 ? 0 : kStatusBoundViolation) << '\n';
  return ExperimentResult{
      out.str(), violations == 0 ? kStatusOk : kStatusBoundViolation};
}

}  // namespace

}  // namespace mdlseq
