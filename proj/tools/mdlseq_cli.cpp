// SPDX-License-Identifier: Apache-2.0
//
// mdlseq command line: next-symbol prediction, error-series evaluation, the
// named experiment registry, and class invariant checks.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mdlseq/class_config.hpp"
#include "mdlseq/engines.hpp"
#include "mdlseq/errors.hpp"
#include "mdlseq/experiments.hpp"
#include "mdlseq/predictors.hpp"

namespace {

using namespace mdlseq;

std::string format_value(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file '" + out_path + "'");
  out << text;
}

int run(int argc, char** argv) {
  CLI::App app{"Bayes-mixture and two-part MDL sequence prediction"};
  app.require_subcommand(1);

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "next-symbol prediction");
  std::string class_path, x_text, mode_name = "mixture", tie_break_name;
  bool normalized = false;
  predict_cmd->add_option("--class", class_path, "class config file")->required();
  predict_cmd->add_option("--x", x_text, "observed string, e.g. 0110");
  predict_cmd->add_option("--mode", mode_name,
                          "mixture|dynamic|static|hybrid");
  predict_cmd->add_flag("--normalized", normalized,
                        "print the normalized vector");
  predict_cmd->add_option("--tie-break", tie_break_name,
                          "weight-then-index|index|alternating");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "ad-hoc error series");
  std::string metric_name = "squared", engine_name = "exact-tree", out_path;
  int horizon = 10;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  eval_cmd->add_option("--class", class_path, "class config file")->required();
  eval_cmd->add_option("--mode", mode_name, "mixture|dynamic|static|hybrid");
  eval_cmd->add_flag("--normalized", normalized, "evaluate normalized predictions");
  eval_cmd->add_option("--metric", metric_name, "squared|abs-sum|abs-log-sum|kl");
  eval_cmd->add_option("--n", horizon, "horizon");
  eval_cmd->add_option("--engine", engine_name,
                       "exact-tree|exact-counts|monte-carlo");
  eval_cmd->add_option("--samples", samples, "monte-carlo sample count");
  eval_cmd->add_option("--seed", seed, "monte-carlo seed");
  eval_cmd->add_option("--tie-break", tie_break_name, "tie-break strategy");
  eval_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a registry entry");
  std::string exp_id;
  bool list_ids = false;
  exp_cmd->add_option("--id", exp_id, "experiment id");
  exp_cmd->add_flag("--list", list_ids, "list registry ids");
  exp_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

  // check
  auto* check_cmd = app.add_subcommand("check", "class invariant scan");
  int depth = 8;
  check_cmd->add_option("--class", class_path, "class config file")->required();
  check_cmd->add_option("--depth", depth, "scan depth");

  CLI11_PARSE(app, argc, argv);

  if (predict_cmd->parsed()) {
    const WeightedClass cls = load_class_config(class_path);
    const TieBreak tb = tie_break_name.empty() ? cls.tie_break()
                                               : parse_tie_break(tie_break_name);
    const SymbolString x = parse_symbols(x_text, cls.alphabet());
    const Prediction p = predict(cls, x, parse_mode(mode_name), tb);
    const auto& values = normalized ? p.normalized : p.raw;
    for (std::size_t a = 0; a < values.size(); ++a) {
      if (a) std::cout << ' ';
      std::cout << a << ':' << format_value(values[a]);
    }
    std::cout << '\n';
    return kStatusOk;
  }

  if (eval_cmd->parsed()) {
    const WeightedClass cls = load_class_config(class_path);
    SeriesRequest req;
    req.mode = parse_mode(mode_name);
    req.normalized = normalized;
    req.metric = parse_metric(metric_name);
    req.horizon = horizon;
    req.engine = parse_engine(engine_name);
    req.samples = samples;
    req.seed = seed;
    req.tie_break = tie_break_name.empty() ? cls.tie_break()
                                           : parse_tie_break(tie_break_name);
    const ExperimentResult result = run_series_experiment("adhoc", cls, req);
    write_output(result.csv, out_path);
    return result.status;
  }

  if (exp_cmd->parsed()) {
    if (list_ids) {
      for (const auto& id : registry_ids()) std::cout << id << '\n';
      return kStatusOk;
    }
    if (exp_id.empty()) {
      throw ValidationError("experiment: --id or --list required");
    }
    const ExperimentResult result = run_registry_experiment(exp_id);
    write_output(result.csv, out_path);
    return result.status;
  }

  // check
  const WeightedClass cls = load_class_config(class_path);
  const CheckReport report = run_class_check(cls, depth);
  std::cout << "checked " << report.nodes << " nodes to depth " << depth
            << '\n';
  if (!report.ok()) {
    for (const auto& v : report.violations) std::cerr << "violation: " << v << '\n';
    return kStatusBoundViolation;
  }
  return kStatusOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStatusBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStatusValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStatusValidation;
  }
}
