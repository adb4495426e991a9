// Experiment runner for the boosted stochastic conditional-gradient toolkit.
//
// Subcommands:
//   run <config>         run an experiment described by a key=value file
//   compare <summary>    per-estimator boosted-vs-plain report from summary.csv
//   validate-estimators  enumerate-and-check the estimator error recursions
//   bounds               print a closed-form convergence bound value
//
// Exit codes: 0 success, 1 configuration error, 2 runtime invariant
// violation, 3 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "bsfw/experiment.hpp"
#include "bsfw/ingest.hpp"
#include "bsfw/recursion.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw bsfw::IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_command(const std::string& config_path, const std::map<std::string, std::string>& overrides) {
  bsfw::ExperimentConfig cfg = bsfw::parse_config_text(read_file(config_path));
  bsfw::apply_config_overrides(cfg, overrides);
  const auto out = bsfw::run_experiment(cfg);
  std::printf("wrote %zu trace files and %s\n", out.trace_files.size(), out.summary_file.string().c_str());
  return 0;
}

int compare_command(const std::string& summary_path) {
  const auto rows = bsfw::parse_summary_csv(read_file(summary_path));
  const auto report = bsfw::compare_summary(rows);
  std::fputs(bsfw::format_compare_report(report).c_str(), stdout);
  return 0;
}

int validate_command(int steps) {
  using bsfw::EstimatorKind;
  int failures = 0;
  std::printf("%-10s %-22s %12s %12s\n", "estimator", "instance", "err-ratio", "sig-ratio");
  for (EstimatorKind kind :
       {EstimatorKind::Full, EstimatorKind::Sag, EstimatorKind::Saga, EstimatorKind::Lsvrg,
        EstimatorKind::Sarah, EstimatorKind::Sega, EstimatorKind::Jaguar, EstimatorKind::Zoja,
        EstimatorKind::HeavyBall}) {
    bsfw::EstimatorConfig est;
    est.kind = kind;
    est.batch_size = 2;
    est.refresh_prob = 0.5;
    est.zo_step = 0.05;

    std::unique_ptr<bsfw::Problem> problem;
    std::string instance;
    if (kind == EstimatorKind::Sag) {
      bsfw::Dataset d = bsfw::synth_logistic(3, 4, 0.8, 11);
      problem = std::make_unique<bsfw::LogisticProblem>(std::move(d.features), std::move(d.labels));
      instance = "logistic m=4 n=3";
    } else {
      std::vector<bsfw::Vector> centers{{0.6, -0.2, 0.1}, {-0.4, 0.5, 0.0}, {0.2, 0.1, -0.7}, {0.0, -0.3, 0.4}};
      problem = std::make_unique<bsfw::QuadraticProblem>(std::move(centers));
      instance = "quadratic m=4 n=3";
    }
    const auto set = bsfw::ConstraintSet::l1_ball(1.5, problem->dim());
    const bsfw::Schedule sched =
        kind == EstimatorKind::HeavyBall
            ? bsfw::Schedule::heavy_ball_quasar(1.0)
            : bsfw::Schedule::stoch_quasar_anytime(1.0, 0.25, 0.25);
    const auto report = bsfw::measure_recursion(est, *problem, set, sched, steps, 5);
    const bool ok = report.passed();
    failures += ok ? 0 : 1;
    std::printf("%-10s %-22s %12.6g %12.6g %s\n", bsfw::estimator_name(kind).c_str(), instance.c_str(),
                report.max_error_ratio, report.max_sigma_ratio, ok ? "" : "FAIL");
  }
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boosted stochastic conditional-gradient experiments"};
  app.require_subcommand(1);

  std::string config_path, summary_path;
  std::map<std::string, std::string> overrides;
  auto add_override = [&overrides](const std::string& key) {
    return [&overrides, key](const std::string& v) { overrides[key] = v; };
  };

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "key = value experiment file")->required();
  run->add_option_function<std::string>("--tau", add_override("tau"), "constraint radius");
  run->add_option_function<std::string>("--K", add_override("K"), "max refinement rounds");
  run->add_option_function<std::string>("--delta", add_override("delta"), "alignment improvement tolerance");
  run->add_option_function<std::string>("--T", add_override("T"), "iteration count");
  run->add_option_function<std::string>("--estimator", add_override("estimator"), "estimator list");
  run->add_option_function<std::string>("--schedule", add_override("schedule"), "step decay kind");
  run->add_option_function<std::string>("--seed", add_override("seed"), "seed list");
  run->add_option_function<std::string>("--batch", add_override("batch"), "batch size");
  run->add_option_function<std::string>("--p", add_override("p"), "refresh probability");
  run->add_option_function<std::string>("--tau-zo", add_override("tau_zo"), "forward-difference width");
  run->add_option_function<std::string>("--out", add_override("out"), "output directory");

  auto* cmp = app.add_subcommand("compare", "boosted-vs-plain report from a summary.csv");
  cmp->add_option("summary", summary_path, "summary.csv path")->required();

  int validate_steps = 20;
  auto* val = app.add_subcommand("validate-estimators", "check the estimator error recursions");
  val->add_option("--steps", validate_steps, "measured trajectory steps");

  std::string bound_kind = "t1";
  bsfw::BoundInputs bi;
  long bound_t = 1;
  auto* bounds = app.add_subcommand("bounds", "print a closed-form convergence bound");
  bounds->add_option("--kind", bound_kind, "t1|t2|t5|hbncv")->required();
  bounds->add_option("--F0", bi.F0)->required();
  bounds->add_option("--L", bi.L)->required();
  bounds->add_option("--D", bi.D)->required();
  bounds->add_option("--rho", bi.rho);
  bounds->add_option("--rho1", bi.rho1);
  bounds->add_option("--rho2", bi.rho2);
  bounds->add_option("--A", bi.A);
  bounds->add_option("--B", bi.B);
  bounds->add_option("--C", bi.C);
  bounds->add_option("--E", bi.E);
  bounds->add_option("--Mh", bi.Mh);
  bounds->add_option("--t", bound_t, "iteration index (horizon for t5/hbncv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, overrides);
    if (*cmp) return compare_command(summary_path);
    if (*val) return validate_command(validate_steps);
    if (*bounds) {
      bsfw::BoundKind kind;
      if (bound_kind == "t1" || bound_kind == "det-quasar") kind = bsfw::BoundKind::DetQuasarRate;
      else if (bound_kind == "t2" || bound_kind == "det-nonconvex") kind = bsfw::BoundKind::DetNonconvexRate;
      else if (bound_kind == "t5" || bound_kind == "stoch-nonconvex") kind = bsfw::BoundKind::StochNonconvexRate;
      else if (bound_kind == "hbncv" || bound_kind == "hb-nonconvex") kind = bsfw::BoundKind::HeavyBallNonconvexRate;
      else throw bsfw::ConfigError("bounds: unknown kind '" + bound_kind + "'");
      std::printf("%s\n", bsfw::csv_double(bsfw::theorem_bound(kind, bi, bound_t)).c_str());
      return 0;
    }
  } catch (const bsfw::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const bsfw::DimensionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const bsfw::InvariantViolation& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return 2;
  } catch (const bsfw::ConvergenceError& e) {
    std::fprintf(stderr, "convergence failure: %s\n", e.what());
    return 2;
  } catch (const bsfw::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 3;
  } catch (const bsfw::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  }
  return 0;
}
