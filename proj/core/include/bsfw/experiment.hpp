#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bsfw/solver.hpp"

namespace bsfw {

enum class ProblemSource { SynthLogistic, SynthCompletion, LibsvmFile };
enum class MethodSelection { Both, BoostedOnly, PlainOnly };

// Fully validated experiment description parsed from "key = value" text.
struct ExperimentConfig {
  ProblemSource problem = ProblemSource::SynthLogistic;
  std::string dataset_path;
  int n = 10;
  int m = 200;
  double sparsity = 0.5;
  int rows = 12, cols = 10, omega = 40, rank = 2;
  double noise = 0.1;
  std::uint64_t data_seed = 42;

  double tau = 1.0;
  std::vector<EstimatorKind> estimators{EstimatorKind::Full};
  std::string schedule = "auto";
  double rho = 1.0;
  double eta_const = 0.5;
  double rho1_override = 0.0;  // 0 = take from the estimator constants
  double rho2_override = 0.0;

  int max_rounds = 10000;   // K
  double delta = 1e-4;
  long iterations = 1000;   // T
  double epochs = 0.0;      // when > 0, run to this sample budget (in multiples of m)
  int batch = 1;
  double p = 0.5;
  double tau_zo = 1e-3;

  std::vector<std::uint64_t> seeds{1};
  std::string out_dir = "out";
  bool record_gap = false;
  bool record_error_sq = false;
  MethodSelection methods = MethodSelection::Both;
};

// Parses "key = value" lines; '#' starts a comment line; unknown keys and
// out-of-range values raise ConfigError naming the key.
ExperimentConfig parse_config_text(const std::string& text);
// Applies CLI-style overrides on top of a parsed config (same keys).
void apply_config_overrides(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv);

// Step-decay selection: explicit kind, or "auto" which picks the estimator's
// own guarantee (exact gradient: the quasar decay; momentum: its own pair;
// everything else: the any-time stochastic quasar decay with the estimator's
// contraction constants).
Schedule resolve_schedule(const ExperimentConfig& cfg, const EstimatorConfig& est, int dim,
                          int num_components, long horizon_hint);

// CSV float formatting used everywhere: 17 significant digits.
std::string csv_double(double v);

struct SummaryRow {
  std::string estimator;
  std::string method;  // "bsfw" | "sfw"
  std::uint64_t seed = 0;
  double final_loss = 0.0;
  double boosting_percentage = 0.0;
  long long total_lmo_calls = 0;
  long long total_grad_samples = 0;
};

struct ExperimentOutputs {
  std::vector<std::filesystem::path> trace_files;
  std::filesystem::path summary_file;
  std::vector<SummaryRow> summary;
};

// Runs every (estimator, method, seed) cell, writes one trace CSV per cell
// plus summary.csv, deterministically ordered and byte-stable for a fixed
// config. The trace schema is:
//   run_id,estimator,seed,t,loss,eta,gamma,boosted,k_t,lmo_calls_cum,grad_samples_cum,gap
ExperimentOutputs run_experiment(const ExperimentConfig& cfg);

std::string trace_csv(const RunRecord& rec, const std::string& run_id, const std::string& estimator,
                      std::uint64_t seed);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(const std::string& text);

struct CompareRow {
  std::string estimator;
  double median_boosted = 0.0;
  double median_plain = 0.0;
  int wins = 0;    // seeds where the boosted run ends strictly lower
  int ties = 0;
  int losses = 0;
  double mean_boosting_percentage = 0.0;
  bool boosted_median_worse = false;
};

// Per-estimator comparison of matched boosted/plain pairs at equal budgets;
// unmatched pairs or an empty summary raise ConfigError.
std::vector<CompareRow> compare_summary(const std::vector<SummaryRow>& rows);
std::string format_compare_report(const std::vector<CompareRow>& rows);

}  // namespace bsfw
