#include "bsfw/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bsfw/ingest.hpp"

namespace bsfw {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + v);
  }
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") {
    if (value == "synth_logistic") cfg.problem = ProblemSource::SynthLogistic;
    else if (value == "synth_completion") cfg.problem = ProblemSource::SynthCompletion;
    else if (value == "libsvm") cfg.problem = ProblemSource::LibsvmFile;
    else throw ConfigError("config: unknown problem '" + value + "'");
  } else if (key == "dataset") {
    cfg.dataset_path = value;
  } else if (key == "n") {
    cfg.n = static_cast<int>(to_int(key, value));
  } else if (key == "m") {
    cfg.m = static_cast<int>(to_int(key, value));
  } else if (key == "sparsity") {
    cfg.sparsity = to_double(key, value);
  } else if (key == "rows") {
    cfg.rows = static_cast<int>(to_int(key, value));
  } else if (key == "cols") {
    cfg.cols = static_cast<int>(to_int(key, value));
  } else if (key == "omega") {
    cfg.omega = static_cast<int>(to_int(key, value));
  } else if (key == "rank") {
    cfg.rank = static_cast<int>(to_int(key, value));
  } else if (key == "noise") {
    cfg.noise = to_double(key, value);
  } else if (key == "data_seed") {
    cfg.data_seed = static_cast<std::uint64_t>(to_int(key, value));
  } else if (key == "tau") {
    cfg.tau = to_double(key, value);
  } else if (key == "estimators" || key == "estimator") {
    cfg.estimators.clear();
    for (const auto& name : split(value, ',')) {
      const auto k = estimator_from_name(name);
      if (!k) throw ConfigError("config: unknown estimator '" + name + "'");
      cfg.estimators.push_back(*k);
    }
  } else if (key == "schedule") {
    cfg.schedule = value;
  } else if (key == "rho") {
    cfg.rho = to_double(key, value);
  } else if (key == "eta") {
    cfg.eta_const = to_double(key, value);
  } else if (key == "rho1") {
    cfg.rho1_override = to_double(key, value);
  } else if (key == "rho2") {
    cfg.rho2_override = to_double(key, value);
  } else if (key == "K") {
    cfg.max_rounds = static_cast<int>(to_int(key, value));
  } else if (key == "delta") {
    cfg.delta = to_double(key, value);
  } else if (key == "T") {
    cfg.iterations = static_cast<long>(to_int(key, value));
  } else if (key == "epochs") {
    cfg.epochs = to_double(key, value);
  } else if (key == "batch") {
    cfg.batch = static_cast<int>(to_int(key, value));
  } else if (key == "p") {
    cfg.p = to_double(key, value);
  } else if (key == "tau_zo") {
    cfg.tau_zo = to_double(key, value);
  } else if (key == "seeds" || key == "seed") {
    cfg.seeds.clear();
    for (const auto& s : split(value, ','))
      cfg.seeds.push_back(static_cast<std::uint64_t>(to_int(key, s)));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "record_gap") {
    cfg.record_gap = to_int(key, value) != 0;
  } else if (key == "record_delta") {
    cfg.record_error_sq = to_int(key, value) != 0;
  } else if (key == "methods") {
    if (value == "both") cfg.methods = MethodSelection::Both;
    else if (value == "bsfw") cfg.methods = MethodSelection::BoostedOnly;
    else if (value == "sfw") cfg.methods = MethodSelection::PlainOnly;
    else throw ConfigError("config: unknown methods value '" + value + "'");
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

void validate_config(const ExperimentConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw ConfigError("config: 'tau' must be positive");
  if (cfg.estimators.empty()) throw ConfigError("config: need at least one estimator");
  if (cfg.seeds.empty()) throw ConfigError("config: need at least one seed");
  if (cfg.max_rounds < 1) throw ConfigError("config: 'K' must be >= 1");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) throw ConfigError("config: 'delta' must lie in ]0,1]");
  if (cfg.iterations < 0) throw ConfigError("config: 'T' must be >= 0");
  if (cfg.epochs < 0.0) throw ConfigError("config: 'epochs' must be >= 0");
  if (cfg.iterations == 0 && cfg.epochs == 0.0) throw ConfigError("config: set 'T' or 'epochs'");
  if (cfg.batch < 1) throw ConfigError("config: 'batch' must be >= 1");
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw ConfigError("config: 'p' must lie in ]0,1]");
  if (!(cfg.tau_zo > 0.0)) throw ConfigError("config: 'tau_zo' must be positive");
  if (!(cfg.sparsity > 0.0 && cfg.sparsity <= 1.0)) throw ConfigError("config: 'sparsity' must lie in ]0,1]");
  if (cfg.problem == ProblemSource::LibsvmFile && cfg.dataset_path.empty())
    throw ConfigError("config: 'dataset' is required for libsvm problems");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value' on line " + std::to_string(line_no));
    apply_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  validate_config(cfg);
  return cfg;
}

void apply_config_overrides(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) apply_key(cfg, key, value);
  validate_config(cfg);
}

Schedule resolve_schedule(const ExperimentConfig& cfg, const EstimatorConfig& est, int dim,
                          int num_components, long horizon_hint) {
  const std::string& s = cfg.schedule;
  auto contraction_pair = [&]() {
    double r1 = cfg.rho1_override, r2 = cfg.rho2_override;
    if (r1 <= 0.0 || r2 <= 0.0) {
      const EstimatorParams par =
          estimator_recursion_params(est, 1.0, dim, num_components, std::max(horizon_hint, 1L));
      if (r1 <= 0.0) r1 = par.rho1;
      if (r2 <= 0.0) r2 = par.rho2;
    }
    return std::pair{r1, r2};
  };

  if (s == "auto") {
    if (est.kind == EstimatorKind::Full) return Schedule::det_quasar(cfg.rho);
    if (est.kind == EstimatorKind::HeavyBall) return Schedule::heavy_ball_quasar(cfg.rho);
    const auto [r1, r2] = contraction_pair();
    return Schedule::stoch_quasar_anytime(cfg.rho, r1, r2);
  }
  const bool horizon_kind = s == "det_ncv_horizon" || s == "stoch_quasar_horizon" || s == "stoch_ncv_horizon";
  if (horizon_kind && horizon_hint < 1)
    throw ConfigError("config: schedule '" + s + "' needs an explicit 'T'");
  if (s == "det_quasar") return Schedule::det_quasar(cfg.rho);
  if (s == "det_ncv_anytime") return Schedule::det_nonconvex_anytime();
  if (s == "det_ncv_horizon") return Schedule::det_nonconvex_horizon(horizon_hint);
  if (s == "stoch_quasar_horizon") {
    const auto [r1, r2] = contraction_pair();
    return Schedule::stoch_quasar_horizon(cfg.rho, r1, r2, horizon_hint);
  }
  if (s == "stoch_quasar_anytime") {
    const auto [r1, r2] = contraction_pair();
    return Schedule::stoch_quasar_anytime(cfg.rho, r1, r2);
  }
  if (s == "stoch_ncv_horizon") return Schedule::stoch_nonconvex_horizon(horizon_hint);
  if (s == "stoch_ncv_anytime") return Schedule::stoch_nonconvex_anytime();
  if (s == "hb_quasar") return Schedule::heavy_ball_quasar(cfg.rho);
  if (s == "hb_ncv") return Schedule::heavy_ball_nonconvex();
  if (s == "constant") return Schedule::constant(cfg.eta_const);
  throw ConfigError("config: unknown schedule '" + s + "'");
}

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const RunRecord& rec, const std::string& run_id, const std::string& estimator,
                      std::uint64_t seed) {
  std::string out = "run_id,estimator,seed,t,loss,eta,gamma,boosted,k_t,lmo_calls_cum,grad_samples_cum,gap\n";
  for (const auto& r : rec.rows) {
    out += run_id;
    out += ',';
    out += estimator;
    out += ',';
    out += std::to_string(seed);
    out += ',';
    out += std::to_string(r.t);
    out += ',';
    out += csv_double(r.loss);
    out += ',';
    out += csv_double(r.eta);
    out += ',';
    out += csv_double(r.gamma);
    out += ',';
    out += r.boosted ? "1" : "0";
    out += ',';
    out += std::to_string(r.rounds);
    out += ',';
    out += std::to_string(r.lmo_calls_cum);
    out += ',';
    out += std::to_string(r.samples_cum);
    out += ',';
    if (rec.gap_recorded) out += csv_double(r.gap);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "estimator,method,seed,final_loss,boosting_percentage,total_lmo_calls,total_grad_samples\n";
  for (const auto& r : rows) {
    out += r.estimator;
    out += ',';
    out += r.method;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += csv_double(r.final_loss);
    out += ',';
    out += csv_double(r.boosting_percentage);
    out += ',';
    out += std::to_string(r.total_lmo_calls);
    out += ',';
    out += std::to_string(r.total_grad_samples);
    out += '\n';
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("summary: empty file");
  std::vector<SummaryRow> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw ConfigError("summary: bad column count on line " + std::to_string(line_no));
    SummaryRow r;
    r.estimator = f[0];
    r.method = f[1];
    r.seed = static_cast<std::uint64_t>(to_int("seed", f[2]));
    r.final_loss = to_double("final_loss", f[3]);
    r.boosting_percentage = to_double("boosting_percentage", f[4]);
    r.total_lmo_calls = to_int("total_lmo_calls", f[5]);
    r.total_grad_samples = to_int("total_grad_samples", f[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

struct BuiltProblem {
  std::unique_ptr<Problem> problem;
  ConstraintSet set;
};

BuiltProblem build_problem(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemSource::SynthLogistic: {
      Dataset d = synth_logistic(cfg.n, cfg.m, cfg.sparsity, cfg.data_seed);
      auto p = std::make_unique<LogisticProblem>(std::move(d.features), std::move(d.labels));
      const int dim = p->dim();
      return {std::move(p), ConstraintSet::l1_ball(cfg.tau, dim)};
    }
    case ProblemSource::SynthCompletion: {
      auto p = synth_completion(cfg.rows, cfg.cols, cfg.omega, cfg.rank, cfg.data_seed, cfg.noise);
      const int r = p->rows(), c = p->cols();
      return {std::move(p), ConstraintSet::nuclear_ball(cfg.tau, r, c)};
    }
    case ProblemSource::LibsvmFile: {
      Dataset d = load_libsvm_file(cfg.dataset_path);
      auto p = std::make_unique<LogisticProblem>(std::move(d.features), std::move(d.labels));
      const int dim = p->dim();
      return {std::move(p), ConstraintSet::l1_ball(cfg.tau, dim)};
    }
  }
  throw ConfigError("config: unknown problem source");
}

EstimatorConfig make_estimator_config(const ExperimentConfig& cfg, EstimatorKind kind) {
  EstimatorConfig e;
  e.kind = kind;
  e.batch_size = cfg.batch;
  e.refresh_prob = cfg.p;
  e.zo_step = cfg.tau_zo;
  return e;
}

}  // namespace

ExperimentOutputs run_experiment(const ExperimentConfig& cfg) {
  const BuiltProblem built = build_problem(cfg);
  const Problem& problem = *built.problem;

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir);

  ExperimentOutputs outputs;
  for (EstimatorKind kind : cfg.estimators) {
    const EstimatorConfig est = make_estimator_config(cfg, kind);
    SolverConfig run_cfg;
    run_cfg.estimator = est;
    run_cfg.boost.max_rounds = cfg.max_rounds;
    run_cfg.boost.tolerance = cfg.delta;
    run_cfg.iterations = cfg.iterations;
    if (cfg.epochs > 0.0)
      run_cfg.sample_budget = static_cast<long long>(cfg.epochs * problem.num_components());
    run_cfg.record_gap = cfg.record_gap;
    run_cfg.record_error_sq = cfg.record_error_sq;
    run_cfg.schedule =
        resolve_schedule(cfg, est, problem.dim(), problem.num_components(), cfg.iterations);

    for (const char* method : {"bsfw", "sfw"}) {
      if (cfg.methods == MethodSelection::BoostedOnly && std::string(method) == "sfw") continue;
      if (cfg.methods == MethodSelection::PlainOnly && std::string(method) == "bsfw") continue;
      for (std::uint64_t seed : cfg.seeds) {
        run_cfg.seed = seed;
        const RunRecord rec = std::string(method) == "bsfw" ? run_bsfw(problem, built.set, run_cfg)
                                                            : run_sfw(problem, built.set, run_cfg);
        const std::string name = estimator_name(kind);
        const std::string run_id = name + "-" + method + "-s" + std::to_string(seed);
        const auto path = std::filesystem::path(cfg.out_dir) /
                          ("trace_" + name + "_" + method + "_s" + std::to_string(seed) + ".csv");
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write " + path.string());
        f << trace_csv(rec, run_id, name, seed);
        outputs.trace_files.push_back(path);

        SummaryRow row;
        row.estimator = name;
        row.method = method;
        row.seed = seed;
        row.final_loss = rec.final_loss;
        row.boosting_percentage = rec.boosting_percentage;
        row.total_lmo_calls = rec.total_lmo_calls;
        row.total_grad_samples = rec.total_samples;
        outputs.summary.push_back(std::move(row));
      }
    }
  }

  outputs.summary_file = std::filesystem::path(cfg.out_dir) / "summary.csv";
  std::ofstream f(outputs.summary_file, std::ios::binary);
  if (!f) throw IoError("cannot write " + outputs.summary_file.string());
  f << summary_csv(outputs.summary);
  return outputs;
}

namespace {
double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}
}  // namespace

std::vector<CompareRow> compare_summary(const std::vector<SummaryRow>& rows) {
  if (rows.empty()) throw ConfigError("compare: empty summary");
  std::vector<std::string> order;
  std::map<std::string, std::map<std::uint64_t, std::pair<double, double>>> cell;  // est -> seed -> (b, s)
  std::map<std::string, std::map<std::uint64_t, int>> seen;
  std::map<std::string, std::vector<double>> boost_pct;
  for (const auto& r : rows) {
    if (std::find(order.begin(), order.end(), r.estimator) == order.end()) order.push_back(r.estimator);
    auto& slot = cell[r.estimator][r.seed];
    auto& mask = seen[r.estimator][r.seed];
    if (r.method == "bsfw") {
      if (mask & 1) throw ConfigError("compare: duplicate boosted row for " + r.estimator);
      slot.first = r.final_loss;
      mask |= 1;
      boost_pct[r.estimator].push_back(r.boosting_percentage);
    } else if (r.method == "sfw") {
      if (mask & 2) throw ConfigError("compare: duplicate plain row for " + r.estimator);
      slot.second = r.final_loss;
      mask |= 2;
    } else {
      throw ConfigError("compare: unknown method '" + r.method + "'");
    }
  }

  std::vector<CompareRow> out;
  for (const auto& name : order) {
    CompareRow c;
    c.estimator = name;
    std::vector<double> b, s;
    for (const auto& [seed, mask] : seen[name]) {
      if (mask != 3)
        throw ConfigError("compare: unmatched method pair for " + name + " seed " + std::to_string(seed));
      const auto& [bl, sl] = cell[name][seed];
      b.push_back(bl);
      s.push_back(sl);
      if (bl < sl) ++c.wins;
      else if (bl == sl) ++c.ties;
      else ++c.losses;
    }
    c.median_boosted = median(b);
    c.median_plain = median(s);
    c.boosted_median_worse = c.median_boosted > c.median_plain;
    double acc = 0.0;
    for (double v : boost_pct[name]) acc += v;
    c.mean_boosting_percentage = boost_pct[name].empty() ? 0.0 : acc / boost_pct[name].size();
    out.push_back(std::move(c));
  }
  return out;
}

std::string format_compare_report(const std::vector<CompareRow>& rows) {
  std::string out = "estimator  median(bsfw)  median(sfw)  wins  ties  losses  boost%  flag\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %.6e  %.6e  %4d  %4d  %6d  %6.2f  %s\n", r.estimator.c_str(),
                  r.median_boosted, r.median_plain, r.wins, r.ties, r.losses, r.mean_boosting_percentage,
                  r.boosted_median_worse ? "bsfw-median-worse" : "ok");
    out += buf;
  }
  return out;
}

}  // namespace bsfw
