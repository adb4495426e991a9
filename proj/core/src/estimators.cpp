#include "bsfw/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace bsfw {

std::string estimator_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::Full: return "full";
    case EstimatorKind::Sag: return "sag";
    case EstimatorKind::Saga: return "saga";
    case EstimatorKind::Lsvrg: return "lsvrg";
    case EstimatorKind::Sarah: return "sarah";
    case EstimatorKind::Sega: return "sega";
    case EstimatorKind::Jaguar: return "jaguar";
    case EstimatorKind::Zoja: return "zoja";
    case EstimatorKind::HeavyBall: return "heavyball";
  }
  return "unknown";
}

std::optional<EstimatorKind> estimator_from_name(const std::string& name) {
  for (EstimatorKind k : {EstimatorKind::Full, EstimatorKind::Sag, EstimatorKind::Saga,
                          EstimatorKind::Lsvrg, EstimatorKind::Sarah, EstimatorKind::Sega,
                          EstimatorKind::Jaguar, EstimatorKind::Zoja, EstimatorKind::HeavyBall})
    if (estimator_name(k) == name) return k;
  return std::nullopt;
}

void EstimatorConfig::validate(int num_components, int dim) const {
  (void)dim;
  const bool batched = kind == EstimatorKind::Sag || kind == EstimatorKind::Saga ||
                       kind == EstimatorKind::Lsvrg || kind == EstimatorKind::Sarah ||
                       kind == EstimatorKind::HeavyBall;
  if (batched && (batch_size < 1 || batch_size > num_components))
    throw ConfigError("estimator: batch size must lie in [1, m]");
  if ((kind == EstimatorKind::Lsvrg || kind == EstimatorKind::Sarah) &&
      !(refresh_prob > 0.0 && refresh_prob <= 1.0))
    throw ConfigError("estimator: refresh probability must lie in ]0,1]");
  if (kind == EstimatorKind::Zoja && !(zo_step > 0.0))
    throw ConfigError("estimator: forward-difference width must be positive");
}

EstimatorParams estimator_recursion_params(const EstimatorConfig& cfg, double lipschitz, int dim,
                                           int num_components, long horizon) {
  const double L2 = lipschitz * lipschitz;
  const double n = static_cast<double>(dim);
  const double m = static_cast<double>(num_components);
  const double b = static_cast<double>(cfg.batch_size);
  const double p = cfg.refresh_prob;
  EstimatorParams out;
  switch (cfg.kind) {
    case EstimatorKind::Full:
      break;  // exact gradient: zero error, everything contracts in one step
    case EstimatorKind::Sag:
      out.rho1 = b / (2.0 * m);
      out.B = (1.0 - b / m) * (1.0 + 2.0 * m / b) * L2;
      break;
    case EstimatorKind::Saga:
      out.rho2 = b / (2.0 * m);
      out.A = 1.0 / b + 1.0 / (2.0 * m);
      out.B = L2 / (b * m) * (1.0 + 2.0 * m / b);
      out.E = 2.0 * m / b * L2;
      break;
    case EstimatorKind::Lsvrg:
      out.rho2 = p / 2.0;
      out.A = L2 / b - p * L2 / (2.0 * b);
      out.B = 8.0 * L2 / (p * b);
      out.E = 8.0 / p;
      break;
    case EstimatorKind::Sarah:
      out.rho1 = p;
      out.B = (1.0 - p) / b * L2;
      break;
    case EstimatorKind::Sega:
      out.rho2 = 1.0 / (2.0 * n);
      out.A = n;
      out.B = n * n * L2;
      out.E = 3.0 * L2 * n;
      break;
    case EstimatorKind::Jaguar:
      out.rho1 = 1.0 / (2.0 * n);
      out.B = 3.0 * n * L2;
      break;
    case EstimatorKind::Zoja:
      out.rho1 = 1.0 / (4.0 * n);
      out.B = 3.0 * n * L2;
      out.C = 2.0 * n * L2 * cfg.zo_step * cfg.zo_step;
      break;
    case EstimatorKind::HeavyBall: {
      if (horizon < 1) throw ConfigError("estimator params: HeavyBall needs a horizon");
      const double rho_T = 4.0 / std::pow(static_cast<double>(horizon + 8), 2.0 / 3.0);
      out.rho1 = rho_T / 2.0;
      out.rho2 = 1.0 - std::pow(1.0 - 1.0 / static_cast<double>(horizon + 8), 4.0 / 3.0);
      out.A = 1.0;
      out.B = 2.0 * L2 / rho_T;
      break;
    }
  }
  return out;
}

double mapped_l1_diameter(const SparseRowMatrix& a, double tau) {
  const int n = a.cols();
  std::vector<Vector> cols(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Vector e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(j)] = tau;
    cols[static_cast<std::size_t>(j)] = a.multiply(e);
  }
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    best = std::max(best, 2.0 * norm2(cols[static_cast<std::size_t>(i)]));
    for (int j = i + 1; j < n; ++j)
      for (double sign : {1.0, -1.0}) {
        Vector d = cols[static_cast<std::size_t>(i)];
        axpy(-sign, cols[static_cast<std::size_t>(j)], d);
        best = std::max(best, norm2(d));
      }
  }
  return best;
}

void Estimator::require_components(const Problem& p) const {
  if (cfg_.batch_size > p.num_components()) throw ConfigError("estimator: batch size exceeds component count");
}

Vector Estimator::batch_mean_component_grad(const Problem& p, const std::vector<int>& batch,
                                            const Vector& x) const {
  Vector acc(static_cast<std::size_t>(p.dim()), 0.0);
  Vector g(static_cast<std::size_t>(p.dim()));
  for (int i : batch) {
    p.component_grad(i, x, g);
    axpy(1.0, g, acc);
  }
  scale(acc, 1.0 / static_cast<double>(batch.size()));
  return acc;
}

Estimator::Estimator(const EstimatorConfig& cfg, const Problem& p, const Vector& x0, std::uint64_t seed)
    : cfg_(cfg), rng_(seed) {
  cfg_.validate(p.num_components(), p.dim());
  const int n = p.dim();
  const int m = p.num_components();
  switch (cfg_.kind) {
    case EstimatorKind::Full:
      m_ = p.gradient(x0);
      init_samples_ = m;
      break;
    case EstimatorKind::Saga: {
      table_.assign(static_cast<std::size_t>(m), Vector());
      table_mean_.assign(static_cast<std::size_t>(n), 0.0);
      Vector g(static_cast<std::size_t>(n));
      for (int i = 0; i < m; ++i) {
        p.component_grad(i, x0, g);
        table_[static_cast<std::size_t>(i)] = g;
        axpy(1.0, g, table_mean_);
      }
      scale(table_mean_, 1.0 / m);
      m_ = table_mean_;
      init_samples_ = m;
      break;
    }
    case EstimatorKind::Lsvrg:
      w_ = x0;
      grad_w_ = p.gradient(x0);
      m_ = grad_w_;
      init_samples_ = m;
      break;
    case EstimatorKind::Sarah:
    case EstimatorKind::Jaguar:
      m_ = p.gradient(x0);
      init_samples_ = m;
      break;
    case EstimatorKind::Sega:
      h_ = p.gradient(x0);
      m_ = h_;
      init_samples_ = m;
      break;
    case EstimatorKind::Zoja: {
      // Forward differences across every coordinate seed the estimate.
      m_.assign(static_cast<std::size_t>(n), 0.0);
      const double f0 = p.value(x0);
      Vector shifted = x0;
      for (int j = 0; j < n; ++j) {
        shifted[static_cast<std::size_t>(j)] += cfg_.zo_step;
        m_[static_cast<std::size_t>(j)] = (p.value(shifted) - f0) / cfg_.zo_step;
        shifted[static_cast<std::size_t>(j)] = x0[static_cast<std::size_t>(j)];
      }
      init_samples_ = n + 1;
      break;
    }
    case EstimatorKind::HeavyBall:
      m_.assign(static_cast<std::size_t>(n), 0.0);
      init_samples_ = 0;
      break;
    case EstimatorKind::Sag: {
      if (!p.has_linear_structure())
        throw ConfigError("estimator: the dual-averaging kind needs a problem of the form ftilde(A x)");
      const auto* A = p.linear_map();
      alpha_.assign(static_cast<std::size_t>(m), 0.0);
      for (int i = 0; i < m; ++i)
        alpha_[static_cast<std::size_t>(i)] = p.scalar_loss_derivative(i, A->row_dot(i, x0)) / m;
      m_ = A->multiply_transpose(alpha_);
      init_samples_ = m;
      break;
    }
  }
}

StepOutcome Estimator::draw_outcome(const Problem& p) {
  require_components(p);
  StepOutcome o;
  switch (cfg_.kind) {
    case EstimatorKind::Full:
      break;
    case EstimatorKind::Saga:
    case EstimatorKind::Sag:
    case EstimatorKind::HeavyBall:
      o.batch = rng_.sample_without_replacement(p.num_components(), cfg_.batch_size);
      break;
    case EstimatorKind::Lsvrg:
      o.refresh = rng_.next_bernoulli(cfg_.refresh_prob);
      o.batch = rng_.sample_without_replacement(p.num_components(), cfg_.batch_size);
      break;
    case EstimatorKind::Sarah:
      o.refresh = rng_.next_bernoulli(cfg_.refresh_prob);
      if (!o.refresh) o.batch = rng_.sample_without_replacement(p.num_components(), cfg_.batch_size);
      break;
    case EstimatorKind::Sega:
    case EstimatorKind::Jaguar:
    case EstimatorKind::Zoja:
      o.coordinate = static_cast<int>(rng_.next_index(static_cast<std::uint64_t>(p.dim())));
      break;
  }
  return o;
}

long long Estimator::step(const Problem& p, const Vector& x_t, const Vector& x_prev, long t, double momentum) {
  return apply_outcome(p, x_t, x_prev, t, momentum, draw_outcome(p));
}

long long Estimator::apply_outcome(const Problem& p, const Vector& x_t, const Vector& x_prev, long t,
                                   double momentum, const StepOutcome& o) {
  if (t < 1) throw ConfigError("estimator step: t must be >= 1");
  if (static_cast<int>(x_t.size()) != p.dim() || x_prev.size() != x_t.size())
    throw DimensionError("estimator step: dimension mismatch");
  const int n = p.dim();
  const int m = p.num_components();
  switch (cfg_.kind) {
    case EstimatorKind::Full:
      m_ = p.gradient(x_t);
      return m;
    case EstimatorKind::Saga: {
      // m^t = mean over batch of (grad_i(x^t) - y_i) + mean(y); then y refresh.
      const double inv_b = 1.0 / static_cast<double>(o.batch.size());
      Vector m_next = table_mean_;
      Vector g(static_cast<std::size_t>(n));
      for (int i : o.batch) {
        p.component_grad(i, x_t, g);
        auto& y = table_[static_cast<std::size_t>(i)];
        axpy(inv_b, g, m_next);
        axpy(-inv_b, y, m_next);
        axpy(1.0 / m, g, table_mean_);
        axpy(-1.0 / m, y, table_mean_);
        y = g;
      }
      m_ = std::move(m_next);
      return cfg_.batch_size;
    }
    case EstimatorKind::Lsvrg: {
      long long samples = cfg_.batch_size;
      if (o.refresh) {
        w_ = x_prev;
        grad_w_ = p.gradient(w_);
        samples += m;
      }
      Vector at_x = batch_mean_component_grad(p, o.batch, x_t);
      Vector at_w = batch_mean_component_grad(p, o.batch, w_);
      m_ = grad_w_;
      axpy(1.0, at_x, m_);
      axpy(-1.0, at_w, m_);
      return samples;
    }
    case EstimatorKind::Sarah: {
      if (o.refresh) {
        m_ = p.gradient(x_t);
        return m;
      }
      Vector at_x = batch_mean_component_grad(p, o.batch, x_t);
      Vector at_prev = batch_mean_component_grad(p, o.batch, x_prev);
      axpy(1.0, at_x, m_);
      axpy(-1.0, at_prev, m_);
      return cfg_.batch_size;
    }
    case EstimatorKind::Sega: {
      const int j = o.coordinate;
      const double gj = p.partial(j, x_t);
      m_ = h_;
      m_[static_cast<std::size_t>(j)] += n * (gj - h_[static_cast<std::size_t>(j)]);
      h_[static_cast<std::size_t>(j)] = gj;
      return 1;
    }
    case EstimatorKind::Jaguar: {
      const int j = o.coordinate;
      const Vector& point = cfg_.jaguar_uses_current_point ? x_t : x_prev;
      m_[static_cast<std::size_t>(j)] = p.partial(j, point);
      return 1;
    }
    case EstimatorKind::Zoja: {
      const int j = o.coordinate;
      Vector shifted = x_prev;
      shifted[static_cast<std::size_t>(j)] += cfg_.zo_step;
      m_[static_cast<std::size_t>(j)] = (p.value(shifted) - p.value(x_prev)) / cfg_.zo_step;
      return 2;
    }
    case EstimatorKind::HeavyBall: {
      if (!(momentum > 0.0 && momentum <= 1.0))
        throw ConfigError("estimator step: heavy-ball momentum must lie in ]0,1]");
      Vector g = batch_mean_component_grad(p, o.batch, x_t);
      scale(m_, 1.0 - momentum);
      axpy(momentum, g, m_);
      return cfg_.batch_size;
    }
    case EstimatorKind::Sag: {
      const auto* A = p.linear_map();
      for (int i : o.batch) {
        const double fresh = p.scalar_loss_derivative(i, A->row_dot(i, x_t)) / m;
        const double delta = fresh - alpha_[static_cast<std::size_t>(i)];
        alpha_[static_cast<std::size_t>(i)] = fresh;
        A->add_row_to(i, delta, m_);
      }
      return cfg_.batch_size;
    }
  }
  throw ConfigError("estimator step: unknown kind");
}

std::vector<std::pair<double, StepOutcome>> Estimator::enumerate_outcomes(const Problem& p) const {
  const int m = p.num_components();
  const int n = p.dim();
  if (m > 20 || n > 20) throw ConfigError("enumerate_outcomes: instance too large to enumerate");

  std::vector<std::vector<int>> subsets;
  if (cfg_.kind == EstimatorKind::Saga || cfg_.kind == EstimatorKind::Sag ||
      cfg_.kind == EstimatorKind::HeavyBall || cfg_.kind == EstimatorKind::Lsvrg ||
      cfg_.kind == EstimatorKind::Sarah) {
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
      if (static_cast<int>(cur.size()) == cfg_.batch_size) {
        subsets.push_back(cur);
        return;
      }
      for (int i = start; i < m; ++i) {
        cur.push_back(i);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
    if (subsets.size() > 40000) throw ConfigError("enumerate_outcomes: too many batches");
  }

  std::vector<std::pair<double, StepOutcome>> out;
  const double sub_prob = subsets.empty() ? 1.0 : 1.0 / static_cast<double>(subsets.size());
  switch (cfg_.kind) {
    case EstimatorKind::Full:
      out.push_back({1.0, StepOutcome{}});
      break;
    case EstimatorKind::Saga:
    case EstimatorKind::Sag:
    case EstimatorKind::HeavyBall:
      for (auto& s : subsets) out.push_back({sub_prob, StepOutcome{.batch = s}});
      break;
    case EstimatorKind::Lsvrg:
      for (auto& s : subsets) {
        out.push_back({cfg_.refresh_prob * sub_prob, StepOutcome{.batch = s, .refresh = true}});
        if (cfg_.refresh_prob < 1.0)
          out.push_back({(1.0 - cfg_.refresh_prob) * sub_prob, StepOutcome{.batch = s, .refresh = false}});
      }
      break;
    case EstimatorKind::Sarah:
      out.push_back({cfg_.refresh_prob, StepOutcome{.refresh = true}});
      if (cfg_.refresh_prob < 1.0)
        for (auto& s : subsets)
          out.push_back({(1.0 - cfg_.refresh_prob) * sub_prob, StepOutcome{.batch = s, .refresh = false}});
      break;
    case EstimatorKind::Sega:
    case EstimatorKind::Jaguar:
    case EstimatorKind::Zoja:
      for (int j = 0; j < n; ++j)
        out.push_back({1.0 / static_cast<double>(n), StepOutcome{.coordinate = j}});
      break;
  }
  return out;
}

Vector Estimator::map_point(const Problem& p, const Vector& v) const {
  if (cfg_.kind != EstimatorKind::Sag) return v;
  return p.linear_map()->multiply(v);
}

Vector Estimator::error_vector(const Problem& p, const Vector& x_t) const {
  if (cfg_.kind == EstimatorKind::Sag) {
    const auto* A = p.linear_map();
    const int m = p.num_components();
    Vector err(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      err[static_cast<std::size_t>(i)] =
          alpha_[static_cast<std::size_t>(i)] - p.scalar_loss_derivative(i, A->row_dot(i, x_t)) / m;
    return err;
  }
  Vector err = m_;
  Vector g = p.gradient(x_t);
  axpy(-1.0, g, err);
  return err;
}

double Estimator::sigma_sq(const Problem& p, const Vector& x_t) const {
  switch (cfg_.kind) {
    case EstimatorKind::Saga: {
      const int m = p.num_components();
      Vector g(static_cast<std::size_t>(p.dim()));
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        p.component_grad(i, x_t, g);
        axpy(-1.0, table_[static_cast<std::size_t>(i)], g);
        s += norm2_sq(g);
      }
      return s / m;
    }
    case EstimatorKind::Lsvrg:
      return norm2_sq(sub(x_t, w_));
    case EstimatorKind::Sega: {
      Vector g = p.gradient(x_t);
      axpy(-1.0, h_, g);
      return norm2_sq(g);
    }
    default:
      return 0.0;
  }
}

}  // namespace bsfw
