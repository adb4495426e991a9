#include "bsfw/boosting.hpp"

#include <cmath>

namespace bsfw {

double align(const Vector& d, const Vector& d_hat) {
  if (d.size() != d_hat.size()) throw DimensionError("align: length mismatch");
  const double nh = norm2(d_hat);
  if (nh == 0.0) return -1.0;
  const double nd = norm2(d);
  if (nd == 0.0) throw std::domain_error("align: reference direction is zero");
  return dot(d, d_hat) / (nd * nh);
}

BoostOutcome boost(const Vector& m, const Vector& x, const ConstraintSet& set, const BoostConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(m.size()) != set.dim() || x.size() != m.size())
    throw DimensionError("boost: dimension mismatch");

  const std::size_t n = m.size();
  BoostOutcome out;
  Vector psi(n, 0.0);         // accumulated conical direction
  Vector neg_m(n);
  for (std::size_t i = 0; i < n; ++i) neg_m[i] = -m[i];
  const bool m_zero = is_zero(m);

  double lambda_mass = 0.0;   // Lambda
  double cur_align = -1.0;    // align(-m, psi), with psi = 0 giving -1
  Vector residual(n), candidate(n), u(n);

  int k = 0;
  while (k <= cfg.max_rounds - 1) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = neg_m[i] - psi[i];
    Vector neg_r(n);
    for (std::size_t i = 0; i < n; ++i) neg_r[i] = -residual[i];
    const Vector vertex = set.lmo(neg_r);
    if (k == 0) out.first_vertex = vertex;

    // Candidate update direction: the new vertex direction, or a pull-back
    // along -psi when that matches the residual better. Ties keep the vertex.
    bool away = false;
    const double psi_norm = norm2(psi);
    for (std::size_t i = 0; i < n; ++i) u[i] = vertex[i] - x[i];
    double gain = dot(residual, u);
    if (psi_norm != 0.0) {
      double away_gain = -dot(residual, psi) / psi_norm;
      if (away_gain > gain) {
        away = true;
        gain = away_gain;
        for (std::size_t i = 0; i < n; ++i) u[i] = -psi[i] / psi_norm;
      }
    }

    const double u_norm_sq = norm2_sq(u);
    if (u_norm_sq == 0.0) {
      ++k;
      break;
    }
    const double step = gain / u_norm_sq;
    if (step <= 0.0) {
      // cannot improve the alignment; the acceptance test below would reject
      ++k;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) candidate[i] = psi[i] + step * u[i];
    const double cand_align = m_zero ? -1.0 : align(neg_m, candidate);
    if (cand_align - cur_align >= cfg.tolerance) {
      psi = candidate;
      cur_align = cand_align;
      // A pull-back candidate only rescales psi, so it cannot pass the
      // improvement test; the mass update is kept for fidelity anyway.
      if (!away)
        lambda_mass += step;
      else
        lambda_mass *= 1.0 - step / psi_norm;
      ++k;
    } else {
      ++k;
      break;
    }
  }

  out.rounds = k;
  out.final_alignment = cur_align;
  // Away rounds can drive the mass to numerical zero; treat that as no direction.
  if (lambda_mass > 1e-14) {
    out.mass = lambda_mass;
    out.direction = psi;
    scale(out.direction, 1.0 / lambda_mass);
  } else {
    out.mass = 0.0;
    out.direction.assign(n, 0.0);
    out.final_alignment = -1.0;
  }
  return out;
}

}  // namespace bsfw
