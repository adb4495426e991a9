#pragma once

#include <string>

#include "bsfw/errors.hpp"

namespace bsfw {

enum class ScheduleKind {
  DetQuasar,             // 2 / (rho (t+2))
  DetNonconvexAnytime,   // 1 / sqrt(t+1)
  DetNonconvexHorizon,   // 1 / sqrt(T+1)
  StochQuasarHorizon,    // piecewise around t0 = floor(T/2), d = 2/min(rho1,rho2)
  StochQuasarAnytime,    // 2 / (rho (t+nu)), nu = max(2, 4/min(rho1,rho2))
  StochNonconvexHorizon, // 1 / sqrt(T)
  StochNonconvexAnytime, // 1 / sqrt(t+1)
  HeavyBallQuasar,       // 2 / (rho (t+9)), momentum 4/(t+8)^(2/3)
  HeavyBallNonconvex,    // 1 / (t+2)^(3/4), momentum 1/sqrt(t+1)
  Constant,
};

// Step-decay sequence eta_t in ]0,1], plus the momentum sequence for the
// heavy-ball kinds. Values above 1 are clamped.
class Schedule {
 public:
  static Schedule det_quasar(double rho = 1.0);
  static Schedule det_nonconvex_anytime();
  static Schedule det_nonconvex_horizon(long horizon);
  static Schedule stoch_quasar_horizon(double rho, double rho1, double rho2, long horizon);
  static Schedule stoch_quasar_anytime(double rho, double rho1, double rho2);
  static Schedule stoch_nonconvex_horizon(long horizon);
  static Schedule stoch_nonconvex_anytime();
  static Schedule heavy_ball_quasar(double rho = 1.0);
  static Schedule heavy_ball_nonconvex();
  static Schedule constant(double eta);

  ScheduleKind kind() const { return kind_; }
  bool is_heavy_ball() const {
    return kind_ == ScheduleKind::HeavyBallQuasar || kind_ == ScheduleKind::HeavyBallNonconvex;
  }
  bool has_horizon() const {
    return kind_ == ScheduleKind::DetNonconvexHorizon || kind_ == ScheduleKind::StochQuasarHorizon ||
           kind_ == ScheduleKind::StochNonconvexHorizon;
  }
  long horizon() const { return horizon_; }

  double eta(long t) const;
  double momentum(long t) const;  // heavy-ball kinds only

  std::string name() const;

 private:
  Schedule() = default;
  ScheduleKind kind_ = ScheduleKind::DetQuasar;
  double rho_ = 1.0;
  double rho1_ = 1.0;
  double rho2_ = 1.0;
  double eta_const_ = 0.5;
  long horizon_ = 0;
};

}  // namespace bsfw
