#include "bsfw/schedules.hpp"

#include <algorithm>
#include <cmath>

namespace bsfw {

namespace {
void check_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("schedule: rho must lie in ]0,1]");
}
void check_contraction(double r, const char* what) {
  if (!(r > 0.0 && r <= 1.0)) throw ConfigError(std::string("schedule: ") + what + " must lie in ]0,1]");
}
void check_horizon(long horizon) {
  if (horizon < 1) throw ConfigError("schedule: horizon must be >= 1");
}
}  // namespace

Schedule Schedule::det_quasar(double rho) {
  check_rho(rho);
  Schedule s;
  s.kind_ = ScheduleKind::DetQuasar;
  s.rho_ = rho;
  return s;
}

Schedule Schedule::det_nonconvex_anytime() {
  Schedule s;
  s.kind_ = ScheduleKind::DetNonconvexAnytime;
  return s;
}

Schedule Schedule::det_nonconvex_horizon(long horizon) {
  check_horizon(horizon);
  Schedule s;
  s.kind_ = ScheduleKind::DetNonconvexHorizon;
  s.horizon_ = horizon;
  return s;
}

Schedule Schedule::stoch_quasar_horizon(double rho, double rho1, double rho2, long horizon) {
  check_rho(rho);
  check_contraction(rho1, "rho1");
  check_contraction(rho2, "rho2");
  check_horizon(horizon);
  Schedule s;
  s.kind_ = ScheduleKind::StochQuasarHorizon;
  s.rho_ = rho;
  s.rho1_ = rho1;
  s.rho2_ = rho2;
  s.horizon_ = horizon;
  return s;
}

Schedule Schedule::stoch_quasar_anytime(double rho, double rho1, double rho2) {
  check_rho(rho);
  check_contraction(rho1, "rho1");
  check_contraction(rho2, "rho2");
  Schedule s;
  s.kind_ = ScheduleKind::StochQuasarAnytime;
  s.rho_ = rho;
  s.rho1_ = rho1;
  s.rho2_ = rho2;
  return s;
}

Schedule Schedule::stoch_nonconvex_horizon(long horizon) {
  check_horizon(horizon);
  Schedule s;
  s.kind_ = ScheduleKind::StochNonconvexHorizon;
  s.horizon_ = horizon;
  return s;
}

Schedule Schedule::stoch_nonconvex_anytime() {
  Schedule s;
  s.kind_ = ScheduleKind::StochNonconvexAnytime;
  return s;
}

Schedule Schedule::heavy_ball_quasar(double rho) {
  check_rho(rho);
  Schedule s;
  s.kind_ = ScheduleKind::HeavyBallQuasar;
  s.rho_ = rho;
  return s;
}

Schedule Schedule::heavy_ball_nonconvex() {
  Schedule s;
  s.kind_ = ScheduleKind::HeavyBallNonconvex;
  return s;
}

Schedule Schedule::constant(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("schedule: constant eta must lie in ]0,1]");
  Schedule s;
  s.kind_ = ScheduleKind::Constant;
  s.eta_const_ = eta;
  return s;
}

double Schedule::eta(long t) const {
  if (t < 0) throw ConfigError("schedule: negative index");
  if (has_horizon() && t >= horizon_) throw ConfigError("schedule: index beyond horizon");
  double v = 0.0;
  switch (kind_) {
    case ScheduleKind::DetQuasar:
      v = 2.0 / (rho_ * static_cast<double>(t + 2));
      break;
    case ScheduleKind::DetNonconvexAnytime:
    case ScheduleKind::StochNonconvexAnytime:
      v = 1.0 / std::sqrt(static_cast<double>(t + 1));
      break;
    case ScheduleKind::DetNonconvexHorizon:
      v = 1.0 / std::sqrt(static_cast<double>(horizon_ + 1));
      break;
    case ScheduleKind::StochQuasarHorizon: {
      const double d = 2.0 / std::min(rho1_, rho2_);
      const long t0 = horizon_ / 2;
      if (static_cast<double>(horizon_) <= d || t < t0)
        v = 1.0 / (rho_ * d);
      else
        v = 2.0 / (rho_ * (2.0 * d + static_cast<double>(t - t0)));
      break;
    }
    case ScheduleKind::StochQuasarAnytime: {
      const double nu = std::max(2.0, 4.0 / std::min(rho1_, rho2_));
      v = 2.0 / (rho_ * (static_cast<double>(t) + nu));
      break;
    }
    case ScheduleKind::StochNonconvexHorizon:
      v = 1.0 / std::sqrt(static_cast<double>(horizon_));
      break;
    case ScheduleKind::HeavyBallQuasar:
      v = 2.0 / (rho_ * static_cast<double>(t + 9));
      break;
    case ScheduleKind::HeavyBallNonconvex:
      v = 1.0 / std::pow(static_cast<double>(t + 2), 0.75);
      break;
    case ScheduleKind::Constant:
      v = eta_const_;
      break;
  }
  return std::min(v, 1.0);
}

double Schedule::momentum(long t) const {
  if (t < 0) throw ConfigError("schedule: negative index");
  switch (kind_) {
    case ScheduleKind::HeavyBallQuasar:
      // the t = 0 value is exactly 1; pow noise can land a hair above it
      return std::min(4.0 / std::pow(static_cast<double>(t + 8), 2.0 / 3.0), 1.0);
    case ScheduleKind::HeavyBallNonconvex:
      return 1.0 / std::sqrt(static_cast<double>(t + 1));
    default:
      throw ConfigError("schedule: momentum is only defined for heavy-ball schedules");
  }
}

std::string Schedule::name() const {
  switch (kind_) {
    case ScheduleKind::DetQuasar: return "det_quasar";
    case ScheduleKind::DetNonconvexAnytime: return "det_ncv_anytime";
    case ScheduleKind::DetNonconvexHorizon: return "det_ncv_horizon";
    case ScheduleKind::StochQuasarHorizon: return "stoch_quasar_horizon";
    case ScheduleKind::StochQuasarAnytime: return "stoch_quasar_anytime";
    case ScheduleKind::StochNonconvexHorizon: return "stoch_ncv_horizon";
    case ScheduleKind::StochNonconvexAnytime: return "stoch_ncv_anytime";
    case ScheduleKind::HeavyBallQuasar: return "hb_quasar";
    case ScheduleKind::HeavyBallNonconvex: return "hb_ncv";
    case ScheduleKind::Constant: return "constant";
  }
  return "unknown";
}

}  // namespace bsfw
