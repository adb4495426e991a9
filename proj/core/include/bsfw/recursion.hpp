#pragma once

#include "bsfw/boosting.hpp"
#include "bsfw/estimators.hpp"
#include "bsfw/schedules.hpp"

namespace bsfw {

// Result of checking the estimator error recursion against its constants.
// For each measured step the exact conditional expectation of |err_t|^2
// (and of the auxiliary sequence) is computed by enumerating every batch /
// coordinate / branch outcome, and divided by the recursion's right-hand
// side. A sound estimator keeps both ratios at or below 1.
struct RecursionReport {
  int steps_measured = 0;
  double max_error_ratio = 0.0;
  double max_sigma_ratio = 0.0;  // 0 when the kind has no auxiliary sequence
  bool passed(double slack = 1e-9) const {
    return max_error_ratio <= 1.0 + slack && max_sigma_ratio <= 1.0 + slack;
  }
};

// Drives `steps` iterations of the boosted solver update on a tiny problem
// (component count and dimension both <= 6) and measures the recursion at
// every step. Throws ConfigError when the instance is too large to enumerate.
RecursionReport measure_recursion(const EstimatorConfig& cfg, const Problem& problem,
                                  const ConstraintSet& set, const Schedule& schedule, int steps,
                                  std::uint64_t seed, const BoostConfig& boost_cfg = {});

}  // namespace bsfw
