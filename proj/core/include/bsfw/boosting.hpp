#pragma once

#include "bsfw/constraints.hpp"
#include "bsfw/numerics.hpp"

namespace bsfw {

struct BoostConfig {
  int max_rounds = 10000;   // K
  double tolerance = 1e-4;  // delta, required alignment improvement per round

  void validate() const {
    if (max_rounds < 1) throw ConfigError("boost: max_rounds must be >= 1");
    if (!(tolerance > 0.0 && tolerance <= 1.0)) throw ConfigError("boost: tolerance must lie in ]0,1]");
  }
};

struct BoostOutcome {
  Vector direction;        // d~, zero when mass collapsed
  double mass = 0.0;       // Lambda
  int rounds = 0;          // K_t; also the number of lmo calls issued
  Vector first_vertex;     // s, the round-0 lmo output
  double final_alignment = -1.0;  // align(-m, accumulated direction)
};

// Modified cosine similarity: <d,dh>/(|d||dh|), or -1 when dh = 0.
// d = 0 with dh != 0 is a domain error.
double align(const Vector& d, const Vector& d_hat);

// One boosting pass: greedily decompose -m over cone(C - x) through repeated
// lmo calls, keeping a round only when it improves the alignment with -m by
// at least cfg.tolerance. The normalized accumulated direction keeps x + d~
// inside the set.
BoostOutcome boost(const Vector& m, const Vector& x, const ConstraintSet& set, const BoostConfig& cfg);

}  // namespace bsfw
