// Operating-point solver: pick (m, theta) so the undriven memory survives
// with probability > s0_min while a drive of strength eps pushes survival
// below exp(-gamma).
//
// The product m*theta is locked to slack * 2 sqrt(2 ln(1/s0_min)) -- the
// small-angle background cost then stays at slack^2 * ln(1/s0_min), under
// budget by construction -- and m is the smallest round count whose exact
// survival curve certifies both targets. Feasibility is monotone in m under
// the lock (the drive term grows linearly while the background is pinned),
// so an exponential bracket plus bisection finds the smallest m; minimality
// is re-verified at m - 1.
#pragma once

#include <stdexcept>
#include <string>

#include "weakwalk/survival.hpp"

namespace weakwalk {

struct ProtocolTargets {
  double gamma = 0.0;    // driven survival budget exp(-gamma)
  double eps = 0.0;      // drive strength to certify against, (0, 1/2]
  double s0_min = 0.5;   // undriven survival floor
  double slack = 0.9;    // safety factor on the m*theta lock, (0, 1]
};

struct SolvedParams {
  int m = 0;
  double theta = 0.0;
  double achieved_s0 = 0.0;  // exact-track undriven survival
  double achieved_s1 = 0.0;  // exact-track survival at eps_star = eps
  double alpha = 0.0;        // false drive detection, 1 - achieved_s0
  double beta = 0.0;         // missed drive, achieved_s1
};

class InfeasibleTargetsError : public std::runtime_error {
 public:
  InfeasibleTargetsError(const std::string& what, std::string constraint)
      : std::runtime_error(what), constraint(std::move(constraint)) {}
  std::string constraint;  // which certification failed at the scan bound
};

// Throws std::invalid_argument on out-of-range targets and
// InfeasibleTargetsError when no m <= 10^7 certifies both targets.
SolvedParams solve(const ProtocolTargets& targets);

struct ErrorProbabilities {
  double alpha = 0.0;
  double beta = 0.0;
};

// alpha = 1 - S_h0, beta = S_h1. Both curves must be exact-track runs of the
// same (m, theta); throws std::invalid_argument otherwise.
ErrorProbabilities error_probabilities(const SurvivalCurve& h0,
                                       const SurvivalCurve& h1);

}  // namespace weakwalk
