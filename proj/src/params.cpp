#include "weakwalk/params.hpp"

#include <cmath>

namespace weakwalk {

namespace {

constexpr int kScanCap = 10'000'000;

struct Certification {
  bool s0_ok = false;
  bool s1_ok = false;
  double s0 = 0.0;
  double s1 = 0.0;
  bool feasible() const { return s0_ok && s1_ok; }
};

Certification certify(int m, double lock, const ProtocolTargets& t) {
  const double theta = lock / m;
  Certification c;
  c.s0 = survival_curve(m, theta, 0.0, Track::exact).survival();
  c.s1 = survival_curve(m, theta, t.eps, Track::exact).survival();
  c.s0_ok = c.s0 > t.s0_min;
  c.s1_ok = c.s1 < std::exp(-t.gamma);
  return c;
}

}  // namespace

SolvedParams solve(const ProtocolTargets& t) {
  if (!(t.gamma > 0.0))
    throw std::invalid_argument("solve: gamma must be positive");
  if (!(t.eps >= 0.0 && t.eps <= 0.5))
    throw std::invalid_argument("solve: eps must be in [0, 1/2]");
  if (!(t.s0_min > 0.0 && t.s0_min < 1.0))
    throw std::invalid_argument("solve: s0_min must be in (0, 1)");
  if (!(t.slack > 0.0 && t.slack <= 1.0))
    throw std::invalid_argument("solve: slack must be in (0, 1]");

  // eps = 0 gives no drive to detect: both hypotheses share one survival
  // curve, so no m can separate them.
  if (t.eps == 0.0)
    throw InfeasibleTargetsError(
        "solve: eps = 0 leaves the driven and undriven walks identical",
        "driven survival above exp(-gamma)");

  const double lock = t.slack * 2.0 * std::sqrt(2.0 * std::log(1.0 / t.s0_min));

  // Bracket the feasibility threshold (feasibility is monotone in m under
  // the lock), bisect to the smallest feasible m, and re-verify minimality.
  int hi = 1;
  while (!certify(hi, lock, t).feasible()) {
    if (hi >= kScanCap) {
      const Certification c = certify(kScanCap, lock, t);
      throw InfeasibleTargetsError(
          "solve: no m <= 10^7 certifies the targets",
          !c.s1_ok ? "driven survival above exp(-gamma)"
                   : "undriven survival below s0_min");
    }
    hi = std::min(hi * 2, kScanCap);
  }
  int lo = hi / 2;  // infeasible (or 0)
  while (lo + 1 < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (certify(mid, lock, t).feasible()) hi = mid;
    else lo = mid;
  }
  if (hi > 1 && certify(hi - 1, lock, t).feasible()) --hi;  // minimality guard

  const Certification c = certify(hi, lock, t);
  SolvedParams out;
  out.m = hi;
  out.theta = lock / hi;
  out.achieved_s0 = c.s0;
  out.achieved_s1 = c.s1;
  out.alpha = 1.0 - c.s0;
  out.beta = c.s1;
  return out;
}

ErrorProbabilities error_probabilities(const SurvivalCurve& h0,
                                       const SurvivalCurve& h1) {
  if (h0.track != Track::exact || h1.track != Track::exact)
    throw std::invalid_argument("error_probabilities: exact track required");
  if (h0.m != h1.m || h0.theta != h1.theta)
    throw std::invalid_argument("error_probabilities: mismatched parameters");
  if (h0.eps_star != 0.0)
    throw std::invalid_argument("error_probabilities: h0 must be undriven");
  return {1.0 - h0.survival(), h1.survival()};
}

}  // namespace weakwalk
