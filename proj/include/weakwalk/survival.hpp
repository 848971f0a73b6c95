// Per-round overwrite probabilities and cumulative memory survival for the
// recorder chain, computed along three mutually checking tracks.
//
// Round i applies i pointer steps to a fresh |0> pointer before the
// conditional overwrite. The pointer angle after i steps is (2k - i) theta
// where k ~ Binomial(i, 1/2 + eps_star) counts +theta draws, so the
// overwrite probability is the path sum
//
//   P_i = sum_k C(i,k) p^k (1-p)^(i-k) sin^2((2k - i) theta / 2).
//
// Tracks:
//   exact         - the path sum itself (see note below on evaluation),
//   gaussian      - second-moment approximation
//                   P_i ~ (1 - exp(-i theta^2 (1-4 eps*^2)/2) cos(2 i eps* theta)) / 2,
//   leading_order - the small-angle cumulative law
//                   -ln S(m) ~ m^2 theta^2 / 8 + m^3 eps*^2 theta^2 / 3.
//
// Exact-track evaluation: direct binomial recurrence for i <= 60, log-gamma
// weights for 60 < i <= 512. Above 512 the identical sum is resummed through
// the per-step characteristic function, E[e^(i Theta)] = (cos theta +
// 2i eps* sin theta)^i, arranged to avoid cancellation; this keeps each
// round O(1) so million-step walks stay cheap. The three arrangements agree
// to ~1e-13 across their switch points.
#pragma once

#include <vector>

#include "weakwalk/matcore.hpp"

namespace weakwalk {

// Cumulative log-survival values are floored here instead of underflowing.
inline constexpr double kLogSurvivalFloor = -745.0;

enum class Track { exact, gaussian, leading_order };

const char* to_string(Track track);

// Probability that round i (i steps from |0>) overwrites the memory.
double overwrite_prob_exact(int i, double theta, double eps_star);

// Independent oracle: i literal step_pointer applications from |0><0|,
// reading <1|rho|1>. O(i) 2x2 algebra; used to certify the path sum.
double overwrite_prob_recursion(int i, double theta, double eps_star);

// Gaussian (second-moment) approximation to the path sum.
double overwrite_prob_gaussian(int i, double theta, double eps_star);

// -(m^2 theta^2 / 8 + m^3 eps_star^2 theta^2 / 3); valid for m theta << 1
// and m eps_star theta << 1.
double log_survival_leading_order(int m, double theta, double eps_star);

struct SurvivalCurve {
  int m = 0;
  double theta = 0.0;
  double eps_star = 0.0;
  Track track = Track::exact;
  std::vector<double> per_round_overwrite;  // P_i, i = 1..m
  std::vector<double> log_survival;         // ln S after rounds 1..m
  bool underflow = false;                   // some ln S hit the floor

  double log_survival_final() const;
  double survival() const;
};

// Per-round overwrite probabilities and cumulative log-survival
// (sum of log1p(-P_i) for exact/gaussian; the closed small-angle law per
// round count for leading_order).
SurvivalCurve survival_curve(int m, double theta, double eps_star,
                             Track track);

struct MonotonicityRow {
  double eps_star = 0.0;
  double survival_exact = 0.0;
  double survival_leading = 0.0;
};

struct MonotonicityReport {
  std::vector<MonotonicityRow> rows;
  bool exact_strictly_decreasing = false;
  // Grid points where the leading-order survival overestimates the exact one.
  std::vector<double> leading_above_exact;
};

MonotonicityReport monotonicity_scan(int m, double theta,
                                     const std::vector<double>& eps_grid);

// Operating angle for the m = 25 walk: the bisection root of
// S_exact(25, theta, 0.25) = 0.0475, anchoring the driven survival at the
// midpoint of its target window; the undriven survival then lands at 0.5495.
// (Inverting the leading-order law at the undriven anchor alone gives
// theta = 0.08748, whose driven survival 0.04427 misses the window, so the
// driven anchor is the binding one.)
double derived_figure1_theta();

}  // namespace weakwalk
