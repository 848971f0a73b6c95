// The recorder protocol.
//
// Single stage (memory M1): m rounds; round i resets the pointer, applies i
// walk steps (each on a freshly prepared input), then the controlled
// overwrite onto M1. M1 survival is the product of per-round survivals.
//
// Double stage (M1 + M2): the single stage runs `iterations` times (default
// 3n); after each run the reverse overwrite writes M2 when M1 was NOT
// overwritten, and M1 is reset. M2 thus survives a full run only if M1 was
// overwritten in every iteration: S2 = (1 - S1)^iterations.
//
// Global recorder (M3): one double stage per configured test t; M3 survives
// only if every M2 stayed clean: S3 = prod_t (1 - S2_t), taken in log space.
//
// Backends: `fast` composes exact-track survival probabilities; `full_dm`
// evolves the literal joint density matrix (pointer, memories, dilation
// ancillas, one inert reset ancilla) through dilated channels and must agree
// with `fast` to near machine precision.
#pragma once

#include <utility>
#include <vector>

#include "weakwalk/params.hpp"
#include "weakwalk/survival.hpp"

namespace weakwalk {

enum class Backend { fast, full_dm };

// full_dm round counts above this raise std::invalid_argument.
inline constexpr int kFullDmMaxRounds = 6;

struct StageOneResult {
  int m = 0;
  double theta = 0.0;
  double eps_star = 0.0;
  double survival_m1 = 0.0;
  long long queries_used = 0;  // m(m+1)/2 walk-step channel queries
  std::vector<double> per_round_overwrite;
};

StageOneResult run_single_stage(int m, double theta, double eps_star,
                                Backend backend);

struct DoubleStageResult {
  StageOneResult inner;
  int iterations = 0;
  double survival_m2 = 0.0;
};

// Inner (m, theta) given explicitly. iterations <= 0 selects the default 3n.
DoubleStageResult run_double_stage_with_params(int n, int m, double theta,
                                               double eps_star,
                                               Backend backend,
                                               int iterations = 0);

// Solves the inner walk for detection threshold eps_threshold against
// inner_targets = (s0_target, s1_target), then runs it at the true drive
// eps_star. Requires n >= 2.
DoubleStageResult run_double_stage(int n, double eps_star,
                                   double eps_threshold,
                                   std::pair<double, double> inner_targets,
                                   Backend backend = Backend::fast,
                                   int iterations = 0);

struct GlobalRecorderResult {
  double survival_m3 = 0.0;
  double overwrite_estimate = 0.0;  // 1 - survival_m3
  bool underflow = false;
  std::vector<double> per_test_f;   // the aggregated S2 values
};

GlobalRecorderResult aggregate_m3(const std::vector<double>& per_test_s2);

enum class Hypothesis {
  calibration_consistent = 1,  // no test left a mark on M3
  deviation_detected = 2,
};

const char* to_string(Hypothesis h);

// M3 overwrite estimate < exp(-3) selects hypothesis (1); the boundary
// counts as detection.
Hypothesis decide(double m3_overwrite_estimate);

// Walk-step queries for a full double stage: 3n * m(m+1)/2.
long long query_count(int n, long long m);

}  // namespace weakwalk
