#include "weakwalk/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "weakwalk/dmsim.hpp"
#include "weakwalk/walk.hpp"

namespace weakwalk {

namespace {

// Register layout for the literal backend. M2 is only present in double-
// stage runs; the reset ancilla is carried (and asserted inert) so the
// simulated register matches the protocol's stated resource set.
struct Layout {
  int q_s = 0;
  int p = 1;
  int m1 = 2;
  int m2 = -1;
  int a1 = 3, a2 = 4;
  int r = 5;
  int total = 6;
};

Layout double_stage_layout() {
  Layout l;
  l.m2 = 3;
  l.a1 = 4;
  l.a2 = 5;
  l.r = 6;
  l.total = 7;
  return l;
}

ComplexMatrix input_state(double eps_star) {
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 0.5 + eps_star;
  rho(1, 1) = 0.5 - eps_star;
  return rho;
}

void check_stage_args(int m, double theta, double eps_star, Backend backend) {
  if (m < 1) throw std::invalid_argument("run_single_stage: m must be >= 1");
  if (!(theta >= 0.0 && theta <= M_PI))
    throw std::invalid_argument("run_single_stage: theta must be in [0, pi]");
  if (!(std::abs(eps_star) <= 0.5))
    throw std::invalid_argument("run_single_stage: |eps_star| must be <= 1/2");
  if (backend == Backend::full_dm && m > kFullDmMaxRounds)
    throw std::invalid_argument(
        "run_single_stage: full_dm backend supports m <= 6");
}

// One Algorithm-1 pass on an existing simulator; M1 must start in |0>.
void run_stage_on_sim(DmSim& sim, const Layout& l, int m, double theta,
                      double eps_star, const DilatedChannel& write,
                      std::vector<double>* per_round_overwrite) {
  const ComplexMatrix rho_in = input_state(eps_star);
  const ComplexMatrix u_walk = walk_unitary(theta);
  for (int i = 1; i <= m; ++i) {
    sim.reset(l.p);
    for (int step = 0; step < i; ++step) {
      sim.replace_leading(rho_in, 1);
      sim.apply_unitary(u_walk, {l.q_s, l.p});
    }
    if (per_round_overwrite)
      per_round_overwrite->push_back(1.0 - sim.prob_zero(l.p));
    sim.apply_dilated(write, {l.p, l.m1}, {l.a1, l.a2});
  }
}

}  // namespace

StageOneResult run_single_stage(int m, double theta, double eps_star,
                                Backend backend) {
  check_stage_args(m, theta, eps_star, backend);
  StageOneResult res;
  res.m = m;
  res.theta = theta;
  res.eps_star = eps_star;
  res.queries_used = static_cast<long long>(m) * (m + 1) / 2;

  if (backend == Backend::fast) {
    const SurvivalCurve curve = survival_curve(m, theta, eps_star, Track::exact);
    res.survival_m1 = curve.survival();
    res.per_round_overwrite = curve.per_round_overwrite;
    return res;
  }

  const Layout l;
  DmSim sim(l.total);
  const DilatedChannel write = dilate(build_controlled_overwrite());
  run_stage_on_sim(sim, l, m, theta, eps_star, write,
                   &res.per_round_overwrite);
  res.survival_m1 = sim.prob_zero(l.m1);
  if (sim.prob_zero(l.r) < 1.0 - 1e-12)
    throw std::runtime_error("run_single_stage: reset ancilla left ground");
  return res;
}

DoubleStageResult run_double_stage_with_params(int n, int m, double theta,
                                               double eps_star,
                                               Backend backend,
                                               int iterations) {
  if (n < 2) throw std::invalid_argument("run_double_stage: n must be >= 2");
  check_stage_args(m, theta, eps_star, backend);
  if (iterations <= 0) iterations = 3 * n;

  DoubleStageResult res;
  res.iterations = iterations;

  if (backend == Backend::fast) {
    res.inner = run_single_stage(m, theta, eps_star, Backend::fast);
    // M2 survives one iteration exactly when M1 was overwritten.
    res.survival_m2 =
        std::exp(iterations * std::log1p(-res.inner.survival_m1));
    return res;
  }

  const Layout l = double_stage_layout();
  DmSim sim(l.total);
  const DilatedChannel write = dilate(build_controlled_overwrite());
  const DilatedChannel reverse = dilate(build_reverse_overwrite());
  for (int it = 0; it < iterations; ++it) {
    run_stage_on_sim(sim, l, m, theta, eps_star, write,
                     it == 0 ? &res.inner.per_round_overwrite : nullptr);
    if (it == 0) res.inner.survival_m1 = sim.prob_zero(l.m1);
    sim.apply_dilated(reverse, {l.m1, l.m2}, {l.a1, l.a2});
    sim.reset(l.m1);
  }
  res.inner.m = m;
  res.inner.theta = theta;
  res.inner.eps_star = eps_star;
  res.inner.queries_used =
      static_cast<long long>(iterations) * m * (m + 1) / 2;
  res.survival_m2 = sim.prob_zero(l.m2);
  if (sim.prob_zero(l.r) < 1.0 - 1e-12)
    throw std::runtime_error("run_double_stage: reset ancilla left ground");
  return res;
}

DoubleStageResult run_double_stage(int n, double eps_star,
                                   double eps_threshold,
                                   std::pair<double, double> inner_targets,
                                   Backend backend, int iterations) {
  if (n < 2) throw std::invalid_argument("run_double_stage: n must be >= 2");
  const auto [s0_target, s1_target] = inner_targets;
  // Equal targets are allowed: the bounds constrain different hypotheses
  // (undriven survival >= s0_target, driven survival <= s1_target).
  if (!(s0_target > 0.0 && s0_target < 1.0) ||
      !(s1_target > 0.0 && s1_target < 1.0) || !(s1_target <= s0_target))
    throw std::invalid_argument("run_double_stage: bad inner targets");

  ProtocolTargets targets;
  targets.gamma = -std::log(s1_target);
  targets.eps = eps_threshold;
  targets.s0_min = s0_target;
  const SolvedParams inner = solve(targets);
  return run_double_stage_with_params(n, inner.m, inner.theta, eps_star,
                                      backend, iterations);
}

GlobalRecorderResult aggregate_m3(const std::vector<double>& per_test_s2) {
  GlobalRecorderResult res;
  res.per_test_f = per_test_s2;
  double log_s3 = 0.0;
  for (double s2 : per_test_s2) {
    if (!(s2 >= 0.0 && s2 <= 1.0))
      throw std::invalid_argument("aggregate_m3: survival outside [0, 1]");
    if (s2 >= 1.0) log_s3 = kLogSurvivalFloor;
    else if (log_s3 > kLogSurvivalFloor) log_s3 += std::log1p(-s2);
    if (log_s3 <= kLogSurvivalFloor) {
      log_s3 = kLogSurvivalFloor;
      res.underflow = true;
    }
  }
  res.survival_m3 = std::exp(log_s3);
  res.overwrite_estimate = -std::expm1(log_s3);
  return res;
}

const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::calibration_consistent: return "calibration_consistent";
    case Hypothesis::deviation_detected: return "deviation_detected";
  }
  return "unknown";
}

Hypothesis decide(double m3_overwrite_estimate) {
  return m3_overwrite_estimate < std::exp(-3.0)
             ? Hypothesis::calibration_consistent
             : Hypothesis::deviation_detected;
}

long long query_count(int n, long long m) {
  return 3LL * n * (m * (m + 1) / 2);
}

}  // namespace weakwalk
