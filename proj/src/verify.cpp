#include "weakwalk/verify.hpp"

#include <cmath>
#include <cstdio>
#include <tuple>

#include "weakwalk/channels.hpp"
#include "weakwalk/dmsim.hpp"
#include "weakwalk/matcore.hpp"
#include "weakwalk/pauli.hpp"
#include "weakwalk/protocol.hpp"
#include "weakwalk/survival.hpp"
#include "weakwalk/walk.hpp"

namespace weakwalk {

namespace {

// Deterministic stream so verify output is byte-identical run to run.
struct Rng {
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  double uniform() {  // [0, 1)
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  double symmetric() { return 2.0 * uniform() - 1.0; }
};

ComplexMatrix random_density(Rng& rng, int dim) {
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a(i, j) = complexd(rng.symmetric(), rng.symmetric());
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

std::string format_worst(double worst, const char* what) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "worst %s %.3e", what, worst);
  return buf;
}

CheckResult check_density_validation() {
  CheckResult r{"density_validation", false, ""};
  const bool mixed_ok =
      check_density(identity(2) / 2.0) == DensityDefect::none;
  ComplexMatrix bad_trace = ComplexMatrix::Zero(2, 2);
  bad_trace(0, 0) = 0.6;
  bad_trace(1, 1) = 0.5;
  ComplexMatrix bad_psd(2, 2);
  bad_psd << 0.5, 0.6, 0.6, 0.5;
  r.ok = mixed_ok &&
         check_density(bad_trace) == DensityDefect::trace_not_one &&
         check_density(bad_psd) == DensityDefect::not_positive;
  r.detail = r.ok ? "3 fixtures" : "fixture misclassified";
  return r;
}

std::vector<KrausChannel> reference_channels() {
  return {build_controlled_overwrite(), build_reverse_overwrite(),
          build_reset(), walk_channel(0.3),
          build_encoding_channel({1, 3, 0.4}),
          build_encoding_channel({1, 1, -0.7}),
          build_encoding_channel({2, 5, 0.25})};
}

CheckResult check_completeness() {
  CheckResult r{"channel_completeness", false, ""};
  double worst = 0.0;
  for (const KrausChannel& ch : reference_channels())
    worst = std::max(worst, completeness_defect(ch));
  r.ok = worst <= 1e-12;
  r.detail = format_worst(worst, "defect");
  return r;
}

CheckResult check_dilation() {
  CheckResult r{"dilation_equivalence", false, ""};
  Rng rng;
  double worst = 0.0;
  for (const KrausChannel& ch : reference_channels()) {
    const DilatedChannel d = dilate(ch);
    worst = std::max(
        worst,
        (d.unitary.adjoint() * d.unitary -
         ComplexMatrix::Identity(d.unitary.rows(), d.unitary.cols()))
            .cwiseAbs()
            .maxCoeff());
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix rho = random_density(rng, ch.dim);
      worst = std::max(worst, (apply(ch, rho) - apply_dilated(d, rho))
                                  .cwiseAbs()
                                  .maxCoeff());
    }
  }
  r.ok = worst <= 1e-10;
  r.detail = format_worst(worst, "mismatch");
  return r;
}

CheckResult check_oracle_equivalence() {
  CheckResult r{"survival_oracle_equivalence", false, ""};
  double worst = 0.0;
  for (double theta : {0.05, 0.0875, 0.3, 0.8}) {
    for (double eps : {0.0, 0.1, 0.25, -0.25, 0.5}) {
      for (int i : {1, 2, 3, 5, 10, 25, 59, 60, 61, 100, 200}) {
        const double exact = overwrite_prob_exact(i, theta, eps);
        const double oracle = overwrite_prob_recursion(i, theta, eps);
        const double err = std::abs(exact - oracle);
        const double bound = exact < 1e-6 ? 1e-12 : 1e-10 * exact;
        worst = std::max(worst, err / bound * 1e-10);
        if (err > bound) r.detail = "exceeded at i=" + std::to_string(i);
      }
    }
  }
  r.ok = r.detail.empty();
  if (r.ok) r.detail = format_worst(worst, "scaled error");
  return r;
}

CheckResult check_purity() {
  CheckResult r{"purity_formula", false, ""};
  Rng rng;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double phi = rng.uniform() * 2.0 * M_PI;
    const double theta = rng.uniform() * M_PI;
    const double eps = rng.symmetric() / 2.0;
    // Real-amplitude pure pointer state (the walk's reachable set).
    ComplexMatrix pure(2, 1);
    pure << std::cos(phi), std::sin(phi);
    const ComplexMatrix rho = pure * pure.adjoint();
    const WalkConfig cfg{theta, eps};
    const double simulated = purity(step_pointer(rho, cfg));
    worst = std::max(worst,
                     std::abs(simulated - (1.0 - purity_loss(cfg))));
  }
  r.ok = worst <= 1e-13;
  r.detail = format_worst(worst, "error");
  return r;
}

CheckResult check_gaussian_regime() {
  CheckResult r{"gaussian_regime_accuracy", false, ""};
  double worst = 0.0;
  for (double theta : {0.01, 0.0277, 0.0875, 0.3}) {
    for (double eps : {0.0, 0.1, 0.2, 0.25, 0.5}) {
      for (int i = 10; i <= 200; ++i) {
        if (i * eps * theta > 0.5) continue;
        const double exact = overwrite_prob_exact(i, theta, eps);
        if (exact <= 0.0) continue;
        worst = std::max(
            worst, std::abs(overwrite_prob_gaussian(i, theta, eps) - exact) /
                       exact);
      }
    }
  }
  r.ok = worst <= 0.05;
  r.detail = format_worst(worst, "relative error");
  return r;
}

CheckResult check_leading_regime() {
  CheckResult r{"leading_order_regime", false, ""};
  double worst = 0.0;
  const double fig1 = 0.086486;
  const std::tuple<int, double, double> points[] = {
      {25, fig1, 0.0}, {25, fig1, 0.25}, {85, 0.0277, 0.0}, {85, 0.0277, 0.2}};
  for (const auto& [m, theta, eps] : points) {
    const double exact =
        survival_curve(m, theta, eps, Track::exact).log_survival_final();
    const double lead = log_survival_leading_order(m, theta, eps);
    worst = std::max(worst, std::abs(lead - exact) / std::abs(exact));
  }
  r.ok = worst <= 0.10;
  r.detail = format_worst(worst, "relative error");
  return r;
}

CheckResult check_survival_shape() {
  CheckResult r{"survival_bounds_and_monotonicity", false, ""};
  bool shape_ok = true;
  for (double eps : {0.0, 0.25, 0.5}) {
    const SurvivalCurve c = survival_curve(120, 0.0875, eps, Track::exact);
    for (double p : c.per_round_overwrite)
      if (!(p >= 0.0 && p <= 1.0)) shape_ok = false;
    for (size_t i = 1; i < c.log_survival.size(); ++i)
      if (c.log_survival[i] > c.log_survival[i - 1] + 1e-15) shape_ok = false;
  }
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(0.05 * k);
  const MonotonicityReport scan = monotonicity_scan(85, 0.0277, grid);
  r.ok = shape_ok && scan.exact_strictly_decreasing;
  r.detail = shape_ok ? (scan.exact_strictly_decreasing
                             ? "bounds, monotone decay, driven ordering"
                             : "drive ordering violated")
                      : "per-round bounds violated";
  return r;
}

CheckResult check_backends() {
  CheckResult r{"backend_equivalence", false, ""};
  double worst = 0.0;
  for (int m : {1, 2, 3}) {
    for (double theta : {0.3, 0.8}) {
      for (double eps : {0.0, 0.25}) {
        const double fast =
            run_single_stage(m, theta, eps, Backend::fast).survival_m1;
        const double dm =
            run_single_stage(m, theta, eps, Backend::full_dm).survival_m1;
        worst = std::max(worst, std::abs(fast - dm));
      }
    }
  }
  const double fast2 =
      run_double_stage_with_params(2, 2, 0.3, 0.25, Backend::fast).survival_m2;
  const double dm2 =
      run_double_stage_with_params(2, 2, 0.3, 0.25, Backend::full_dm)
          .survival_m2;
  r.ok = worst <= 1e-9 && std::abs(fast2 - dm2) <= 1e-8;
  r.detail = format_worst(std::max(worst, std::abs(fast2 - dm2)), "gap");
  return r;
}

CheckResult check_povm() {
  CheckResult r{"povm_calibration", false, ""};
  double worst = 0.0;
  Rng rng;
  for (int trial = 0; trial < 500; ++trial) {
    const double hat = rng.symmetric();
    const PovmCoefficients c = povm_coefficients(hat);
    worst = std::max(worst, std::abs(c.c1 * (1.0 + hat) +
                                     c.c2 * (1.0 - hat) - 1.0));
    const double lambda = rng.symmetric();
    worst = std::max(worst,
                     std::abs(encode_probability(lambda, hat) -
                              (0.5 + deviation_to_eps_star(lambda, hat))));
  }
  r.ok = worst <= 1e-14;
  r.detail = format_worst(worst, "defect");
  return r;
}

CheckResult check_encoding() {
  CheckResult r{"encoding_agreement", false, ""};
  double worst = 0.0;
  Rng rng;
  for (int n : {1, 2}) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::int64_t t =
          1 + static_cast<std::int64_t>(rng.uniform() * ((1 << (2 * n)) - 1));
      const double lambda = rng.symmetric();
      const double hat = rng.symmetric();
      const long dim = 1L << n;
      const ComplexMatrix post =
          (ComplexMatrix::Identity(dim, dim) + lambda * pauli_matrix(n, t)) /
          static_cast<double>(dim);
      ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
      ground(0, 0) = 1.0;
      const ComplexMatrix out = weakwalk::apply(
          build_encoding_channel({n, t, hat}), tensor(post, ground));
      const ComplexMatrix sample =
          partial_trace(out, {static_cast<int>(dim), 2}, {1});
      worst = std::max(worst, std::abs(sample(0, 0).real() -
                                       encode_probability(lambda, hat)));
    }
  }
  r.ok = worst <= 1e-10;
  r.detail = format_worst(worst, "gap");
  return r;
}

CheckResult check_decision() {
  CheckResult r{"decision_boundary", false, ""};
  const double threshold = std::exp(-3.0);
  r.ok = decide(threshold) == Hypothesis::deviation_detected &&
         decide(threshold * (1.0 - 1e-9)) ==
             Hypothesis::calibration_consistent &&
         decide(0.0) == Hypothesis::calibration_consistent &&
         decide(1.0) == Hypothesis::deviation_detected;
  r.detail = "threshold exp(-3), boundary detects";
  return r;
}

CheckResult check_write_recurrence() {
  CheckResult r{"overwrite_survival_recurrence", false, ""};
  Rng rng;
  const KrausChannel write = build_controlled_overwrite();
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix rho_p = random_density(rng, 2);
    ComplexMatrix rho_m = ComplexMatrix::Zero(2, 2);
    const double p = rng.uniform();
    rho_m(0, 0) = p;
    rho_m(1, 1) = 1.0 - p;
    const ComplexMatrix out = weakwalk::apply(write, tensor(rho_p, rho_m));
    const ComplexMatrix m_out = partial_trace(out, {2, 2}, {1});
    worst = std::max(
        worst, std::abs(m_out(0, 0).real() - rho_p(0, 0).real() * p));
  }
  r.ok = worst <= 1e-12;
  r.detail = format_worst(worst, "gap");
  return r;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite() {
  return {check_density_validation(), check_completeness(), check_dilation(),
          check_oracle_equivalence(), check_purity(), check_gaussian_regime(),
          check_leading_regime(), check_survival_shape(), check_backends(),
          check_povm(), check_encoding(), check_decision(),
          check_write_recurrence()};
}

}  // namespace weakwalk
