#include "weakwalk/pauli.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace weakwalk {

namespace {

std::int64_t pow4(int n) { return std::int64_t{1} << (2 * n); }

ComplexMatrix pauli_1q(int digit) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (digit) {
    case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;                    // I
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;                    // X
    case 2: m(0, 1) = complexd(0, -1); m(1, 0) = complexd(0, 1); break;  // Y
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;                   // Z
  }
  return m;
}

// Eigenprojectors (I +/- P_t)/2 of a non-identity Pauli string.
ComplexMatrix pauli_projector(int n, std::int64_t t, int sign) {
  const long dim = 1L << n;
  return (ComplexMatrix::Identity(dim, dim) +
          static_cast<double>(sign) * pauli_matrix(n, t)) /
         2.0;
}

constexpr double kEigTol = 1e-12;

}  // namespace

ComplexMatrix pauli_matrix(int n, std::int64_t t) {
  if (n < 1 || n > 5) throw std::invalid_argument("pauli_matrix: bad n");
  if (t < 0 || t >= pow4(n)) throw std::invalid_argument("pauli_matrix: bad t");
  // Base-4 digits, most significant digit = first (most significant) qubit.
  ComplexMatrix out = pauli_1q(static_cast<int>((t >> (2 * (n - 1))) & 3));
  for (int q = 1; q < n; ++q)
    out = tensor(out, pauli_1q(static_cast<int>((t >> (2 * (n - 1 - q))) & 3)));
  return out;
}

ComplexMatrix choi_from_eigenvalues(int n, const std::vector<double>& lambda) {
  const std::int64_t count = pow4(n);
  if (static_cast<std::int64_t>(lambda.size()) != count)
    throw std::invalid_argument("choi: eigenvalue count must be 4^n");
  const long dim = 1L << n;
  ComplexMatrix choi = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (std::int64_t t = 0; t < count; ++t) {
    const ComplexMatrix p = pauli_matrix(n, t);
    choi += lambda[t] * tensor(p.transpose(), p);
  }
  return choi / static_cast<double>(count);
}

PauliChannelSpec make_pauli_spec(int n, std::vector<double> eigenvalues) {
  if (n < 1 || n > 3)
    throw std::invalid_argument("pauli spec: n must be in [1, 3]");
  if (static_cast<std::int64_t>(eigenvalues.size()) != pow4(n))
    throw std::invalid_argument("pauli spec: eigenvalue count must be 4^n");
  if (std::abs(eigenvalues[0] - 1.0) > kEigTol)
    throw std::invalid_argument("pauli spec: lambda_0 must be 1");
  for (double v : eigenvalues)
    if (!(std::abs(v) <= 1.0 + kEigTol))
      throw std::invalid_argument("pauli spec: |lambda_t| must be <= 1");
  // Full CP validation only where the Choi matrix stays small.
  if (n <= 2) {
    const ComplexMatrix choi = choi_from_eigenvalues(n, eigenvalues);
    if (min_eigenvalue_hermitian(choi) < -1e-10)
      throw std::invalid_argument("pauli spec: not completely positive");
  }
  return PauliChannelSpec{n, std::move(eigenvalues)};
}

PauliChannelSpec load_pauli_spec(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("cannot open " + json_path);
  nlohmann::json doc = nlohmann::json::parse(in);  // throws parse_error
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("eigenvalues"))
    throw std::invalid_argument(json_path +
                                ": expected {\"n\", \"eigenvalues\"} object");
  return make_pauli_spec(doc.at("n").get<int>(),
                         doc.at("eigenvalues").get<std::vector<double>>());
}

ComplexMatrix probe_state(int n, std::int64_t t) {
  if (t == 0) throw std::invalid_argument("probe_state: t must be nonzero");
  return pauli_projector(n, t, +1) / std::pow(2.0, n - 1);
}

PovmCoefficients povm_coefficients(double lambda_hat) {
  if (!(std::abs(lambda_hat) <= 1.0 + kEigTol))
    throw std::invalid_argument("povm_coefficients: |lambda_hat| must be <= 1");
  if (lambda_hat >= 0.0) return {1.0 / (1.0 + lambda_hat), 0.0};
  return {0.0, 1.0 / (1.0 - lambda_hat)};
}

double encode_probability(double lambda, double lambda_hat) {
  return 0.5 * (1.0 + (lambda - lambda_hat) / (1.0 + std::abs(lambda_hat)));
}

double deviation_to_eps_star(double lambda, double lambda_hat) {
  return (lambda - lambda_hat) / (2.0 * (1.0 + std::abs(lambda_hat)));
}

KrausChannel build_encoding_channel(const EncodingConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 2)
    throw std::invalid_argument("encoding channel: n must be 1 or 2");
  if (cfg.t <= 0 || cfg.t >= pow4(cfg.n))
    throw std::invalid_argument("encoding channel: bad t");
  if (!(std::abs(cfg.lambda_hat) <= 1.0 + kEigTol))
    throw std::invalid_argument("encoding channel: |lambda_hat| must be <= 1");

  const ComplexMatrix eye = identity(2);
  const ComplexMatrix flip = pauli_1q(1);
  const double a = std::abs(cfg.lambda_hat);
  // Projector carrying the calibrated POVM weight 1/(1+|lambda_hat|); its
  // outcome probability grows with lambda when lambda_hat >= 0 and falls
  // when lambda_hat < 0, so the sample flip rides on whichever branch falls:
  // the sample's |0> population then equals encode_probability either way.
  const ComplexMatrix p_main =
      pauli_projector(cfg.n, cfg.t, cfg.lambda_hat >= 0.0 ? +1 : -1);
  const ComplexMatrix p_rest =
      pauli_projector(cfg.n, cfg.t, cfg.lambda_hat >= 0.0 ? -1 : +1);
  const ComplexMatrix& on_main = cfg.lambda_hat >= 0.0 ? eye : flip;
  const ComplexMatrix& on_rest = cfg.lambda_hat >= 0.0 ? flip : eye;

  KrausChannel ch;
  ch.name = "deviation_encoding";
  ch.dim = static_cast<int>((1L << cfg.n) * 2);
  ch.ops = {tensor(p_main / std::sqrt(1.0 + a), on_main),
            tensor(p_rest, on_rest)};
  if (a > 0.0)
    ch.ops.push_back(tensor(std::sqrt(a / (1.0 + a)) * p_main, on_rest));
  return ch;
}

double PauliTestConfig::weak_signal_eps_p(int n) const {
  if (eps_p_prime) return *eps_p_prime;
  return eps_p / (2.0 * std::sqrt(std::log2(static_cast<double>(n))));
}

DemoResult run_estimation_demo(const PauliChannelSpec& truth,
                               const std::vector<double>& hypothesized,
                               const PauliTestConfig& cfg,
                               std::pair<double, double> inner_targets) {
  if (truth.n < 1 || truth.n > 3)
    throw std::invalid_argument("estimation demo: n must be in [1, 3]");
  if (hypothesized.size() != truth.eigenvalues.size())
    throw std::invalid_argument(
        "estimation demo: hypothesis length does not match 4^n");
  if (std::abs(hypothesized[0] - 1.0) > kEigTol)
    throw std::invalid_argument("estimation demo: lambda_hat_0 must be 1");
  for (double v : hypothesized)
    if (!(std::abs(v) <= 1.0 + kEigTol))
      throw std::invalid_argument(
          "estimation demo: |lambda_hat_t| must be <= 1");
  if (!(cfg.eps_p > 0.0 && cfg.eps_p <= 2.0))
    throw std::invalid_argument("estimation demo: eps_p must be in (0, 2]");

  DemoResult res;

  // All 4^n - 1 tests share the walk solved at the subroutine threshold.
  ProtocolTargets targets;
  targets.gamma = -std::log(inner_targets.second);
  targets.eps = cfg.subroutine_eps();
  targets.s0_min = inner_targets.first;
  res.inner = solve(targets);

  const std::int64_t count = pow4(truth.n);
  const int iterations = 3 * truth.n;
  std::vector<double> per_test_s2;
  per_test_s2.reserve(count - 1);
  res.per_test_eps_star.reserve(count - 1);
  for (std::int64_t t = 1; t < count; ++t) {
    const double eps_star =
        deviation_to_eps_star(truth.eigenvalues[t], hypothesized[t]);
    res.per_test_eps_star.push_back(eps_star);
    const double s1 =
        survival_curve(res.inner.m, res.inner.theta, eps_star, Track::exact)
            .survival();
    per_test_s2.push_back(std::exp(iterations * std::log1p(-s1)));
  }
  res.recorder = aggregate_m3(per_test_s2);
  res.verdict = decide(res.recorder.overwrite_estimate);
  return res;
}

StressRow weak_signal_stress(int n, const PauliTestConfig& cfg,
                             const StressScaling& scaling) {
  if (n < 2) throw std::invalid_argument("weak_signal_stress: n must be >= 2");
  if (!(cfg.eps_p > 0.0 && cfg.eps_p <= 2.0))
    throw std::invalid_argument("weak_signal_stress: eps_p must be in (0, 2]");

  const double eps = cfg.subroutine_eps();
  const double lock = scaling.m_theta_product > 0.0
                          ? scaling.m_theta_product
                          : 0.9 * 2.0 * std::sqrt(2.0 * std::log(2.0));

  StressRow row;
  row.n = n;
  row.m = static_cast<int>(std::ceil(
      scaling.m_coefficient * std::log2(static_cast<double>(n)) / (eps * eps)));
  row.theta = lock / row.m;
  row.eps_prime = cfg.weak_signal_eps_p(n) / 4.0;

  const double log_s1 =
      survival_curve(row.m, row.theta, row.eps_prime, Track::exact)
          .log_survival_final();
  row.neg_log_s1 = -log_s1;
  // M2 decays exp(-Omega(n)) against sub-threshold drives...
  row.s2 = std::exp(3.0 * n * std::log1p(-std::exp(log_s1)));
  // ...which the 4^n - 1 parallel tests cannot overcome on M3.
  row.s3 = std::exp((std::pow(4.0, n) - 1.0) * std::log1p(-row.s2));
  return row;
}

}  // namespace weakwalk
