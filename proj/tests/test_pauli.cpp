#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support.hpp"
#include "weakwalk/pauli.hpp"

using namespace weakwalk;

namespace {

namespace fs = std::filesystem;

// Writes content to a fresh temp file and returns its path.
std::string temp_spec(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "weakwalk_pauli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << content;
  out.close();
  return p.string();
}

}  // namespace

TEST_CASE("pauli strings enumerate base-4, first qubit most significant") {
  using C = std::complex<double>;
  const ComplexMatrix I = pauli_matrix(1, 0);
  const ComplexMatrix X = pauli_matrix(1, 1);
  const ComplexMatrix Y = pauli_matrix(1, 2);
  const ComplexMatrix Z = pauli_matrix(1, 3);
  CHECK(I(0, 0) == C(1, 0));
  CHECK(I(0, 1) == C(0, 0));
  CHECK(I(1, 1) == C(1, 0));
  CHECK(X(0, 1) == C(1, 0));
  CHECK(X(1, 0) == C(1, 0));
  CHECK(X(0, 0) == C(0, 0));
  CHECK(Y(0, 1) == C(0, -1));
  CHECK(Y(1, 0) == C(0, 1));
  CHECK(Z(0, 0) == C(1, 0));
  CHECK(Z(1, 1) == C(-1, 0));

  // t = 7 = 4*1 + 3 -> X on the first qubit, Z on the second.
  CHECK(testkit::max_abs_diff(pauli_matrix(2, 7), tensor(X, Z)) == 0.0);
  // t = 13 = 4*3 + 1 -> Z (x) X.
  CHECK(testkit::max_abs_diff(pauli_matrix(2, 13), tensor(Z, X)) == 0.0);
  CHECK(pauli_matrix(2, 9).rows() == 4);

  CHECK_THROWS_AS(pauli_matrix(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(pauli_matrix(1, -1), std::invalid_argument);
  CHECK_THROWS_AS(pauli_matrix(2, 16), std::invalid_argument);
  CHECK_THROWS_AS(pauli_matrix(0, 0), std::invalid_argument);
}

TEST_CASE("spec validation enforces shape, range, and positivity") {
  const PauliChannelSpec ok = make_pauli_spec(1, {1.0, 0.9, 0.8, 0.85});
  CHECK(ok.n == 1);
  CHECK(ok.eigenvalues.size() == 4);

  CHECK_THROWS_AS(make_pauli_spec(1, {0.99, 0.9, 0.8, 0.85}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_pauli_spec(1, {1.0, 1.1, 0.8, 0.85}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_pauli_spec(1, {1.0, 0.9, 0.8}), std::invalid_argument);
  CHECK_THROWS_AS(make_pauli_spec(2, {1.0, 0.9, 0.8, 0.85}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_pauli_spec(0, {1.0}), std::invalid_argument);

  // Eigenvalue vectors in the unit cube are not automatically channels.
  CHECK_THROWS_WITH_AS(make_pauli_spec(1, {1.0, 0.9, 0.9, -0.9}),
                       doctest::Contains("positive"), std::invalid_argument);
  // Conjugation by X sits exactly on the positivity boundary.
  CHECK_NOTHROW(make_pauli_spec(1, {1.0, 1.0, -1.0, -1.0}));

  // Above two qubits only shape and range are checked.
  std::vector<double> big(64, 0.9);
  big[0] = 1.0;
  for (std::size_t i = 1; i < big.size(); i += 2) big[i] = -0.9;
  CHECK_NOTHROW(make_pauli_spec(3, big));
}

TEST_CASE("choi matrix of reference channels") {
  const ComplexMatrix id = choi_from_eigenvalues(1, {1.0, 1.0, 1.0, 1.0});
  ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  CHECK(testkit::max_abs_diff(id, bell) <= 1e-15);

  const ComplexMatrix dep = choi_from_eigenvalues(1, {1.0, 0.0, 0.0, 0.0});
  CHECK(testkit::max_abs_diff(dep, ComplexMatrix::Identity(4, 4) * 0.25) <=
        1e-15);

  const ComplexMatrix c2 =
      choi_from_eigenvalues(2, std::vector<double>(16, 1.0));
  CHECK(c2.rows() == 16);
  CHECK(std::abs(c2.trace().real() - 1.0) <= 1e-13);
}

TEST_CASE("probe states") {
  const ComplexMatrix z = probe_state(1, 3);  // (I + Z)/2
  CHECK(z(0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(z(1, 1)) <= 1e-15);

  const ComplexMatrix x = probe_state(1, 1);  // (I + X)/2 = |+><+|
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      CHECK(x(r, c).real() == doctest::Approx(0.5).epsilon(1e-15));

  for (std::int64_t t : {1, 5, 9, 15}) {
    const ComplexMatrix rho = probe_state(2, t);
    CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-14);
    CHECK(min_eigenvalue_hermitian(rho) >= -1e-14);
  }
  CHECK_THROWS_AS(probe_state(1, 0), std::invalid_argument);
}

TEST_CASE("povm coefficients: branch rule and calibration identity") {
  const PovmCoefficients at0 = povm_coefficients(0.0);
  CHECK(at0.c1 == 1.0);
  CHECK(at0.c2 == 0.0);

  const PovmCoefficients pos = povm_coefficients(0.5);
  CHECK(pos.c1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(pos.c2 == 0.0);

  const PovmCoefficients neg = povm_coefficients(-0.5);
  CHECK(neg.c1 == 0.0);
  CHECK(neg.c2 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  testkit::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double hat = rng.symmetric();
    const PovmCoefficients c = povm_coefficients(hat);
    CHECK(std::abs(c.c1 * (1.0 + hat) + c.c2 * (1.0 - hat) - 1.0) <= 1e-14);
    CHECK(c.c1 >= 0.0);
    CHECK(c.c2 >= 0.0);
  }
  CHECK_THROWS_AS(povm_coefficients(1.5), std::invalid_argument);
  CHECK_THROWS_AS(povm_coefficients(-1.5), std::invalid_argument);
}

TEST_CASE("deviation encoding closed form") {
  CHECK(encode_probability(0.9, 0.9) == 0.5);
  CHECK(encode_probability(1.0, 0.0) == 1.0);
  CHECK(encode_probability(0.0, -0.5) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(encode_probability(0.4, 0.0) ==
        doctest::Approx(0.7).epsilon(1e-15));

  testkit::Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    const double lambda = rng.symmetric();
    const double hat = rng.symmetric();
    const double p0 = encode_probability(lambda, hat);
    const double eps = deviation_to_eps_star(lambda, hat);
    CHECK(std::abs(p0 - (0.5 + eps)) <= 1e-15);
    CHECK(std::abs(eps) <= 0.5 * std::abs(lambda - hat) + 1e-15);
    CHECK(p0 >= -1e-15);
    CHECK(p0 <= 1.0 + 1e-15);
  }
}

TEST_CASE("encoding channel realizes the closed form on full matrices") {
  testkit::Rng rng(37);
  double worst = 0.0;
  for (int n : {1, 2}) {
    const long dim = 1L << n;
    for (int trial = 0; trial < 25; ++trial) {
      const std::int64_t t =
          1 + static_cast<std::int64_t>(rng.uniform() * ((1 << (2 * n)) - 1));
      const double lambda = rng.symmetric();
      const double hat = rng.symmetric();
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
  CHECK(worst <= 1e-10);
}

TEST_CASE("encoding channel covers the mirrored branch") {
  // lambda_hat < 0 flips which projector feeds the sample qubit; the
  // full matrix must still land on the closed form.
  const double hat = -0.5;
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  const ComplexMatrix post = ComplexMatrix::Identity(2, 2) * 0.5;  // lambda=0
  const ComplexMatrix out = weakwalk::apply(build_encoding_channel({1, 1, hat}),
                                            tensor(post, ground));
  const ComplexMatrix sample = partial_trace(out, {2, 2}, {1});
  CHECK(sample(0, 0).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(build_encoding_channel({1, 1, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(build_encoding_channel({3, 1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_encoding_channel({1, 0, 0.0}), std::invalid_argument);
}

TEST_CASE("json loader") {
  const std::string good = temp_spec(
      "good.json", R"({"n": 1, "eigenvalues": [1.0, 0.9, 0.8, 0.85]})");
  const PauliChannelSpec spec = load_pauli_spec(good);
  CHECK(spec.n == 1);
  CHECK(spec.eigenvalues[3] == 0.85);

  CHECK_THROWS_AS(load_pauli_spec("/nonexistent/nowhere.json"),
                  std::runtime_error);
  CHECK_THROWS_AS(load_pauli_spec(temp_spec("bad.json", "{ not json")),
                  nlohmann::json::parse_error);
  CHECK_THROWS_AS(
      load_pauli_spec(temp_spec("keys.json", R"({"n": 1})")),
      std::invalid_argument);
  CHECK_THROWS_AS(
      load_pauli_spec(temp_spec(
          "noncp.json", R"({"n": 1, "eigenvalues": [1.0, 0.9, 0.9, -0.9]})")),
      std::invalid_argument);
}

TEST_CASE("test configuration thresholds") {
  PauliTestConfig cfg;
  cfg.eps_p = 0.4;
  CHECK(cfg.subroutine_eps() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(cfg.weak_signal_eps_p(4) ==
        doctest::Approx(0.4 / (2.0 * std::sqrt(2.0))).epsilon(1e-15));
  cfg.eps_p_prime = 0.07;
  CHECK(cfg.weak_signal_eps_p(4) == 0.07);
  CHECK(cfg.weak_signal_eps_p(1024) == 0.07);
}

TEST_CASE("estimation demo: calibrated channel leaves the recorder clean") {
  const PauliChannelSpec truth = make_pauli_spec(1, {1.0, 0.9, 0.8, 0.85});
  PauliTestConfig cfg;
  cfg.eps_p = 0.4;
  const DemoResult res = run_estimation_demo(truth, truth.eigenvalues, cfg);

  CHECK(res.verdict == Hypothesis::calibration_consistent);
  REQUIRE(res.per_test_eps_star.size() == 3);
  for (double e : res.per_test_eps_star) CHECK(e == 0.0);

  // Every test runs the undriven walk, so the M3 mark rate follows from the
  // certified undriven survival alone.
  const double s0 = res.inner.achieved_s0;
  const double s2 = std::pow(1.0 - s0, 3);
  const double m3 = 1.0 - std::pow(1.0 - s2, 3);
  CHECK(res.recorder.overwrite_estimate ==
        doctest::Approx(m3).epsilon(1e-12));
  CHECK(res.recorder.overwrite_estimate <= 1e-5);
}

TEST_CASE("estimation demo: one deviating eigenvalue trips detection") {
  const PauliChannelSpec truth = make_pauli_spec(1, {1.0, 0.4, 0.0, 0.0});
  const std::vector<double> hyp{1.0, 0.0, 0.0, 0.0};
  PauliTestConfig cfg;
  cfg.eps_p = 0.4;
  const DemoResult res = run_estimation_demo(truth, hyp, cfg);

  CHECK(res.verdict == Hypothesis::deviation_detected);
  REQUIRE(res.per_test_eps_star.size() == 3);
  CHECK(res.per_test_eps_star[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(res.per_test_eps_star[1] == 0.0);
  CHECK(res.per_test_eps_star[2] == 0.0);
  CHECK(res.recorder.overwrite_estimate >= 0.9);

  // The walk is solved once at the subroutine threshold, shared by all tests.
  const SolvedParams direct =
      solve({-std::log(0.01), cfg.subroutine_eps(), 0.99});
  CHECK(res.inner.m == direct.m);
  CHECK(res.inner.theta == direct.theta);
}

TEST_CASE("estimation demo validation") {
  const PauliChannelSpec truth = make_pauli_spec(1, {1.0, 0.9, 0.8, 0.85});
  PauliTestConfig cfg;
  cfg.eps_p = 0.4;

  CHECK_THROWS_AS(
      run_estimation_demo(truth, {1.0, 0.9, 0.8}, cfg),
      std::invalid_argument);
  CHECK_THROWS_AS(
      run_estimation_demo(truth, {0.5, 0.9, 0.8, 0.85}, cfg),
      std::invalid_argument);
  CHECK_THROWS_AS(
      run_estimation_demo(truth, {1.0, 0.9, 0.8, 1.2}, cfg),
      std::invalid_argument);

  PauliTestConfig zero;
  zero.eps_p = 0.0;
  CHECK_THROWS_AS(run_estimation_demo(truth, truth.eigenvalues, zero),
                  std::invalid_argument);
  PauliTestConfig wide;
  wide.eps_p = 2.5;
  CHECK_THROWS_AS(run_estimation_demo(truth, truth.eigenvalues, wide),
                  std::invalid_argument);

  PauliChannelSpec big;
  big.n = 4;
  big.eigenvalues.assign(256, 0.0);
  big.eigenvalues[0] = 1.0;
  CHECK_THROWS_AS(run_estimation_demo(big, big.eigenvalues, cfg),
                  std::invalid_argument);

  // The hypothesis table is a raw vector: it need not be a channel itself,
  // only calibrated (lambda_hat_0 = 1) and in range.
  CHECK_NOTHROW(run_estimation_demo(truth, {1.0, 0.9, 0.9, -0.9}, cfg));
}

TEST_CASE("weak-signal stress: sub-threshold drives never trip detection") {
  PauliTestConfig cfg;
  cfg.eps_p = 0.4;

  std::vector<StressRow> rows;
  for (int n : {4, 9, 16, 25}) rows.push_back(weak_signal_stress(n, cfg));

  const double eps = cfg.subroutine_eps();
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const StressRow& r = rows[i];
    // m = ceil(coeff log2(n) / eps^2) with the default lock split as theta.
    CHECK(r.m == static_cast<int>(
                     std::ceil(0.5 * std::log2(double(r.n)) / (eps * eps))));
    CHECK(r.theta * r.m ==
          doctest::Approx(0.9 * 2.0 * std::sqrt(2.0 * std::log(2.0)))
              .epsilon(1e-12));
    CHECK(r.eps_prime ==
          doctest::Approx(cfg.weak_signal_eps_p(r.n) / 4.0).epsilon(1e-15));
    lo = std::min(lo, r.neg_log_s1);
    hi = std::max(hi, r.neg_log_s1);
    if (i > 0) {
      CHECK(r.s2 < rows[i - 1].s2);
      CHECK(r.s3 > rows[i - 1].s3);
    }
  }
  // The 1/sqrt(log2 n) schedule pins the single-stage exponent to O(1)...
  CHECK(hi / lo <= 1.1);
  // ...so the exponentially many parallel tests still cannot mark M3.
  CHECK(rows.back().s3 >= 0.999);

  CHECK_THROWS_AS(weak_signal_stress(1, cfg), std::invalid_argument);
  PauliTestConfig zero;
  zero.eps_p = 0.0;
  CHECK_THROWS_AS(weak_signal_stress(4, zero), std::invalid_argument);

  StressScaling custom;
  custom.m_coefficient = 1.0;
  custom.m_theta_product = 1.5;
  const StressRow r = weak_signal_stress(4, cfg, custom);
  CHECK(r.m == static_cast<int>(std::ceil(1.0 * 2.0 / (eps * eps))));
  CHECK(r.theta * r.m == doctest::Approx(1.5).epsilon(1e-12));
}
