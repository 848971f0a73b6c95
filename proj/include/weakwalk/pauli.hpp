// Memory-frugal Pauli-channel eigenvalue testing.
//
// A Pauli channel on n qubits is described by its eigenvalue vector
// lambda in [-1, 1]^(4^n): C(P_t) = lambda_t P_t, indexed base-4 with
// I=0, X=1, Y=2, Z=3 and the most significant digit on the first qubit.
//
// For each index t the hypothesized lambda_hat_t fixes a two-outcome POVM
// E_t = c1 P_{t,+} + c2 P_{t,-} over the P_t eigenprojectors, calibrated so
// that measuring C(probe) with probe = (I + P_t)/2^n yields outcome
// probabilities (1/2, 1/2) exactly when lambda_t = lambda_hat_t. The outcome
// is recorded unitarily into a sample qubit, whose |0> population
//
//   p0 = (1/2) (1 + (lambda_t - lambda_hat_t) / (1 + |lambda_hat_t|))
//
// feeds the walk as input bias eps_star = p0 - 1/2. Deviations at least
// eps_p in one eigenvalue become drives of strength >= eps_p / 4 (the
// denominator is at most 2, and the recorder needs only eps_p/2 / 2).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weakwalk/channels.hpp"
#include "weakwalk/matcore.hpp"
#include "weakwalk/params.hpp"
#include "weakwalk/protocol.hpp"

namespace weakwalk {

// Pauli string P_t on n qubits, t in [0, 4^n).
ComplexMatrix pauli_matrix(int n, std::int64_t t);

struct PauliChannelSpec {
  int n = 0;
  std::vector<double> eigenvalues;  // size 4^n
};

// Validates shape, lambda_0 = 1, |lambda_t| <= 1, and (for n <= 2) complete
// positivity via the Choi matrix (1/4^n) sum_t lambda_t P_t^T (x) P_t >= 0.
// Throws std::invalid_argument naming the failed check.
PauliChannelSpec make_pauli_spec(int n, std::vector<double> eigenvalues);

// Parses {"n": int, "eigenvalues": [...]} and validates as make_pauli_spec.
PauliChannelSpec load_pauli_spec(const std::string& json_path);

// Choi matrix of the eigenvalue vector (dimension 4^n).
ComplexMatrix choi_from_eigenvalues(int n, const std::vector<double>& lambda);

// The probe (I + P_t)/2^n, t != 0; its image under the channel is
// (I + lambda_t P_t)/2^n.
ComplexMatrix probe_state(int n, std::int64_t t);

struct PovmCoefficients {
  double c1 = 0.0;  // weight on P_{t,+}
  double c2 = 0.0;  // weight on P_{t,-}
};

// Maximum-sensitivity calibrated pair: lambda_hat >= 0 selects
// (1/(1+lambda_hat), 0), lambda_hat < 0 selects (0, 1/(1-lambda_hat)).
// Calibration identity: c1 (1 + lambda_hat) + c2 (1 - lambda_hat) = 1.
PovmCoefficients povm_coefficients(double lambda_hat);

double encode_probability(double lambda, double lambda_hat);
double deviation_to_eps_star(double lambda, double lambda_hat);

struct EncodingConfig {
  int n = 0;
  std::int64_t t = 0;
  double lambda_hat = 0.0;
};

// The POVM as a channel on work register (high) x sample qubit (low). The
// sample is flipped on the branch whose probability falls with lambda, so
// its |0> population realizes encode_probability for either sign of
// lambda_hat. At lambda_hat = 0 the third operator vanishes and the channel
// degenerates to the projective P_{t,+/-} measurement. Requires n <= 2,
// t != 0.
KrausChannel build_encoding_channel(const EncodingConfig& cfg);

struct PauliTestConfig {
  double eps_p = 0.0;                     // detection threshold on |lambda - lambda_hat|
  std::optional<double> eps_p_prime;      // weak-signal threshold override

  double subroutine_eps() const { return eps_p / 4.0; }
  // Default eps_p / (2 sqrt(log2 n)).
  double weak_signal_eps_p(int n) const;
};

struct DemoResult {
  SolvedParams inner;                     // shared by all 4^n - 1 tests
  std::vector<double> per_test_eps_star;  // index t - 1
  GlobalRecorderResult recorder;
  Hypothesis verdict = Hypothesis::calibration_consistent;
};

// Runs the full fast-track estimation protocol: one double stage per t in
// [1, 4^n), aggregated on M3 and thresholded at exp(-3). Requires n <= 3
// and matching spec/hypothesis lengths.
DemoResult run_estimation_demo(const PauliChannelSpec& truth,
                               const std::vector<double>& hypothesized,
                               const PauliTestConfig& cfg,
                               std::pair<double, double> inner_targets = {
                                   0.99, 0.01});

struct StressScaling {
  double m_coefficient = 0.5;   // m = ceil(coeff * log2(n) / eps^2)
  double m_theta_product = 0.0; // 0 selects the solver's default lock
};

struct StressRow {
  int n = 0;
  int m = 0;
  double theta = 0.0;
  double eps_prime = 0.0;   // subroutine-scale weak signal
  double neg_log_s1 = 0.0;  // stays O(1) as n grows
  double s2 = 0.0;          // decays exp(-Omega(n))
  double s3 = 0.0;          // global survival against 4^n - 1 tests
};

// Sub-threshold drives must not trip detection even though m grows with n:
// with eps' ~ eps / sqrt(log2 n) the drive term of -ln S1 is pinned at a
// constant, while genuine signals grow linearly in m.
StressRow weak_signal_stress(int n, const PauliTestConfig& cfg,
                             const StressScaling& scaling = {});

}  // namespace weakwalk
