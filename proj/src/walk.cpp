#include "weakwalk/walk.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace weakwalk {

namespace {

constexpr double kStrongTol = 1e-12;
constexpr double kWeakSpreadTol = 1e-10;

void check_config(const WalkConfig& cfg) {
  if (!(std::abs(cfg.eps_star) <= 0.5))
    throw std::invalid_argument("walk: |eps_star| must be <= 1/2");
  if (!(cfg.theta >= 0.0 && cfg.theta <= M_PI))
    throw std::invalid_argument("walk: theta must be in [0, pi]");
}

}  // namespace

ComplexMatrix rotation_y(double angle) {
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  ComplexMatrix r(2, 2);
  r << c, -s, s, c;
  return r;
}

ComplexMatrix walk_unitary(double theta) {
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  u.block(0, 0, 2, 2) = rotation_y(theta);
  u.block(2, 2, 2, 2) = rotation_y(-theta);
  return u;
}

KrausChannel walk_channel(double theta) {
  KrausChannel ch;
  ch.name = "walk";
  ch.dim = 4;
  ch.ops = {walk_unitary(theta)};
  return ch;
}

ComplexMatrix step_pointer(const ComplexMatrix& rho_p, const WalkConfig& cfg) {
  check_config(cfg);
  if (rho_p.rows() != 2 || rho_p.cols() != 2)
    throw std::invalid_argument("step_pointer: pointer must be a qubit");
  const ComplexMatrix rp = rotation_y(cfg.theta);
  const ComplexMatrix rm = rotation_y(-cfg.theta);
  return (0.5 + cfg.eps_star) * rp * rho_p * rp.adjoint() +
         (0.5 - cfg.eps_star) * rm * rho_p * rm.adjoint();
}

double purity_loss(const WalkConfig& cfg) {
  check_config(cfg);
  const double s = std::sin(cfg.theta);
  return (1.0 - 4.0 * cfg.eps_star * cfg.eps_star) * s * s / 2.0;
}

const char* to_string(DriveClass cls) {
  switch (cls) {
    case DriveClass::weak: return "weak";
    case DriveClass::strong: return "strong";
    case DriveClass::neither: return "neither";
  }
  return "unknown";
}

DriveReport classify_drive(const KrausChannel& step, int pointer_dim) {
  if (pointer_dim < 1 || step.dim % pointer_dim != 0)
    throw std::invalid_argument("classify_drive: pointer_dim must divide dim");
  const int in_dim = step.dim / pointer_dim;
  if (in_dim < 2)
    throw std::invalid_argument("classify_drive: no input register");

  std::vector<ComplexMatrix> probes;
  for (int b = 0; b < in_dim; ++b) probes.push_back(unit_matrix(in_dim, b, b));
  probes.push_back(identity(in_dim) / static_cast<double>(in_dim));

  double lo = 1.0, hi = 0.0, sum = 0.0;
  int count = 0;
  for (int i = 0; i < pointer_dim; ++i) {
    const ComplexMatrix site = unit_matrix(pointer_dim, i, i);
    for (const ComplexMatrix& probe : probes) {
      const ComplexMatrix out = weakwalk::apply(step, tensor(probe, site));
      const ComplexMatrix ptr = partial_trace(out, {in_dim, pointer_dim}, {1});
      const double ret = ptr(i, i).real();
      lo = std::min(lo, ret);
      hi = std::max(hi, ret);
      sum += ret;
      ++count;
    }
  }

  DriveReport report;
  if (hi < kStrongTol) {
    report.cls = DriveClass::strong;
    report.eta = 1.0;
  } else if (hi - lo <= kWeakSpreadTol) {
    report.cls = DriveClass::weak;
    report.eta = 1.0 - sum / count;
  } else {
    report.cls = DriveClass::neither;
    report.eta = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace weakwalk
