#include "weakwalk/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace weakwalk {

namespace {

constexpr double kCompletenessTol = 1e-12;
constexpr double kGramSchmidtSkip = 1e-9;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

double completeness_defect(const KrausChannel& ch) {
  ComplexMatrix sum = ComplexMatrix::Zero(ch.dim, ch.dim);
  for (const ComplexMatrix& k : ch.ops) sum += k.adjoint() * k;
  return (sum - ComplexMatrix::Identity(ch.dim, ch.dim)).cwiseAbs().maxCoeff();
}

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.dim || rho.cols() != ch.dim)
    throw std::invalid_argument("apply: state dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim, ch.dim);
  for (const ComplexMatrix& k : ch.ops) out += k * rho * k.adjoint();
  return out;
}

KrausChannel build_controlled_overwrite() {
  const ComplexMatrix p0 = unit_matrix(2, 0, 0);
  const ComplexMatrix p1 = unit_matrix(2, 1, 1);
  KrausChannel ch;
  ch.name = "controlled_overwrite";
  ch.dim = 4;
  ch.ops = {tensor(p0, identity(2)), tensor(p1, unit_matrix(2, 1, 0)),
            tensor(p1, unit_matrix(2, 1, 1))};
  return ch;
}

KrausChannel build_reverse_overwrite() {
  const ComplexMatrix p0 = unit_matrix(2, 0, 0);
  const ComplexMatrix p1 = unit_matrix(2, 1, 1);
  KrausChannel ch;
  ch.name = "reverse_overwrite";
  ch.dim = 4;
  ch.ops = {tensor(p1, identity(2)), tensor(p0, unit_matrix(2, 1, 0)),
            tensor(p0, unit_matrix(2, 1, 1))};
  return ch;
}

KrausChannel build_reset() {
  KrausChannel ch;
  ch.name = "reset";
  ch.dim = 2;
  ch.ops = {unit_matrix(2, 0, 0), unit_matrix(2, 0, 1)};
  return ch;
}

DilatedChannel dilate(const KrausChannel& ch) {
  if (ch.ops.empty()) throw std::invalid_argument("dilate: no Kraus operators");
  if (completeness_defect(ch) > kCompletenessTol)
    throw std::invalid_argument("dilate: channel is not trace preserving");

  DilatedChannel d;
  d.sys_dim = ch.dim;
  d.anc_dim = next_pow2(static_cast<int>(ch.ops.size()));
  const int big = d.sys_dim * d.anc_dim;
  if (big > kMaxDim)
    throw std::invalid_argument("dilate: dilated dimension out of range");

  // V = sum_k K_k (x) |k>_anc maps |s> to sum_k (K_k|s>) (x) |k>; row index
  // is s_out * anc_dim + k because the system is the high factor.
  d.isometry = ComplexMatrix::Zero(big, d.sys_dim);
  for (int k = 0; k < static_cast<int>(ch.ops.size()); ++k)
    for (int r = 0; r < d.sys_dim; ++r)
      for (int c = 0; c < d.sys_dim; ++c)
        d.isometry(r * d.anc_dim + k, c) += ch.ops[k](r, c);

  // Unitary completion: column s*anc_dim carries V's column s (so the
  // ancilla ground slice reproduces the isometry); the remaining columns are
  // Gram-Schmidt completions from canonical basis vectors in index order.
  d.unitary = ComplexMatrix::Zero(big, big);
  std::vector<int> filled;
  filled.reserve(big);
  for (int s = 0; s < d.sys_dim; ++s) {
    d.unitary.col(s * d.anc_dim) = d.isometry.col(s);
    filled.push_back(s * d.anc_dim);
  }
  int candidate = 0;
  for (int col = 0; col < big; ++col) {
    if (col % d.anc_dim == 0) continue;  // isometry slot
    while (true) {
      if (candidate >= big)
        throw std::runtime_error("dilate: completion basis exhausted");
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(big);
      v(candidate++) = 1.0;
      for (int f : filled) v -= d.unitary.col(f).dot(v) * d.unitary.col(f);
      const double norm = v.norm();
      if (norm < kGramSchmidtSkip) continue;  // already spanned
      d.unitary.col(col) = v / norm;
      filled.push_back(col);
      break;
    }
  }
  return d;
}

ComplexMatrix apply_dilated(const DilatedChannel& d, const ComplexMatrix& rho) {
  if (rho.rows() != d.sys_dim || rho.cols() != d.sys_dim)
    throw std::invalid_argument("apply_dilated: state dimension mismatch");
  ComplexMatrix ground = ComplexMatrix::Zero(d.anc_dim, d.anc_dim);
  ground(0, 0) = 1.0;
  ComplexMatrix big = d.unitary * tensor(rho, ground) * d.unitary.adjoint();
  return partial_trace(big, {d.sys_dim, d.anc_dim}, {0});
}

}  // namespace weakwalk
