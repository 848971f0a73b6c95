#include "weakwalk/matcore.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace weakwalk {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ComplexMatrix identity(int dim) {
  require(dim >= 1 && dim <= kMaxDim, "identity: dimension out of range");
  return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix dagger(const ComplexMatrix& m) { return m.adjoint(); }

ComplexMatrix unit_matrix(int dim, int i, int j) {
  require(dim >= 1 && dim <= kMaxDim, "unit_matrix: dimension out of range");
  require(i >= 0 && i < dim && j >= 0 && j < dim,
          "unit_matrix: index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  require(rows >= 1 && rows <= kMaxDim && cols >= 1 && cols <= kMaxDim,
          "tensor: product dimension out of range");
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  require(!dims.empty(), "partial_trace: empty dims");
  long total = 1;
  for (int d : dims) {
    require(d >= 1, "partial_trace: nonpositive subsystem dimension");
    total *= d;
    require(total <= kMaxDim, "partial_trace: dimension out of range");
  }
  require(rho.rows() == total && rho.cols() == total,
          "partial_trace: dims do not match matrix");
  const int k = static_cast<int>(dims.size());
  std::vector<bool> kept(k, false);
  int prev = -1;
  for (int pos : keep) {
    require(pos > prev && pos < k, "partial_trace: keep not ascending");
    kept[pos] = true;
    prev = pos;
  }

  long out_dim = 1;
  for (int s = 0; s < k; ++s)
    if (kept[s]) out_dim *= dims[s];

  // Index strides, most significant subsystem first.
  std::vector<long> stride(k);
  long acc = 1;
  for (int s = k - 1; s >= 0; --s) {
    stride[s] = acc;
    acc *= dims[s];
  }

  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  std::vector<int> rd(k), cd(k);
  for (long r = 0; r < total; ++r) {
    for (int s = 0; s < k; ++s) rd[s] = static_cast<int>(r / stride[s]) % dims[s];
    for (long c = 0; c < total; ++c) {
      for (int s = 0; s < k; ++s)
        cd[s] = static_cast<int>(c / stride[s]) % dims[s];
      bool diagonal = true;
      for (int s = 0; s < k && diagonal; ++s)
        if (!kept[s] && rd[s] != cd[s]) diagonal = false;
      if (!diagonal) continue;
      long ro = 0, co = 0;
      for (int s = 0; s < k; ++s) {
        if (!kept[s]) continue;
        ro = ro * dims[s] + rd[s];
        co = co * dims[s] + cd[s];
      }
      out(ro, co) += rho(r, c);
    }
  }
  return out;
}

const char* to_string(DensityDefect defect) {
  switch (defect) {
    case DensityDefect::none: return "none";
    case DensityDefect::bad_shape: return "bad_shape";
    case DensityDefect::not_hermitian: return "not_hermitian";
    case DensityDefect::trace_not_one: return "trace_not_one";
    case DensityDefect::not_positive: return "not_positive";
  }
  return "unknown";
}

double min_eigenvalue_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h,
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

namespace {

// Above the exact-eigensolve size, probe positivity with a Cholesky
// factorization of rho shifted up by |psd_floor|: success certifies
// min eig >= psd_floor up to factorization error, which is all the
// downstream checks need. Violations smaller than the shift pass.
bool psd_within_floor(const ComplexMatrix& h, double psd_floor) {
  if (h.rows() <= 16) return min_eigenvalue_hermitian(h) >= psd_floor;
  ComplexMatrix shifted =
      h + (-psd_floor) * ComplexMatrix::Identity(h.rows(), h.cols());
  Eigen::LLT<ComplexMatrix> llt(shifted);
  return llt.info() == Eigen::Success;
}

}  // namespace

DensityDefect check_density(const ComplexMatrix& rho,
                            const DensityTolerances& tol) {
  if (rho.rows() != rho.cols() || rho.rows() < 1 || rho.rows() > kMaxDim)
    return DensityDefect::bad_shape;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity)
    return DensityDefect::not_hermitian;
  if (std::abs(rho.trace().real() - 1.0) > tol.trace ||
      std::abs(rho.trace().imag()) > tol.trace)
    return DensityDefect::trace_not_one;
  ComplexMatrix herm = (rho + rho.adjoint()) / 2.0;
  if (!psd_within_floor(herm, tol.psd_floor))
    return DensityDefect::not_positive;
  return DensityDefect::none;
}

DensityMatrix validate_density(const ComplexMatrix& rho,
                               const DensityTolerances& tol) {
  DensityDefect defect = check_density(rho, tol);
  if (defect != DensityDefect::none)
    throw std::invalid_argument(std::string("validate_density: ") +
                                to_string(defect));
  return DensityMatrix(rho);
}

double purity(const ComplexMatrix& rho) {
  return (rho * rho).trace().real();
}

}  // namespace weakwalk
