// Dense complex linear algebra for small multi-qubit systems: tensor
// products, partial traces, and density-matrix validation. Subsystem 0 is
// always the most significant tensor factor (leftmost in index order).
#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace weakwalk {

using complexd = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<complexd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Largest supported Hilbert-space dimension (2^10).
inline constexpr int kMaxDim = 1024;

ComplexMatrix identity(int dim);
ComplexMatrix dagger(const ComplexMatrix& m);

// |i><j| in the given dimension.
ComplexMatrix unit_matrix(int dim, int i, int j);

// Kronecker product; `a` indexes the most significant subsystem.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace out every subsystem not listed in `keep`. `dims` are the subsystem
// dimensions in tensor order (most significant first); `keep` must be a
// strictly ascending list of subsystem positions. The kept subsystems retain
// their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            const std::vector<int>& dims,
                            const std::vector<int>& keep);

enum class DensityDefect {
  none,
  bad_shape,
  not_hermitian,
  trace_not_one,
  not_positive,
};

const char* to_string(DensityDefect defect);

struct DensityTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double psd_floor = -1e-10;  // smallest admissible eigenvalue
};

// First failed invariant, or DensityDefect::none. Positivity uses an exact
// Hermitian eigensolve for dim <= 16 and a shifted Cholesky probe above
// (cheaper, resolves violations only down to the shift magnitude).
DensityDefect check_density(const ComplexMatrix& rho,
                            const DensityTolerances& tol = {});

class DensityMatrix {
 public:
  const ComplexMatrix& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

 private:
  friend DensityMatrix validate_density(const ComplexMatrix&,
                                        const DensityTolerances&);
  explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}
  ComplexMatrix mat_;
};

// Throws std::invalid_argument naming the failed invariant.
DensityMatrix validate_density(const ComplexMatrix& rho,
                               const DensityTolerances& tol = {});

// Smallest eigenvalue of a Hermitian matrix (exact route, any dim <= kMaxDim).
double min_eigenvalue_hermitian(const ComplexMatrix& h);

double purity(const ComplexMatrix& rho);

}  // namespace weakwalk
