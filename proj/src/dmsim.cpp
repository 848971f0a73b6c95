#include "weakwalk/dmsim.hpp"

#include <stdexcept>

namespace weakwalk {

namespace {

void check_targets(const std::vector<int>& targets, int n_qubits,
                   int op_qubits) {
  if (static_cast<int>(targets.size()) != op_qubits)
    throw std::invalid_argument("dmsim: operator/target arity mismatch");
  std::vector<bool> seen(n_qubits, false);
  for (int q : targets) {
    if (q < 0 || q >= n_qubits || seen[q])
      throw std::invalid_argument("dmsim: bad target qubit");
    seen[q] = true;
  }
}

int op_qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim)
    throw std::invalid_argument("dmsim: operator dimension not a power of 2");
  return n;
}

}  // namespace

ComplexMatrix embed_operator(const ComplexMatrix& op,
                             const std::vector<int>& targets, int n_qubits) {
  const int t = op_qubit_count(op.rows());
  check_targets(targets, n_qubits, t);
  const long dim = 1L << n_qubits;
  if (dim > kMaxDim) throw std::invalid_argument("dmsim: register too large");

  // gather(x): bits of x at target positions, targets[0] most significant.
  const auto gather = [&](long x) {
    long g = 0;
    for (int j = 0; j < t; ++j)
      g = (g << 1) | ((x >> (n_qubits - 1 - targets[j])) & 1L);
    return g;
  };
  long rest_mask = dim - 1;
  for (int q : targets) rest_mask &= ~(1L << (n_qubits - 1 - q));

  ComplexMatrix full = ComplexMatrix::Zero(dim, dim);
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c)
      if ((r & rest_mask) == (c & rest_mask))
        full(r, c) = op(gather(r), gather(c));
  return full;
}

DmSim::DmSim(int n_qubits) : n_qubits_(n_qubits) {
  const long dim = 1L << n_qubits;
  if (n_qubits < 1 || dim > kMaxDim)
    throw std::invalid_argument("dmsim: register too large");
  rho_ = ComplexMatrix::Zero(dim, dim);
  rho_(0, 0) = 1.0;
}

void DmSim::apply_unitary(const ComplexMatrix& u,
                          const std::vector<int>& targets) {
  const ComplexMatrix full = embed_operator(u, targets, n_qubits_);
  rho_ = full * rho_ * full.adjoint();
}

void DmSim::apply_channel(const KrausChannel& ch,
                          const std::vector<int>& targets) {
  ComplexMatrix out = ComplexMatrix::Zero(rho_.rows(), rho_.cols());
  for (const ComplexMatrix& k : ch.ops) {
    const ComplexMatrix full = embed_operator(k, targets, n_qubits_);
    out += full * rho_ * full.adjoint();
  }
  rho_ = out;
}

void DmSim::apply_dilated(const DilatedChannel& d,
                          const std::vector<int>& targets,
                          const std::vector<int>& ancillas) {
  const int anc_qubits = op_qubit_count(d.anc_dim);
  if (static_cast<int>(ancillas.size()) != anc_qubits)
    throw std::invalid_argument("dmsim: ancilla count mismatch");
  for (int a : ancillas)
    if (prob_zero(a) < 1.0 - 1e-9)
      throw std::invalid_argument("dmsim: ancilla not in ground state");
  std::vector<int> all = targets;
  all.insert(all.end(), ancillas.begin(), ancillas.end());
  apply_unitary(d.unitary, all);
  for (int a : ancillas) reset(a);
}

void DmSim::reset(int qubit) { apply_channel(build_reset(), {qubit}); }

void DmSim::replace_leading(const ComplexMatrix& state, int sub_qubits) {
  const long sub_dim = 1L << sub_qubits;
  if (state.rows() != sub_dim || state.cols() != sub_dim)
    throw std::invalid_argument("dmsim: replacement state dimension mismatch");
  const long rest_dim = (1L << n_qubits_) / sub_dim;
  const ComplexMatrix rest =
      partial_trace(rho_, {static_cast<int>(sub_dim),
                           static_cast<int>(rest_dim)}, {1});
  rho_ = tensor(state, rest);
}

double DmSim::prob_zero(int qubit) const {
  const long dim = rho_.rows();
  const long bit = 1L << (n_qubits_ - 1 - qubit);
  double p = 0.0;
  for (long i = 0; i < dim; ++i)
    if (!(i & bit)) p += rho_(i, i).real();
  return p;
}

ComplexMatrix DmSim::reduced_qubit(int qubit) const {
  std::vector<int> dims(n_qubits_, 2);
  return partial_trace(rho_, dims, {qubit});
}

}  // namespace weakwalk
