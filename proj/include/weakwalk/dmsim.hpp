// Literal density-matrix simulator for small qubit registers. Qubit 0 is
// the most significant index bit, matching tensor() order. Operators are
// embedded on arbitrary qubit subsets by index gathering; state dimension is
// capped at kMaxDim.
#pragma once

#include <vector>

#include "weakwalk/channels.hpp"
#include "weakwalk/matcore.hpp"

namespace weakwalk {

// op's tensor factors map to `targets` in order (targets[0] = op's most
// significant factor). Every non-target bit is acted on as identity.
ComplexMatrix embed_operator(const ComplexMatrix& op,
                             const std::vector<int>& targets, int n_qubits);

class DmSim {
 public:
  explicit DmSim(int n_qubits);  // starts in |0...0><0...0|

  int n_qubits() const { return n_qubits_; }
  const ComplexMatrix& rho() const { return rho_; }

  void apply_unitary(const ComplexMatrix& u, const std::vector<int>& targets);
  void apply_channel(const KrausChannel& ch, const std::vector<int>& targets);

  // Applies the dilated unitary on targets + ancilla qubits, then resets the
  // ancillas so they can be reused. Ancillas must be in |0>.
  void apply_dilated(const DilatedChannel& d, const std::vector<int>& targets,
                     const std::vector<int>& ancillas);

  void reset(int qubit);

  // Replace the state of the leading `sub_qubits` qubits with `state`
  // (discarding their current marginal). Used to prepare fresh inputs.
  void replace_leading(const ComplexMatrix& state, int sub_qubits);

  double prob_zero(int qubit) const;
  ComplexMatrix reduced_qubit(int qubit) const;

 private:
  int n_qubits_;
  ComplexMatrix rho_;
};

}  // namespace weakwalk
