// Kraus channels used by the recorder chain, and their unitary dilations.
//
// The overwrite channel writes the pointer's |1> outcome irreversibly into a
// memory qubit: once M is |1>, no later round can restore |0>. Its reverse
// twin overwrites a second memory conditioned on the first being |0>. Reset
// is the ideal replace-with-ground channel (the swap-to-cold-bath mechanism
// it stands for is not simulated separately; the composite effect is
// identical).
#pragma once

#include <string>
#include <vector>

#include "weakwalk/matcore.hpp"

namespace weakwalk {

struct KrausChannel {
  std::string name;
  int dim = 0;                    // input = output dimension
  std::vector<ComplexMatrix> ops;
};

// max abs entry of (sum_k K_k^dag K_k) - I; CPTP iff ~0.
double completeness_defect(const KrausChannel& ch);

// sum_k K rho K^dag. Throws on dimension mismatch.
ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho);

// Controlled overwrite C_write on pointer (high) x memory (low):
//   {|0><0|_P x I_M, |1><1|_P x |1><0|_M, |1><1|_P x |1><1|_M}.
KrausChannel build_controlled_overwrite();

// Reverse overwrite on M1 (high) x M2 (low): M2 is forced to |1> when M1
// reads |0>, and untouched when M1 reads |1>.
KrausChannel build_reverse_overwrite();

// Single-qubit replace-with-|0> channel {|0><0|, |0><1|}.
KrausChannel build_reset();

struct DilatedChannel {
  int sys_dim = 0;
  int anc_dim = 0;         // smallest power of two >= Kraus count
  ComplexMatrix isometry;  // (sys*anc) x sys, V = sum_k K_k (x) |k>_anc
  ComplexMatrix unitary;   // completion of V; U(|psi> (x) |0>_anc) = V|psi>
};

// Stinespring dilation with deterministic unitary completion: the free
// columns are filled by Gram-Schmidt against canonical basis vectors in
// fixed index order (candidates with residual norm < 1e-9 are skipped).
// Throws if the channel is not trace preserving within 1e-12.
DilatedChannel dilate(const KrausChannel& ch);

// U (rho (x) |0><0|_anc) U^dag, ancilla traced out; equals apply() for the
// originating channel.
ComplexMatrix apply_dilated(const DilatedChannel& d, const ComplexMatrix& rho);

}  // namespace weakwalk
