// The driven coin-pointer walk. One step rotates the pointer by +theta or
// -theta about Y, with the sign drawn from the input qubit's populations
// (1/2 + eps_star vs 1/2 - eps_star). The walk unitary conditions the
// rotation direction on the input register; tracing the input yields the
// two-branch pointer mixture.
//
// Conventions: R_y(t) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]], and
// the walk unitary acts on input (high) x pointer (low).
#pragma once

#include "weakwalk/channels.hpp"
#include "weakwalk/matcore.hpp"

namespace weakwalk {

struct WalkConfig {
  double theta = 0.0;     // step angle, [0, pi]
  double eps_star = 0.0;  // population imbalance, [-1/2, 1/2]
};

ComplexMatrix rotation_y(double angle);

// 4x4 unitary |0><0|_in (x) R_y(+theta) + |1><1|_in (x) R_y(-theta).
ComplexMatrix walk_unitary(double theta);

// The walk unitary as a one-operator channel on input (x) pointer.
KrausChannel walk_channel(double theta);

// One pointer step: the (1/2 + eps_star, 1/2 - eps_star) mixture of the two
// rotation branches.
ComplexMatrix step_pointer(const ComplexMatrix& rho_p, const WalkConfig& cfg);

// Purity lost by one step from a real-amplitude pure pointer state:
// (1 - 4 eps_star^2) sin^2(theta) / 2. Bounded by theta^2 / 2.
double purity_loss(const WalkConfig& cfg);

enum class DriveClass { weak, strong, neither };

const char* to_string(DriveClass cls);

struct DriveReport {
  DriveClass cls = DriveClass::neither;
  // Overwrite probability for weak drives (return probability 1 - eta);
  // 1 for strong drives, NaN otherwise.
  double eta = 0.0;
};

// Classifies a step channel on input (x) pointer by its pointer-return
// probabilities <i| Tr_in[C(rho_in (x) |i><i|)] |i> over every pointer basis
// state and the probe inputs {basis projectors, maximally mixed}. All
// returns < 1e-12 => strong; all equal within 1e-10 => weak. The probe set
// is sufficient for channels affine in the input state with diagonal
// response, which covers every drive built here; it is not a general
// decision procedure.
DriveReport classify_drive(const KrausChannel& step, int pointer_dim);

}  // namespace weakwalk
