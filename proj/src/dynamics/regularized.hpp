#pragma once

#include "dynamics/collinear.hpp"

#include <array>
#include <stdexcept>

namespace colhel::dyn {

// State vector layout for the regularized equations of motion in the
// fictitious time tau. One trajectory evolves 26 scalars:
//   y[0..3]   Q1, Q2, P1, P2
//   y[4]      scaled time t~
//   y[5]      scaled action S~
//   y[6..21]  regularized monodromy M[i][j] = d z_i(tau) / d z_j(0),
//             row-major over z = (Q1, Q2, P1, P2)
//   y[22..25] d t~ / d z_j(0)
inline constexpr int kRegStateDim = 26;
using RegState = std::array<double, kRegStateDim>;

struct TripleCollisionError : std::runtime_error {
    TripleCollisionError() : std::runtime_error("trajectory entered the triple-collision region") {}
};

// Regularized Hamiltonian
//   Hreg = (Q2^2 P1^2 + Q1^2 P2^2)/8 - 2(Q1^2 + Q2^2) + Q1^2 Q2^2
//          + Q1^2 Q2^2 / (Q2^2 +- Q1^2),
// numerically zero along physical trajectories. The +- follows the eZe/Zee
// choice; for Zee the ordering Q2^2 > Q1^2 keeps the denominator positive.
double regularized_hamiltonian(const double* y, const Configuration& config);

// Right-hand side of the 26-equation system: Hamilton's equations for (Q,P),
// dt~/dtau = Q1^2 Q2^2, the on-shell scaled-action equation, and the
// variational equations for the monodromy and the time sensitivities.
// No singularity at Q1 = 0 or Q2 = 0 (binary collisions are regular).
void regularized_rhs_raw(const double* y, double* dy, const Configuration& config);

// Public wrapper with the triple-collision guard: throws
// TripleCollisionError when Q1^2 + Q2^2 < triple_eps, where no unique
// continuation of the flow exists.
void regularized_rhs(const RegState& y, RegState& dy, const Configuration& config,
                     double triple_eps = 1e-6);

// Packs a fresh trajectory start: monodromy = identity, t~ = S~ = 0.
RegState initial_reg_state(const RegularizedPoint& rp);

} // namespace colhel::dyn
