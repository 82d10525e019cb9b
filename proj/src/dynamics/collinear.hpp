#pragma once

#include <Eigen/Dense>

namespace colhel::dyn {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

// eZe: electrons on opposite sides of the nucleus, repulsion 1/(q1+q2).
// Zee: electrons on the same side, repulsion 1/|q2-q1| with q2 > q1 > 0
// preserved along trajectories.
enum class Variant { eZe, Zee };

struct Configuration {
    Variant variant = Variant::eZe;
    // Disabling the repulsion decouples the two electrons into independent
    // Kepler problems; only integration tests use this.
    bool electron_repulsion = true;
};

struct PhasePoint {
    double q1 = 0, q2 = 0, p1 = 0, p2 = 0;
};

// Scaled variables q~ = |E| q, p~ = |E|^{-1/2} p, on the H~ = -1 shell.
struct ScaledPoint {
    double q1 = 0, q2 = 0, p1 = 0, p2 = 0;
    double energy = 0; // physical E < 0 that produced this point
};

struct RegularizedPoint {
    double Q1 = 0, Q2 = 0, P1 = 0, P2 = 0;
};

// H = p1^2/2 + p2^2/2 - 2/q1 - 2/q2 + 1/|q2 +- q1|  (a.u.)
// Throws std::domain_error for q_i <= 0 or a Zee point with q1 == q2.
double hamiltonian_energy(const PhasePoint& p, const Configuration& config);

// Gradient of H with respect to (q1, q2, p1, p2).
Vec4 hamiltonian_gradient(const PhasePoint& p, const Configuration& config);

// Scaling map to the H~ = -1 shell; rejects E >= 0.
ScaledPoint scale(const PhasePoint& p, double energy);
PhasePoint unscale(const ScaledPoint& sp);

// q~_i = Q_i^2, p~_i = P_i / (2 Q_i)
RegularizedPoint regularize(const ScaledPoint& sp);
ScaledPoint deregularize(const RegularizedPoint& rp, double energy);

// Sensitivities of the initial regularized variables and of |E| with respect
// to the physical initial conditions alpha = (q1, q2, p1, p2). Needed to pull
// the regularized monodromy back to physical coordinates.
struct StartSensitivities {
    Mat4 dz0_dalpha;     // rows (Q1,Q2,P1,P2), columns (q1,q2,p1,p2)
    Vec4 dabsE_dalpha;   // d|E|/dalpha = -dH/dalpha for E < 0
    double absE = 0;
};

StartSensitivities start_sensitivities(const PhasePoint& p, const Configuration& config);

} // namespace colhel::dyn
