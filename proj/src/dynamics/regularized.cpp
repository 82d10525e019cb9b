#include "dynamics/regularized.hpp"

namespace colhel::dyn {

double regularized_hamiltonian(const double* y, const Configuration& config) {
    const double Q1 = y[0], Q2 = y[1], P1 = y[2], P2 = y[3];
    const double q1s = Q1 * Q1, q2s = Q2 * Q2;
    double h = 0.125 * (q2s * P1 * P1 + q1s * P2 * P2) - 2.0 * (q1s + q2s) + q1s * q2s;
    if (config.electron_repulsion) {
        const double sign = config.variant == Variant::eZe ? 1.0 : -1.0;
        h += q1s * q2s / (q2s + sign * q1s);
    }
    return h;
}

void regularized_rhs_raw(const double* y, double* dy, const Configuration& config) {
    const double Q1 = y[0], Q2 = y[1], P1 = y[2], P2 = y[3];
    const double q1s = Q1 * Q1, q2s = Q2 * Q2;
    const double ps1 = P1 * P1, ps2 = P2 * P2;

    // gradient and Hessian pieces of Hreg; the repulsion term
    // Q1^2 Q2^2 / D with D = Q2^2 + s Q1^2 contributes
    //   dV/dQ1 = 2 Q1 Q2^4 / D^2,        dV/dQ2 = 2 s Q1^4 Q2 / D^2,
    //   d2V/dQ1^2 = 2 Q2^4 (D - 4 s Q1^2) / D^3,
    //   d2V/dQ2^2 = 2 s Q1^4 (D - 4 Q2^2) / D^3,
    //   d2V/dQ1dQ2 = 8 s Q1^3 Q2^3 / D^3.
    double vQ1 = 0, vQ2 = 0, vQ1Q1 = 0, vQ2Q2 = 0, vQ1Q2 = 0, vee = 0;
    if (config.electron_repulsion) {
        const double s = config.variant == Variant::eZe ? 1.0 : -1.0;
        const double D = q2s + s * q1s;
        const double invD = 1.0 / D;
        const double invD2 = invD * invD;
        const double invD3 = invD2 * invD;
        vee = q1s * q2s * invD;
        vQ1 = 2.0 * Q1 * q2s * q2s * invD2;
        vQ2 = 2.0 * s * q1s * q1s * Q2 * invD2;
        vQ1Q1 = 2.0 * q2s * q2s * (D - 4.0 * s * q1s) * invD3;
        vQ2Q2 = 2.0 * s * q1s * q1s * (D - 4.0 * q2s) * invD3;
        vQ1Q2 = 8.0 * s * q1s * Q1 * q2s * Q2 * invD3;
    }

    const double hQ1 = 0.25 * Q1 * ps2 - 4.0 * Q1 + 2.0 * Q1 * q2s + vQ1;
    const double hQ2 = 0.25 * Q2 * ps1 - 4.0 * Q2 + 2.0 * Q2 * q1s + vQ2;

    dy[0] = 0.25 * q2s * P1;
    dy[1] = 0.25 * q1s * P2;
    dy[2] = -hQ1;
    dy[3] = -hQ2;
    dy[4] = q1s * q2s;
    // scaled action, rewritten with H~ = -1 on shell
    dy[5] = 0.125 * (q2s * ps1 + q1s * ps2) + 2.0 * (q1s + q2s) - vee;

    // Jacobian A = d(RHS of z)/dz of the flow, z = (Q1,Q2,P1,P2)
    const double hQ1Q1 = 0.25 * ps2 - 4.0 + 2.0 * q2s + vQ1Q1;
    const double hQ2Q2 = 0.25 * ps1 - 4.0 + 2.0 * q1s + vQ2Q2;
    const double hQ1Q2 = 4.0 * Q1 * Q2 + vQ1Q2;
    const double hQ1P2 = 0.5 * Q1 * P2;
    const double hQ2P1 = 0.5 * Q2 * P1;

    const double A00 = 0.0, A01 = hQ2P1, A02 = 0.25 * q2s, A03 = 0.0;
    const double A10 = hQ1P2, A11 = 0.0, A12 = 0.0, A13 = 0.25 * q1s;
    const double A20 = -hQ1Q1, A21 = -hQ1Q2, A22 = 0.0, A23 = -hQ1P2;
    const double A30 = -hQ1Q2, A31 = -hQ2Q2, A32 = -hQ2P1, A33 = 0.0;

    const double* M = y + 6;
    double* dM = dy + 6;
    for (int j = 0; j < 4; ++j) {
        const double m0 = M[0 + j], m1 = M[4 + j], m2 = M[8 + j], m3 = M[12 + j];
        dM[0 + j] = A00 * m0 + A01 * m1 + A02 * m2 + A03 * m3;
        dM[4 + j] = A10 * m0 + A11 * m1 + A12 * m2 + A13 * m3;
        dM[8 + j] = A20 * m0 + A21 * m1 + A22 * m2 + A23 * m3;
        dM[12 + j] = A30 * m0 + A31 * m1 + A32 * m2 + A33 * m3;
        // d t~/dtau = Q1^2 Q2^2 differentiated with respect to z_j(0)
        dy[22 + j] = 2.0 * Q1 * q2s * m0 + 2.0 * q1s * Q2 * m1;
    }
}

void regularized_rhs(const RegState& y, RegState& dy, const Configuration& config, double triple_eps) {
    if (y[0] * y[0] + y[1] * y[1] < triple_eps)
        throw TripleCollisionError();
    regularized_rhs_raw(y.data(), dy.data(), config);
}

RegState initial_reg_state(const RegularizedPoint& rp) {
    RegState y{};
    y[0] = rp.Q1;
    y[1] = rp.Q2;
    y[2] = rp.P1;
    y[3] = rp.P2;
    y[6 + 0] = 1.0;
    y[6 + 5] = 1.0;
    y[6 + 10] = 1.0;
    y[6 + 15] = 1.0;
    return y;
}

} // namespace colhel::dyn
