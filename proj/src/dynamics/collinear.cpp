#include "dynamics/collinear.hpp"

#include <cmath>
#include <stdexcept>

namespace colhel::dyn {

namespace {

double repulsion_distance(const PhasePoint& p, const Configuration& config) {
    if (config.variant == Variant::eZe)
        return p.q1 + p.q2;
    return std::abs(p.q2 - p.q1);
}

void check_domain(const PhasePoint& p, const Configuration& config) {
    if (!(p.q1 > 0) || !(p.q2 > 0))
        throw std::domain_error("phase point requires q1 > 0 and q2 > 0");
    if (config.variant == Variant::Zee && config.electron_repulsion && p.q1 == p.q2)
        throw std::domain_error("Zee configuration is singular at q1 == q2");
}

} // namespace

double hamiltonian_energy(const PhasePoint& p, const Configuration& config) {
    check_domain(p, config);
    double h = 0.5 * (p.p1 * p.p1 + p.p2 * p.p2) - 2.0 / p.q1 - 2.0 / p.q2;
    if (config.electron_repulsion)
        h += 1.0 / repulsion_distance(p, config);
    return h;
}

Vec4 hamiltonian_gradient(const PhasePoint& p, const Configuration& config) {
    check_domain(p, config);
    Vec4 g;
    g[0] = 2.0 / (p.q1 * p.q1);
    g[1] = 2.0 / (p.q2 * p.q2);
    g[2] = p.p1;
    g[3] = p.p2;
    if (config.electron_repulsion) {
        double r = repulsion_distance(p, config);
        double inv_r2 = 1.0 / (r * r);
        if (config.variant == Variant::eZe) {
            g[0] -= inv_r2;
            g[1] -= inv_r2;
        } else if (p.q2 > p.q1) {
            g[0] += inv_r2;
            g[1] -= inv_r2;
        } else {
            g[0] -= inv_r2;
            g[1] += inv_r2;
        }
    }
    return g;
}

ScaledPoint scale(const PhasePoint& p, double energy) {
    if (!(energy < 0))
        throw std::domain_error("scaling to the H~ = -1 shell requires E < 0");
    double absE = -energy;
    double root = std::sqrt(absE);
    return {absE * p.q1, absE * p.q2, p.p1 / root, p.p2 / root, energy};
}

PhasePoint unscale(const ScaledPoint& sp) {
    double absE = -sp.energy;
    double root = std::sqrt(absE);
    return {sp.q1 / absE, sp.q2 / absE, sp.p1 * root, sp.p2 * root};
}

RegularizedPoint regularize(const ScaledPoint& sp) {
    if (!(sp.q1 > 0) || !(sp.q2 > 0))
        throw std::domain_error("regularization requires scaled coordinates > 0");
    RegularizedPoint rp;
    rp.Q1 = std::sqrt(sp.q1);
    rp.Q2 = std::sqrt(sp.q2);
    rp.P1 = 2.0 * rp.Q1 * sp.p1;
    rp.P2 = 2.0 * rp.Q2 * sp.p2;
    return rp;
}

ScaledPoint deregularize(const RegularizedPoint& rp, double energy) {
    ScaledPoint sp;
    sp.q1 = rp.Q1 * rp.Q1;
    sp.q2 = rp.Q2 * rp.Q2;
    sp.p1 = rp.P1 / (2.0 * rp.Q1);
    sp.p2 = rp.P2 / (2.0 * rp.Q2);
    sp.energy = energy;
    return sp;
}

StartSensitivities start_sensitivities(const PhasePoint& p, const Configuration& config) {
    StartSensitivities s;
    double energy = hamiltonian_energy(p, config);
    if (!(energy < 0))
        throw std::domain_error("start sensitivities are defined for E < 0");
    s.absE = -energy;
    s.dabsE_dalpha = -hamiltonian_gradient(p, config);

    // Q_k = sqrt(|E| q_k): depends on alpha both directly and through |E|.
    // P_k = 2 sqrt(|E| q_k) p_k / sqrt(|E|) = 2 sqrt(q_k) p_k: the energy
    // factors cancel, so P_k has no |E|-mediated sensitivity.
    double q[2] = {p.q1, p.q2};
    double mom[2] = {p.p1, p.p2};
    s.dz0_dalpha.setZero();
    for (int k = 0; k < 2; ++k) {
        double Qk = std::sqrt(s.absE * q[k]);
        for (int j = 0; j < 4; ++j) {
            double direct = (j == k) ? s.absE : 0.0;
            s.dz0_dalpha(k, j) = (direct + q[k] * s.dabsE_dalpha[j]) / (2.0 * Qk);
        }
        double rootq = std::sqrt(q[k]);
        s.dz0_dalpha(2 + k, k) = mom[k] / rootq;
        s.dz0_dalpha(2 + k, 2 + k) = 2.0 * rootq;
    }
    return s;
}

} // namespace colhel::dyn
