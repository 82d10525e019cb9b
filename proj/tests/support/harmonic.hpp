#pragma once

#include "hk/autocorrelation.hpp"
#include "hk/prefactor.hpp"

#include <cmath>
#include <vector>

// Two uncoupled harmonic oscillators injected in place of the helium
// dynamics. The HK propagator is exact for quadratic Hamiltonians, so the
// Monte Carlo autocorrelation must converge to the analytic coherent-state
// result.
namespace oracle {

class HarmonicEngine final : public colhel::hk::TrajectoryEngine {
public:
    HarmonicEngine(double w1, double w2) : w_{w1, w2} {}

    double energy(const colhel::dyn::PhasePoint& pt) const override {
        return 0.5 * (pt.p1 * pt.p1 + pt.p2 * pt.p2) +
               0.5 * (w_[0] * w_[0] * pt.q1 * pt.q1 + w_[1] * w_[1] * pt.q2 * pt.q2);
    }
    bool valid_start(const colhel::dyn::PhasePoint&) const override { return true; }
    bool energy_propagatable(double) const override { return true; }

    colhel::hk::EngineTrajectory run(const colhel::dyn::PhasePoint& start,
                                     const colhel::dyn::TimeGrid& grid,
                                     const Eigen::Vector2d& gamma,
                                     double /*discard_abs_R*/) const override {
        colhel::hk::EngineTrajectory out;
        std::vector<colhel::dyn::Mat4> path(grid.n);
        const double q0[2] = {start.q1, start.q2};
        const double p0[2] = {start.p1, start.p2};
        out.samples.resize(grid.n);
        for (std::size_t k = 0; k < grid.n; ++k) {
            const double t = grid.time(k);
            colhel::dyn::Mat4 m = colhel::dyn::Mat4::Zero();
            double q[2], p[2], action = 0;
            for (int i = 0; i < 2; ++i) {
                const double c = std::cos(w_[i] * t), s = std::sin(w_[i] * t);
                q[i] = q0[i] * c + p0[i] * s / w_[i];
                p[i] = -q0[i] * w_[i] * s + p0[i] * c;
                action += 0.5 * (p[i] * q[i] - p0[i] * q0[i]);
                m(i, i) = c;
                m(i, 2 + i) = s / w_[i];
                m(2 + i, i) = -w_[i] * s;
                m(2 + i, 2 + i) = c;
            }
            path[k] = m;
            out.samples[k].pt = {q[0], q[1], p[0], p[1]};
            out.samples[k].action = action;
        }
        const auto r = colhel::hk::hk_prefactor(path, gamma);
        for (std::size_t k = 0; k < grid.n; ++k)
            out.samples[k].R = r[k];
        out.status = colhel::dyn::Status::alive;
        return out;
    }

private:
    double w_[2];
};

// <z_a | z_b e^{-i w t}> in the gamma = omega coherent-state convention,
// with z = sqrt(w/2) q + i p / sqrt(2 w).
inline std::complex<double> coherent_pair_overlap(double w, double qa, double pa, double qb,
                                                  double pb, double t) {
    const std::complex<double> i(0, 1);
    const std::complex<double> za = std::sqrt(w / 2.0) * qa + i * pa / std::sqrt(2.0 * w);
    const std::complex<double> zb =
        (std::sqrt(w / 2.0) * qb + i * pb / std::sqrt(2.0 * w)) * std::exp(-i * w * t);
    return std::exp(std::conj(za) * zb - 0.5 * std::norm(za) - 0.5 * std::norm(zb));
}

// Exact symmetrized autocorrelation for packet widths gamma_j = w_j.
inline std::vector<std::complex<double>> harmonic_autocorrelation_exact(
    const colhel::hk::InitialStateSpec& spec, double w1, double w2,
    const colhel::dyn::TimeGrid& grid) {
    const double norm = colhel::hk::normalization_constant(spec);
    const double sign = spec.symmetry == colhel::hk::Symmetry::symmetric ? 1.0 : -1.0;
    const std::complex<double> i(0, 1);
    std::vector<std::complex<double>> out(grid.n);
    const auto& a = spec.packet1;
    const auto& b = spec.packet2;
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.time(k);
        const auto direct = coherent_pair_overlap(w1, a.q0, a.p0, a.q0, a.p0, t) *
                            coherent_pair_overlap(w2, b.q0, b.p0, b.q0, b.p0, t);
        const auto exch = coherent_pair_overlap(w1, b.q0, b.p0, a.q0, a.p0, t) *
                          coherent_pair_overlap(w2, a.q0, a.p0, b.q0, b.p0, t);
        out[k] = 2.0 * norm * norm * (direct + sign * exch) * std::exp(-i * 0.5 * (w1 + w2) * t);
    }
    return out;
}

} // namespace oracle
