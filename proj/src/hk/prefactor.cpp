#include "hk/prefactor.hpp"

#include <cmath>

namespace colhel::hk {

Complex prefactor_determinant(const dyn::Mat4& m, const Eigen::Vector2d& gamma) {
    // 2x2 blocks of the monodromy in (q1,q2,p1,p2) ordering
    Eigen::Matrix2cd a;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double qq = m(i, j);
            const double qp = m(i, 2 + j);
            const double pq = m(2 + i, j);
            const double pp = m(2 + i, 2 + j);
            const double gi = gamma[i], gj = gamma[j];
            a(i, j) = 0.5 * Complex(qq + pp * gj / gi, -qp * gj + pq / gi);
        }
    }
    return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
}

void PrefactorTracker::start(double tau, Complex d) {
    tau_ = tau;
    d_ = d;
    phase_ = std::arg(d);
    started_ = true;
}

void PrefactorTracker::advance(double tau, Complex d, const DenseEval& eval) {
    if (!started_) {
        start(tau, d);
        return;
    }
    accumulate(tau, d, eval, 0);
}

void PrefactorTracker::accumulate(double tau, Complex d, const DenseEval& eval, int depth) {
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag()) || d == Complex(0.0, 0.0)) {
        // collision pole or exact caustic zero at this very point: keep the
        // accumulated branch and move on
        tau_ = tau;
        return;
    }
    const double step = std::arg(d / d_);
    if (std::abs(step) >= 1.5707963267948966 && tau > tau_) {
        if (!eval)
            throw BranchAmbiguityError();
        if (depth < 20) {
            const double mid = 0.5 * (tau_ + tau);
            accumulate(mid, eval(mid), eval, depth + 1);
            accumulate(tau, d, eval, depth + 1);
            return;
        }
        // refinement exhausted: the determinant passes arbitrarily close to a
        // caustic zero, where R = sqrt(D) ~ 0 anyway; take the nearest branch
    }
    phase_ += step;
    d_ = d;
    tau_ = tau;
}

Complex PrefactorTracker::R() const {
    const double r = std::sqrt(std::abs(d_));
    const double half = 0.5 * phase_;
    return r * Complex(std::cos(half), std::sin(half));
}

std::vector<Complex> hk_prefactor(std::span<const dyn::Mat4> path, const Eigen::Vector2d& gamma) {
    std::vector<Complex> out;
    out.reserve(path.size());
    PrefactorTracker tracker;
    for (std::size_t i = 0; i < path.size(); ++i) {
        tracker.advance(static_cast<double>(i), prefactor_determinant(path[i], gamma));
        out.push_back(tracker.R());
    }
    return out;
}

} // namespace colhel::hk
