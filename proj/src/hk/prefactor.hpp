#pragma once

#include "dynamics/collinear.hpp"
#include "hk/coherent.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace colhel::hk {

struct BranchAmbiguityError : std::runtime_error {
    BranchAmbiguityError()
        : std::runtime_error("prefactor determinant phase jumped by >= pi/2 between samples; "
                             "refine the monodromy grid") {}
};

// Determinant under the square root of the HK prefactor,
//   D = det[ (dq_t/dq + g^-1 dp_t/dp g - i dq_t/dp g + i g^-1 dp_t/dq) / 2 ],
// for a diagonal width matrix g. R = sqrt(D) with a continuous branch.
Complex prefactor_determinant(const dyn::Mat4& monodromy, const Eigen::Vector2d& gamma);

// Tracks the continuous square-root branch of D along a trajectory.
// Successive determinants are fed in order; when the phase step reaches pi/2
// the tracker subdivides using `eval_between` (if provided) or throws.
class PrefactorTracker {
public:
    PrefactorTracker() = default;

    using DenseEval = std::function<Complex(double tau)>;

    void start(double tau, Complex d);
    void advance(double tau, Complex d, const DenseEval& eval_between = {});

    Complex determinant() const { return d_; }
    double abs_R() const { return std::sqrt(std::abs(d_)); }
    Complex R() const;

private:
    void accumulate(double tau, Complex d, const DenseEval& eval, int depth);

    double tau_ = 0;
    Complex d_{1.0, 0.0};
    double phase_ = 0; // unwrapped arg(D)
    bool started_ = false;
};

// Branch-continuous prefactor along a monodromy path sampled on a grid dense
// enough that arg(D) moves by less than pi/2 per sample; R[0] = +1 for an
// identity start.
std::vector<Complex> hk_prefactor(std::span<const dyn::Mat4> path, const Eigen::Vector2d& gamma);

} // namespace colhel::hk
