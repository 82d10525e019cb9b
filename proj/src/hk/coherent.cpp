#include "hk/coherent.hpp"

#include <cmath>
#include <stdexcept>

namespace colhel::hk {

Complex overlap_1d(double gamma, double q_bra, double p_bra, double q_ket, double p_ket) {
    const double dq = q_bra - q_ket;
    const double dp = p_bra - p_ket;
    const double mag = -0.25 * gamma * dq * dq - 0.25 * dp * dp / gamma;
    const double phase = 0.5 * (p_bra + p_ket) * dq;
    return std::exp(mag) * Complex(std::cos(phase), std::sin(phase));
}

Complex coherent_overlap(const CoherentState2D& bra, const CoherentState2D& ket) {
    if (bra.gamma != ket.gamma)
        throw std::invalid_argument("coherent_overlap requires matching width parameters");
    Complex result = 1.0;
    for (int i = 0; i < 2; ++i)
        result *= overlap_1d(bra.gamma[i], bra.q0[i], bra.p0[i], ket.q0[i], ket.p0[i]);
    return result;
}

double normalization_constant(const InitialStateSpec& spec) {
    if (spec.packet1.gamma != spec.packet2.gamma)
        throw std::invalid_argument("symmetrized states require a common packet width");
    const double o = std::abs(overlap_1d(spec.packet1.gamma, spec.packet1.q0, spec.packet1.p0,
                                         spec.packet2.q0, spec.packet2.p0));
    const double sign = spec.symmetry == Symmetry::symmetric ? 1.0 : -1.0;
    const double denom = 2.0 * (1.0 + sign * o * o);
    if (denom < 1e-300)
        throw std::domain_error("antisymmetric state with identical packets is identically zero");
    return 1.0 / std::sqrt(denom);
}

} // namespace colhel::hk
