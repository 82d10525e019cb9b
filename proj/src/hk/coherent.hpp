#pragma once

#include <Eigen/Dense>
#include <complex>

namespace colhel::hk {

using Complex = std::complex<double>;

// One-dimensional Gaussian coherent state parameters.
struct Packet1D {
    double q0 = 0;
    double p0 = 0;
    double gamma = 1; // width parameter, > 0
};

// Product coherent state in the two electron coordinates with a diagonal
// width matrix; self-overlap is exactly 1.
struct CoherentState2D {
    Eigen::Vector2d q0{0, 0};
    Eigen::Vector2d p0{0, 0};
    Eigen::Vector2d gamma{1, 1};
};

enum class Symmetry { symmetric, antisymmetric };

// (Anti)symmetrized two-electron initial state built from two 1-D packets.
// The exchange algebra requires both packets to share one width.
struct InitialStateSpec {
    Packet1D packet1, packet2;
    Symmetry symmetry = Symmetry::symmetric;
};

// <q_b, p_b | q_k, p_k> for a common width gamma:
//   exp[ -gamma (qb-qk)^2/4 - (pb-pk)^2/(4 gamma) + (i/2)(pb+pk)(qb-qk) ]
Complex overlap_1d(double gamma, double q_bra, double p_bra, double q_ket, double p_ket);

// Product overlap of two 2-D coherent states; |result| <= 1. Throws
// std::invalid_argument when the width matrices differ.
Complex coherent_overlap(const CoherentState2D& bra, const CoherentState2D& ket);

// Normalization N with <Psi0|Psi0> = 1:
//   N = [2 (1 +- |<packet1|packet2>|^2)]^{-1/2}.
// Throws std::domain_error for an antisymmetric state with identical packets
// (the state vanishes identically).
double normalization_constant(const InitialStateSpec& spec);

} // namespace colhel::hk
