#pragma once

#include "qm/basis.hpp"

namespace colhel::qm {

struct ProjectedPencil {
    Eigen::MatrixXcd h;    // Hamiltonian in the retained c-orthonormal subspace
    Eigen::MatrixXcd back; // maps projected vectors to original basis coefficients
    int retained = 0;
    int dropped = 0;
};

// Diagonalizes the overlap matrix (c-orthogonal decomposition, no
// conjugation), drops eigendirections with |eigenvalue| <= cutoff, and
// returns the Hamiltonian projected onto the retained subspace with unit
// overlap. Throws std::runtime_error when nothing survives the cutoff.
ProjectedPencil orthogonalize(const ComplexSymmetricPair& pair, double cutoff = 1e-16);

struct Spectrum {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors; // columns in the original basis; empty unless requested
    int retained = 0;
    int dropped = 0;
};

Spectrum solve_pencil(const ComplexSymmetricPair& pair, double cutoff, bool with_vectors);

// Eigenvalues of the complex-rotated Hamiltonian for a basis specification.
// Bound states sit on the real axis, resonances in the lower half plane.
Spectrum complex_rotation_energies(const BasisSpec& spec, double cutoff = 1e-16,
                                   bool with_vectors = false);

} // namespace colhel::qm
