#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace colhel::qm {

using Complex = std::complex<double>;

enum class Family { eZe_symmetric, eZe_antisymmetric, Zee_singlet };

// Complex scaling parameter a = |a| e^{-i theta}.
struct BasisSpec {
    Family family = Family::eZe_symmetric;
    int n_max = 10;
    double a_mod = 1.0;
    double theta = 0.5;
    bool electron_repulsion = true; // tests disable for the decoupled limit
};

Complex scaling_parameter(const BasisSpec& spec);

// Polynomial index pairs (n, m) retained by a family: n <= m for the
// symmetric eZe combination, n < m for the antisymmetric one, and the full
// square for the Zee wedge basis.
std::vector<std::pair<int, int>> basis_pairs(Family family, int n_max);

// a-independent real tables of the c-normalized matrix elements. With the
// (a r)^n e^{-a r} convention every element separates into powers of a:
//   overlap = S,   Hamiltonian = a^2 T + a V,
// with S, T, V real, so one assembly serves any complex a.
struct RealTables {
    std::vector<std::pair<int, int>> pairs;
    Eigen::MatrixXd S, T, V;
    std::vector<double> log_norm; // ln of the squared basis-function norm
};

RealTables build_tables(Family family, int n_max, bool electron_repulsion = true);

struct ComplexSymmetricPair {
    Eigen::MatrixXcd S, H;
};

ComplexSymmetricPair assemble(const RealTables& tables, Complex a);
ComplexSymmetricPair matrix_elements(const BasisSpec& spec);

// Single-electron block r^n e^{-a r} (n = 1..n_max) in the field -Z/r; used
// by the hydrogenic limit checks. Same a-power structure as above.
RealTables build_one_electron_tables(int n_max, double charge);

} // namespace colhel::qm
