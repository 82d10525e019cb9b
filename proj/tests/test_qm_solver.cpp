#include <lapacke.h>

#include "core/rng.hpp"
#include "qm/levels.hpp"
#include "qm/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

using namespace colhel;
using qm::Complex;

namespace {

// independent route: dense generalized eigensolver on the raw pencil.
// std::complex<double> and the C _Complex type are layout compatible.
std::vector<Complex> zggev_eigenvalues(Eigen::MatrixXcd h, Eigen::MatrixXcd s) {
    const lapack_int n = static_cast<lapack_int>(h.rows());
    std::vector<Complex> alpha(n), beta(n);
    auto* hp = reinterpret_cast<lapack_complex_double*>(h.data());
    auto* sp = reinterpret_cast<lapack_complex_double*>(s.data());
    auto* ap = reinterpret_cast<lapack_complex_double*>(alpha.data());
    auto* bp = reinterpret_cast<lapack_complex_double*>(beta.data());
    const lapack_int info =
        LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, hp, n, sp, n, ap, bp, nullptr, 1, nullptr, 1);
    REQUIRE(info == 0);
    std::vector<Complex> out;
    for (lapack_int i = 0; i < n; ++i)
        if (std::abs(beta[static_cast<std::size_t>(i)]) > 1e-12)
            out.push_back(alpha[static_cast<std::size_t>(i)] / beta[static_cast<std::size_t>(i)]);
    return out;
}

void sort_complex(std::vector<Complex>& v) {
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

} // namespace

TEST_CASE("orthogonalize: identity overlap, duplicate detection") {
    const Eigen::Index n = 6;
    qm::ComplexSymmetricPair pair;
    pair.S = Eigen::MatrixXcd::Identity(n, n);
    pair.H = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        pair.H(i, i) = Complex(static_cast<double>(i), 0);
    auto proj = qm::orthogonalize(pair);
    CHECK(proj.retained == 6);
    CHECK(proj.dropped == 0);
    CHECK((proj.h - pair.H).cwiseAbs().maxCoeff() < 1e-12);

    // duplicating a basis function produces one exact linear dependence
    Eigen::MatrixXcd s2 = Eigen::MatrixXcd::Identity(n, n);
    s2(0, 1) = s2(1, 0) = Complex(1.0, 0.0); // rows 0 and 1 identical up to norm
    qm::ComplexSymmetricPair dup{s2, pair.H};
    auto proj2 = qm::orthogonalize(dup, 1e-12);
    CHECK(proj2.retained == 5);
    CHECK(proj2.dropped == 1);

    qm::ComplexSymmetricPair dead{Eigen::MatrixXcd::Zero(n, n), pair.H};
    CHECK_THROWS_AS(qm::orthogonalize(dead, 1e-12), std::runtime_error);
}

TEST_CASE("projected pencil eigenvalues match the direct generalized solver") {
    CounterRng rng(31, 2);
    for (int trial = 0; trial < 4; ++trial) {
        const Eigen::Index n = 12;
        Eigen::MatrixXcd b(n, n), c(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                b(i, j) = Complex(rng.next_uniform() - 0.5, rng.next_uniform() - 0.5);
                c(i, j) = Complex(rng.next_uniform() - 0.5, rng.next_uniform() - 0.5);
            }
        qm::ComplexSymmetricPair pair;
        pair.S = b + b.transpose() + 6.0 * Eigen::MatrixXcd::Identity(n, n); // well conditioned
        pair.H = c + c.transpose();

        auto mine = qm::solve_pencil(pair, 1e-14, false);
        std::vector<Complex> ours(mine.values.data(), mine.values.data() + mine.values.size());
        auto reference = zggev_eigenvalues(pair.H, pair.S);
        REQUIRE(ours.size() == reference.size());
        sort_complex(ours);
        sort_complex(reference);
        for (std::size_t i = 0; i < ours.size(); ++i)
            CHECK(std::abs(ours[i] - reference[i]) < 1e-10);
    }
}

TEST_CASE("bound eZe singlet ground state from complex rotation") {
    qm::BasisSpec spec;
    spec.family = qm::Family::eZe_symmetric;
    spec.n_max = 18;
    spec.a_mod = 2.0;
    spec.theta = 0.5;
    auto spectrum = qm::complex_rotation_energies(spec);

    // deepest nearly-real eigenvalue is the ground state
    double best = 0;
    for (Eigen::Index i = 0; i < spectrum.values.size(); ++i) {
        const Complex e = spectrum.values[i];
        if (std::abs(e.imag()) < 0.02 && e.real() < best)
            best = e.real();
    }
    CHECK(-best == doctest::Approx(3.2459).epsilon(3e-4));
}

TEST_CASE("bound-state energy is independent of the rotation angle") {
    std::vector<double> values;
    for (double theta : {0.1, 0.3, 0.5}) {
        qm::BasisSpec spec;
        spec.family = qm::Family::eZe_symmetric;
        spec.n_max = 22;
        spec.a_mod = 2.0;
        spec.theta = theta;
        auto spectrum = qm::complex_rotation_energies(spec);
        double best = 0;
        for (Eigen::Index i = 0; i < spectrum.values.size(); ++i)
            if (std::abs(spectrum.values[i].imag()) < 0.02)
                best = std::min(best, spectrum.values[i].real());
        values.push_back(best);
    }
    CHECK(std::abs(values[0] - values[1]) < 1e-6);
    CHECK(std::abs(values[1] - values[2]) < 1e-6);
}

TEST_CASE("series identification by inner-electron character") {
    // the 2_2 resonance of the symmetric eZe family
    const auto tables = qm::build_tables(qm::Family::eZe_symmetric, 18);
    const Complex a = std::polar(1.0, -0.5); // |a| = 2/N with N = 2
    const auto spectrum = qm::solve_pencil(qm::assemble(tables, a), 1e-16, true);

    qm::LevelControls controls;
    auto members = qm::series_members(spectrum, tables, a, qm::Family::eZe_symmetric, 2, controls);
    REQUIRE(!members.empty());
    CHECK(-members[0].real() == doctest::Approx(0.8224).epsilon(2e-3));
}

TEST_CASE("converged_level drives basis growth to the tabulated resonance") {
    qm::LevelControls controls;
    controls.start_n_max = 10;
    controls.step_n_max = 4;
    auto level = qm::converged_level(2, 2, qm::Family::eZe_symmetric, controls);
    CHECK(level.converged);
    CHECK(level.binding_energy == doctest::Approx(0.8224).epsilon(1.3e-3));
    CHECK(level.theta_drift < 1e-3);
    CHECK(level.basis_functions <= 600);

    CHECK_THROWS_AS(qm::converged_level(2, 2, qm::Family::eZe_antisymmetric, controls),
                    std::invalid_argument);
    CHECK_THROWS_AS(qm::converged_level(0, 1, qm::Family::eZe_symmetric, controls),
                    std::invalid_argument);
}
