#pragma once

#include "qm/solver.hpp"

#include <vector>

namespace colhel::qm {

struct LevelControls {
    double cutoff = 1e-16;           // overlap eigenvalue cutoff
    double convergence_tol = 1e-4;   // |delta Re E| between successive sizes
    int start_n_max = 10;
    int step_n_max = 4;
    int max_basis_functions = 1400;
    double theta = 0;                // 0 = family default (0.3 eZe, 0.2 Zee)
    double a_mod = 0;                // 0 = family default (2/N eZe, 1/N Zee)
    double im_cut_rel = 0.1;         // |Im E| <= this fraction of the binding
    double threshold_margin = 0.02;  // exclude states within 2% of -2/N^2
};

struct LevelResult {
    int N = 0, n = 0;
    double binding_energy = 0; // -Re(E)
    Complex eigenvalue{0, 0};
    bool converged = false;
    int basis_functions = 0;
    int basis_n_max = 0;
    double theta_drift = 0;        // spread of Re(E) over the stationarity scan
    std::vector<double> trace;     // successive binding estimates per size
};

// Identified members of the Rydberg series N at one basis size, deepest
// first. Candidates must be nearly real, lie in the series energy band, and
// carry dominant inner-electron character N (projection onto the hydrogenic
// He+ states of the inner coordinate).
std::vector<Complex> series_members(const Spectrum& spectrum, const RealTables& tables, Complex a,
                                    Family family, int N, const LevelControls& controls);

// Inner-electron series label of one eigenvector: argmax over N' of the
// c-product weight of the hydrogenic He+(N') component.
int dominant_series(const Eigen::VectorXcd& coeffs, const RealTables& tables, Complex a,
                    Family family, int scan_max);

// Grows the basis until Re(E) of the requested level moves by less than the
// tolerance, then scans theta for stationarity. n >= N >= 1; the
// antisymmetric eZe family has no n = N member.
LevelResult converged_level(int N, int n, Family family, const LevelControls& controls = {});

// All series-N levels up to rank max_n - N in one basis-growth run.
std::vector<LevelResult> converged_series(int N, int max_n, Family family,
                                          const LevelControls& controls = {});

} // namespace colhel::qm
