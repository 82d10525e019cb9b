#pragma once

#include <complex>
#include <span>
#include <vector>

namespace colhel::spectral {

using Complex = std::complex<double>;

// One extracted mode of c(t) = sum_k d_k exp(-i E_k t). Binding energies are
// -Re(E). Im(E) is a diagnostic only and is not trusted quantitatively.
struct SpectralLine {
    Complex energy{0, 0};
    Complex amplitude{0, 0};
    double stability = 1.0; // in [0,1], from re-inversion agreement
};

// Energy window and signal slice for one filter-diagonalization pass.
struct InversionWindow {
    double e_lo = 0;
    double e_hi = 0;
    std::size_t basis_size = 50; // K filtered basis states in the window
    std::size_t n0 = 0;          // signal slice [n0, n1)
    std::size_t n1 = 0;          // 0 = end of signal
};

struct InversionOptions {
    // relative cutoff on |eigenvalue| of the window overlap matrix; basis
    // vectors below it are dropped (automatic K reduction)
    double condition_cutoff = 1e-13;
    // keep modes with Im(E) <= this slack (decaying or stationary only)
    double positive_im_slack = 1e-2;
    // stability re-runs: slice shift fraction and window edge perturbation
    double shift_fraction = 0.125;
    double perturb_fraction = 0.05;
};

struct InversionReport {
    std::size_t requested_basis = 0;
    std::size_t effective_basis = 0; // after conditioning reduction
};

// Filter diagonalization after Wall & Neuhauser / Mandelshtam & Taylor:
// builds the window-filtered signal correlation matrices U^0, U^1 from the
// slice, solves the small generalized eigenproblem, and returns the modes
// inside [e_lo, e_hi] with amplitudes and a stability score obtained by
// re-running on a shifted slice and a perturbed window.
std::vector<SpectralLine> harmonic_inversion(std::span<const Complex> c, double dt,
                                             const InversionWindow& window,
                                             const InversionOptions& options = {},
                                             InversionReport* report = nullptr);

} // namespace colhel::spectral
