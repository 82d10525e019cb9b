#include "spectral/harmonic_inversion.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace colhel::spectral {

namespace {

struct RawLine {
    Complex energy;
    Complex amplitude;
};

// Single filter-diagonalization pass over the slice c[n0 .. n1).
std::vector<RawLine> fdm_pass(std::span<const Complex> c, double dt, double e_lo, double e_hi,
                              std::size_t basis, std::size_t n0, std::size_t n1,
                              const InversionOptions& opt, std::size_t* effective_basis,
                              std::size_t* used_basis = nullptr) {
    const std::size_t len = n1 - n0;
    const std::size_t m = (len - 2) / 2; // correlation sums use c[n0 .. n0+2m+1]
    // An overcomplete window basis splits genuine signal directions across
    // near-degenerate overlap eigenvalues, so cap the basis density at the
    // time-bandwidth product of the slice.
    const std::size_t k_info = static_cast<std::size_t>(
        (e_hi - e_lo) * dt * static_cast<double>(m + 1) / (2.0 * M_PI)) + 3;
    const std::size_t K = std::max<std::size_t>(4, std::min(basis, k_info));
    if (used_basis)
        *used_basis = K;

    // Window basis z_j = exp(-i e_j dt) on a uniform grid strictly inside the
    // window; x_j = 1/z_j lies on the unit circle.
    std::vector<Complex> x(K);
    std::vector<double> e_nodes(K);
    for (std::size_t j = 0; j < K; ++j) {
        e_nodes[j] = e_lo + (static_cast<double>(j) + 0.5) * (e_hi - e_lo) / static_cast<double>(K);
        x[j] = std::polar(1.0, e_nodes[j] * dt);
    }

    // Single sums collapsing the double correlation sums:
    //   F_j(p) = sum_{s=0}^{m}    c[s+p] x_j^{s+1}
    //   G_j(p) = sum_{s=m+1}^{2m} c[s+p] x_j^{s-m}
    Eigen::MatrixXcd F(K, 2), G(K, 2);
    std::vector<Complex> xm1(K); // x_j^{m+1}
    for (std::size_t j = 0; j < K; ++j) {
        Complex xp = x[j];
        Complex f0 = 0, f1 = 0;
        for (std::size_t s = 0; s <= m; ++s) {
            f0 += c[n0 + s] * xp;
            f1 += c[n0 + s + 1] * xp;
            xp *= x[j];
        }
        // xp is now x^{m+2}
        xm1[j] = xp / x[j];
        Complex g0 = 0, g1 = 0;
        Complex xq = x[j];
        for (std::size_t s = m + 1; s <= 2 * m; ++s) {
            g0 += c[n0 + s] * xq;
            g1 += c[n0 + s + 1] * xq;
            xq *= x[j];
        }
        F(j, 0) = f0;
        F(j, 1) = f1;
        G(j, 0) = g0;
        G(j, 1) = g1;
    }

    Eigen::MatrixXcd U0(K, K), U1(K, K);
    for (std::size_t j = 0; j < K; ++j) {
        for (std::size_t l = j; l < K; ++l) {
            if (j == l) {
                Complex s0 = 0, s1 = 0, xp = 1.0;
                for (std::size_t s = 0; s <= 2 * m; ++s) {
                    const double w = static_cast<double>(std::min(s + 1, 2 * m + 1 - s));
                    s0 += w * c[n0 + s] * xp;
                    s1 += w * c[n0 + s + 1] * xp;
                    xp *= x[j];
                }
                U0(j, j) = s0;
                U1(j, j) = s1;
            } else {
                const Complex den = x[l] - x[j];
                U0(j, l) = (F(l, 0) - F(j, 0) + xm1[l] * G(j, 0) - xm1[j] * G(l, 0)) / den;
                U1(j, l) = (F(l, 1) - F(j, 1) + xm1[l] * G(j, 1) - xm1[j] * G(l, 1)) / den;
                U0(l, j) = U0(j, l);
                U1(l, j) = U1(j, l);
            }
        }
    }

    // Regularize the complex-symmetric pencil: c-orthogonal decomposition of
    // U0, drop directions below the conditioning cutoff, solve the projected
    // ordinary eigenproblem.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es0(U0);
    if (es0.info() != Eigen::Success)
        throw std::runtime_error("harmonic inversion: U0 eigendecomposition failed");
    const Eigen::VectorXcd lam = es0.eigenvalues();
    double max_abs = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        max_abs = std::max(max_abs, std::abs(lam[i]));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (std::abs(lam[i]) > opt.condition_cutoff * max_abs)
            keep.push_back(i);
    if (effective_basis)
        *effective_basis = keep.size();
    if (keep.size() < 2)
        throw std::runtime_error("harmonic inversion failed: window basis collapsed below 2");

    Eigen::MatrixXcd T(K, keep.size());
    for (std::size_t idx = 0; idx < keep.size(); ++idx) {
        Eigen::VectorXcd v = es0.eigenvectors().col(keep[idx]);
        const Complex vtv = (v.transpose() * v)(0, 0);
        const Complex scale = std::sqrt(vtv) * std::sqrt(lam[keep[idx]]);
        if (std::abs(scale) < 1e-300)
            throw std::runtime_error("harmonic inversion: isotropic basis vector");
        T.col(idx) = v / scale;
    }

    Eigen::MatrixXcd Ut = T.transpose() * U1 * T;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es1(Ut);
    if (es1.info() != Eigen::Success)
        throw std::runtime_error("harmonic inversion: projected eigenproblem failed");

    std::vector<RawLine> lines;
    for (Eigen::Index k = 0; k < es1.eigenvalues().size(); ++k) {
        const Complex u = es1.eigenvalues()[k];
        const double mod = std::abs(u);
        if (!(mod > 1e-8) || !(mod < 1e8))
            continue;
        // u = exp(-i E dt)
        const Complex energy(-std::arg(u) / dt, std::log(mod) / dt);
        if (energy.real() < e_lo || energy.real() > e_hi)
            continue;
        if (energy.imag() > opt.positive_im_slack)
            continue;

        Eigen::VectorXcd b = T * es1.eigenvectors().col(k);
        const Complex btu0b = (b.transpose() * U0 * b)(0, 0);
        if (std::abs(btu0b) < 1e-300)
            continue;
        b /= std::sqrt(btu0b);
        Complex proj = 0;
        for (std::size_t j = 0; j < K; ++j)
            proj += b[static_cast<Eigen::Index>(j)] * (F(j, 0) / x[j]); // sum_n c[n0+n] z_j^{-n}
        Complex d = proj * proj;
        // shift amplitudes back to t = 0
        const Complex shift = std::exp(Complex(0, 1) * energy * (dt * static_cast<double>(n0)));
        lines.push_back({energy, d * shift});
    }
    std::sort(lines.begin(), lines.end(),
              [](const RawLine& a, const RawLine& b) { return a.energy.real() < b.energy.real(); });
    return lines;
}

double nearest_line_distance(const std::vector<RawLine>& lines, double re_e) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& l : lines)
        best = std::min(best, std::abs(l.energy.real() - re_e));
    return best;
}

} // namespace

std::vector<SpectralLine> harmonic_inversion(std::span<const Complex> c, double dt,
                                             const InversionWindow& window,
                                             const InversionOptions& options,
                                             InversionReport* report) {
    if (!(dt > 0))
        throw std::invalid_argument("harmonic_inversion: dt must be positive");
    const std::size_t n1 = window.n1 == 0 ? c.size() : window.n1;
    if (window.n0 >= n1 || n1 > c.size())
        throw std::invalid_argument("harmonic_inversion: invalid signal slice");
    if (window.basis_size < 2)
        throw std::invalid_argument("harmonic_inversion: basis size must be at least 2");
    if (n1 - window.n0 < 2 * window.basis_size)
        throw std::invalid_argument("harmonic_inversion: slice shorter than twice the basis size");
    const double nyquist = M_PI / dt;
    if (!(window.e_lo < window.e_hi) || window.e_lo < -nyquist || window.e_hi > nyquist)
        throw std::invalid_argument("harmonic_inversion: window must lie inside the Nyquist band");

    std::size_t eff = 0, used = 0;
    const auto primary = fdm_pass(c, dt, window.e_lo, window.e_hi, window.basis_size, window.n0,
                                  n1, options, &eff, &used);
    if (report) {
        report->requested_basis = window.basis_size;
        report->effective_basis = eff;
    }

    // Stability re-runs: shifted slice and perturbed window edges.
    const std::size_t len = n1 - window.n0;
    std::size_t shift = static_cast<std::size_t>(options.shift_fraction * static_cast<double>(len));
    while (shift > 0 && len - shift < 2 * window.basis_size)
        shift /= 2;
    std::vector<RawLine> shifted, perturbed;
    try {
        shifted = fdm_pass(c, dt, window.e_lo, window.e_hi, window.basis_size, window.n0 + shift, n1,
                           options, nullptr);
    } catch (const std::exception&) {
    }
    const double width = window.e_hi - window.e_lo;
    try {
        perturbed = fdm_pass(c, dt, window.e_lo + options.perturb_fraction * width,
                             window.e_hi - options.perturb_fraction * width, window.basis_size,
                             window.n0, n1, options, nullptr);
    } catch (const std::exception&) {
    }

    // resolution scale: half the spacing of the window basis actually used
    const double d0 = 0.5 * width / static_cast<double>(used);
    std::vector<SpectralLine> out;
    out.reserve(primary.size());
    for (const auto& line : primary) {
        SpectralLine s;
        s.energy = line.energy;
        s.amplitude = line.amplitude;
        const double da = nearest_line_distance(shifted, line.energy.real());
        const double db = nearest_line_distance(perturbed, line.energy.real());
        const double d = std::max(da, db);
        s.stability = d > 3.0 * d0 ? 0.0 : std::exp(-d / d0);
        out.push_back(s);
    }
    return out;
}

} // namespace colhel::spectral
