#include "spectral/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace colhel::spectral {

std::vector<double> fourier_spectrum(std::span<const Complex> c, double dt,
                                     std::span<const double> e_grid, Apodization apod) {
    if (c.size() < 2 || !(dt > 0))
        throw std::invalid_argument("fourier_spectrum requires a uniform signal with dt > 0");
    const std::size_t n = c.size();

    std::vector<Complex> weighted(n);
    for (std::size_t k = 0; k < n; ++k) {
        double w = 1.0;
        if (apod == Apodization::hann)
            w = 0.5 * (1.0 + std::cos(M_PI * static_cast<double>(k) / static_cast<double>(n - 1)));
        if (k == 0 || k + 1 == n)
            w *= 0.5; // trapezoid ends
        weighted[k] = w * c[k];
    }

    std::vector<double> out(e_grid.size());
    for (std::size_t m = 0; m < e_grid.size(); ++m) {
        const double e = e_grid[m];
        const Complex rot(std::cos(e * dt), std::sin(e * dt));
        Complex phase(1.0, 0.0);
        Complex acc(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            acc += weighted[k] * phase;
            phase *= rot;
        }
        acc *= dt;
        out[m] = std::norm(acc);
    }
    return out;
}

} // namespace colhel::spectral
