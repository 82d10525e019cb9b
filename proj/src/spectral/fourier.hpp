#pragma once

#include <complex>
#include <span>
#include <vector>

namespace colhel::spectral {

using Complex = std::complex<double>;

enum class Apodization { rectangular, hann };

// Discrete approximation of |integral_0^T e^{iEt} c(t) dt|^2 on the uniform
// grid t_n = n dt, with trapezoid end weights and an optional apodization
// window.
std::vector<double> fourier_spectrum(std::span<const Complex> c, double dt,
                                     std::span<const double> e_grid,
                                     Apodization apod = Apodization::rectangular);

} // namespace colhel::spectral
