#pragma once

#include "spectral/harmonic_inversion.hpp"

namespace colhel::spectral {

// Keeps lines with |amplitude| >= min_amplitude and stability >= min_stability,
// merges duplicates closer in Re(E) than dedupe_resolution (keeping the more
// stable, then stronger, line), and sorts by binding energy -Re(E) descending.
std::vector<SpectralLine> line_filtering(std::vector<SpectralLine> lines, double min_amplitude,
                                         double min_stability, double dedupe_resolution = 0);

struct ExtractionConfig {
    double e_lo = 0;
    double e_hi = 0;
    std::size_t basis_size = 50;
    double window_width = 0; // 0 = one window over the full range
    std::size_t n0 = 0, n1 = 0;
    double min_amplitude = 1e-4;
    double min_stability = 0.2;
};

// Covers [e_lo, e_hi] with 50%-overlapping inversion windows, merges the
// per-window line lists, and filters. Duplicates from overlapping windows are
// deduplicated at half the Fourier resolution 2 pi / T.
std::vector<SpectralLine> extract_lines(std::span<const Complex> c, double dt,
                                        const ExtractionConfig& config,
                                        const InversionOptions& options = {});

} // namespace colhel::spectral
