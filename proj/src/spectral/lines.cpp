#include "spectral/lines.hpp"

#include <algorithm>
#include <cmath>

namespace colhel::spectral {

std::vector<SpectralLine> line_filtering(std::vector<SpectralLine> lines, double min_amplitude,
                                         double min_stability, double dedupe_resolution) {
    std::vector<SpectralLine> kept;
    for (const auto& l : lines)
        if (std::abs(l.amplitude) >= min_amplitude && l.stability >= min_stability)
            kept.push_back(l);

    std::sort(kept.begin(), kept.end(), [](const SpectralLine& a, const SpectralLine& b) {
        return a.energy.real() < b.energy.real();
    });

    if (dedupe_resolution > 0 && kept.size() > 1) {
        std::vector<SpectralLine> merged;
        for (const auto& l : kept) {
            if (!merged.empty() &&
                std::abs(l.energy.real() - merged.back().energy.real()) < dedupe_resolution) {
                const auto& prev = merged.back();
                const bool replace = l.stability > prev.stability ||
                                     (l.stability == prev.stability &&
                                      std::abs(l.amplitude) > std::abs(prev.amplitude));
                if (replace)
                    merged.back() = l;
            } else {
                merged.push_back(l);
            }
        }
        kept = std::move(merged);
    }

    // binding energy -Re(E) descending == Re(E) ascending
    return kept;
}

std::vector<SpectralLine> extract_lines(std::span<const Complex> c, double dt,
                                        const ExtractionConfig& config,
                                        const InversionOptions& options) {
    const double range = config.e_hi - config.e_lo;
    const double width = config.window_width > 0 && config.window_width < range
                             ? config.window_width
                             : range;
    std::vector<SpectralLine> all;
    double lo = config.e_lo;
    while (true) {
        InversionWindow w;
        w.e_lo = lo;
        w.e_hi = std::min(lo + width, config.e_hi);
        w.basis_size = config.basis_size;
        w.n0 = config.n0;
        w.n1 = config.n1;
        auto lines = harmonic_inversion(c, dt, w, options);
        all.insert(all.end(), lines.begin(), lines.end());
        if (w.e_hi >= config.e_hi)
            break;
        lo += 0.5 * width; // 50% overlap
    }

    const std::size_t n1 = config.n1 == 0 ? c.size() : config.n1;
    const double duration = dt * static_cast<double>(n1 - config.n0);
    const double resolution = M_PI / duration; // half of 2 pi / T
    return line_filtering(std::move(all), config.min_amplitude, config.min_stability, resolution);
}

} // namespace colhel::spectral
