#include "hk/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace colhel::hk {

Draw raw_draw(const InitialStateSpec& spec, std::uint64_t seed, std::uint64_t index) {
    CounterRng rng(seed, index);
    const Packet1D packets[2] = {spec.packet1, spec.packet2};

    Draw d;
    double q[2], p[2], phase = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double sq = std::sqrt(2.0 / packets[i].gamma);
        const double sp = std::sqrt(2.0 * packets[i].gamma);
        q[i] = packets[i].q0 + sq * rng.next_normal();
        p[i] = packets[i].p0 + sp * rng.next_normal();
        phase += 0.5 * (p[i] + packets[i].p0) * (q[i] - packets[i].q0);
    }
    d.point = {q[0], q[1], p[0], p[1]};
    d.weight = 4.0 * Complex(std::cos(phase), std::sin(phase));
    return d;
}

RejectReason classify_draw(const Draw& draw, const SamplerConfig& sampler,
                           const dyn::Configuration& config) {
    const auto& pt = draw.point;
    if (!(pt.q1 > 0) || !(pt.q2 > 0))
        return RejectReason::domain;
    if (config.variant == dyn::Variant::Zee && !(pt.q2 > pt.q1))
        return RejectReason::domain;
    const double energy = dyn::hamiltonian_energy(pt, config);
    if (!(energy < 0))
        return RejectReason::energy; // above the double-ionization limit
    if (sampler.energy_window) {
        if (energy < sampler.energy_window->first || energy > sampler.energy_window->second)
            return RejectReason::energy;
    }
    return RejectReason::none;
}

SampleStream::SampleStream(const InitialStateSpec& spec, const SamplerConfig& sampler,
                           const dyn::Configuration& config)
    : spec_(spec), sampler_(sampler), config_(config) {
    if (sampler.energy_window && sampler.energy_window->second > 0)
        throw std::invalid_argument("energy window must satisfy E_max <= 0");
}

Draw SampleStream::next() {
    std::uint64_t misses = 0;
    while (true) {
        Draw d = raw_draw(spec_, sampler_.seed, stats_.attempts);
        ++stats_.attempts;
        switch (classify_draw(d, sampler_, config_)) {
        case RejectReason::none:
            ++stats_.accepted;
            return d;
        case RejectReason::domain:
            ++stats_.rejected_domain;
            break;
        case RejectReason::energy:
            ++stats_.rejected_energy;
            break;
        }
        if (++misses >= 1000000)
            throw std::runtime_error("no draw accepted in 10^6 attempts; energy window is empty");
    }
}

} // namespace colhel::hk
