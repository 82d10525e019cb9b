#pragma once

#include "core/rng.hpp"
#include "dynamics/collinear.hpp"
#include "hk/coherent.hpp"

#include <cstdint>
#include <optional>

namespace colhel::hk {

enum class PrefactorPolicy { exact, modulus_sqrt };

struct SamplerConfig {
    std::size_t n_traj = 0; // accepted trajectories
    // [E_min, E_max] with E_max <= 0; unset disables energy filtering
    std::optional<std::pair<double, double>> energy_window;
    std::uint64_t seed = 0;
    PrefactorPolicy prefactor_policy = PrefactorPolicy::exact;
    // raw |R| above which a trajectory is dropped entirely; <= 0 disables
    double discard_threshold = 1e20;
    std::size_t min_surviving = 100; // below this at the final time: warning
};

// One phase-space draw from the density proportional to the modulus of the
// coherent-state overlap: per degree of freedom a Gaussian with variance
// 2/gamma in q and 2*gamma in p (twice the |.|^2 widths).
struct Draw {
    dyn::PhasePoint point;
    Complex weight; // integrand/density including the (2 pi)^2 measure: 4 e^{i phi}
};

// Deterministic draw for a given attempt index; identical (seed, index) pairs
// give identical draws regardless of threading.
Draw raw_draw(const InitialStateSpec& spec, std::uint64_t seed, std::uint64_t index);

enum class RejectReason { none, domain, energy };

// Helium acceptance rule: q_i > 0 (and q2 > q1 for Zee), propagatable E < 0,
// and E within the window when one is set.
RejectReason classify_draw(const Draw& draw, const SamplerConfig& sampler,
                           const dyn::Configuration& config);

struct StreamStats {
    std::uint64_t attempts = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected_energy = 0;
    std::uint64_t rejected_domain = 0;
};

// Reproducible stream of accepted helium initial conditions. Throws
// std::runtime_error if 10^6 consecutive attempts are rejected.
class SampleStream {
public:
    SampleStream(const InitialStateSpec& spec, const SamplerConfig& sampler,
                 const dyn::Configuration& config);

    Draw next(); // next accepted draw
    const StreamStats& stats() const { return stats_; }

private:
    InitialStateSpec spec_;
    SamplerConfig sampler_;
    dyn::Configuration config_;
    StreamStats stats_;
};

} // namespace colhel::hk
