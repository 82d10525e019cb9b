#pragma once

#include "dynamics/trajectory.hpp"
#include "hk/coherent.hpp"
#include "hk/sampling.hpp"

#include <string>
#include <vector>

namespace colhel::hk {

struct TimeSample {
    dyn::PhasePoint pt;
    double action = 0;
    Complex R{1.0, 0.0};
    bool valid = true; // false at collision-singular output times
};

struct EngineTrajectory {
    std::vector<TimeSample> samples; // truncated at termination
    dyn::Status status = dyn::Status::alive;
};

// Classical dynamics backend for the Monte Carlo autocorrelation sum. The
// production engine propagates regularized helium; tests inject closed-form
// dynamics through the same interface.
class TrajectoryEngine {
public:
    virtual ~TrajectoryEngine() = default;
    virtual double energy(const dyn::PhasePoint& pt) const = 0;
    // geometric/domain validity of a raw draw
    virtual bool valid_start(const dyn::PhasePoint& pt) const = 0;
    // true if a trajectory can be propagated at this energy at all
    virtual bool energy_propagatable(double energy) const = 0;
    // discard_abs_R <= 0 disables the overflow abort
    virtual EngineTrajectory run(const dyn::PhasePoint& start, const dyn::TimeGrid& grid,
                                 const Eigen::Vector2d& gamma, double discard_abs_R) const = 0;
};

class HeliumEngine final : public TrajectoryEngine {
public:
    HeliumEngine(const dyn::Configuration& config, const dyn::IntegratorParams& integ = {},
                 const dyn::GuardParams& guards = {})
        : config_(config), integ_(integ), guards_(guards) {}

    double energy(const dyn::PhasePoint& pt) const override;
    bool valid_start(const dyn::PhasePoint& pt) const override;
    bool energy_propagatable(double energy) const override { return energy < 0; }
    EngineTrajectory run(const dyn::PhasePoint& start, const dyn::TimeGrid& grid,
                         const Eigen::Vector2d& gamma, double discard_abs_R) const override;

private:
    dyn::Configuration config_;
    dyn::IntegratorParams integ_;
    dyn::GuardParams guards_;
};

struct TrajectoryCounts {
    std::uint64_t attempts = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected_energy = 0;
    std::uint64_t rejected_domain = 0;
    std::uint64_t completed = 0;
    std::uint64_t ionized = 0;
    std::uint64_t triple = 0;
    std::uint64_t discarded = 0;

    void merge(const TrajectoryCounts& other);
};

struct AutocorrelationSignal {
    double dt = 0;
    std::vector<Complex> samples;
    std::vector<double> std_error; // batch-means estimate per time sample
    std::size_t n_traj_used = 0;
    TrajectoryCounts counts;
    std::string warning;
};

// Optional resumable storage of per-chunk partial sums.
class ChunkStore {
public:
    virtual ~ChunkStore() = default;
    virtual bool load(std::size_t chunk, std::vector<Complex>& sums, TrajectoryCounts& counts) = 0;
    virtual void save(std::size_t chunk, const std::vector<Complex>& sums,
                      const TrajectoryCounts& counts) = 0;
};

// Monte Carlo estimate of the symmetrized autocorrelation c(t). Work is
// split into fixed attempt-index chunks with per-trajectory random
// substreams, so the result is bit-identical for any worker count; the final
// reduction is a fixed-order pairwise sum over chunks.
AutocorrelationSignal autocorrelation(const InitialStateSpec& spec, const SamplerConfig& sampler,
                                      const dyn::TimeGrid& grid, const TrajectoryEngine& engine,
                                      unsigned workers = 0, ChunkStore* store = nullptr);

} // namespace colhel::hk
