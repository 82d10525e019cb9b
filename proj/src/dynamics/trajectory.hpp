#pragma once

#include "dynamics/collinear.hpp"
#include "dynamics/regularized.hpp"

#include <cstddef>
#include <vector>

namespace colhel::dyn {

enum class Status {
    alive,                       // reached the end of the requested grid
    ionized,                     // one electron escaped with positive energy
    triple_collision_proximity,  // entered the triple-collision region
    prefactor_overflow,          // discarded by the propagator consumer
};

struct IntegratorParams {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0; // 0 = unlimited
};

struct GuardParams {
    // Escape distance; 0 selects 100 * max initial coordinate.
    double ionization_cutoff = 0;
    double triple_eps = 1e-6;
};

// Uniform output grid t_k = k * dt, k = 0 .. n-1.
struct TimeGrid {
    double dt = 0;
    std::size_t n = 0;
    double time(std::size_t k) const { return dt * static_cast<double>(k); }
};

struct AssembledSample {
    double t = 0;
    PhasePoint point;
    double action = 0;  // physical S_t = |E|^{-1/2} S~
    Mat4 monodromy;     // d(q_t, p_t)/d(q, p)
    bool singular = false; // q_it ~ 0: physical momentum/monodromy blow up here
};

// Dense evaluation of assembled physical quantities within the current
// integrator step; used by monitors that refine between reported points.
class DenseAssembler {
public:
    virtual ~DenseAssembler() = default;
    virtual AssembledSample at(double tau) const = 0;
    virtual double tau_begin() const = 0;
    virtual double tau_end() const = 0;
};

// Receives every output-grid sample and every accepted step endpoint in tau
// order. `dense` is null only for the initial point at tau = 0.
class PropagationMonitor {
public:
    virtual ~PropagationMonitor() = default;
    virtual void on_point(const AssembledSample& sample, double tau, bool is_output,
                          std::size_t output_index, const DenseAssembler* dense) = 0;
    // Monitors may request early termination (e.g. prefactor overflow).
    virtual bool stop_requested() const { return false; }
};

struct PropagationResult {
    Status status = Status::alive;
    std::size_t n_recorded = 0; // output samples delivered
    double energy = 0;
};

// Integrates the 26-equation regularized system, locating each requested
// physical time by root-solving t~(tau) = |E|^{3/2} t on the dense output,
// and hands assembled physical samples to the monitor.
PropagationResult propagate(const PhasePoint& start, const Configuration& config,
                            const TimeGrid& grid, const IntegratorParams& integ,
                            const GuardParams& guards, PropagationMonitor& monitor);

// Physical monodromy d(q_t,p_t)/d(q,p) assembled from the regularized state
// at tau(t) via the chain rule through the scaling, regularization, and time
// transformations. Sets *singular when the requested time sits essentially at
// a collision (q_it -> 0), where the physical elements diverge.
Mat4 physical_monodromy(const RegState& y, const StartSensitivities& start, double t,
                        const Configuration& config, bool* singular = nullptr);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<PhasePoint> points;
    std::vector<double> actions;
    std::vector<Mat4> monodromies;
    std::vector<char> singular;
    Status status = Status::alive;
    double energy = 0;
};

TrajectoryRecord advance_to_physical_times(const PhasePoint& start, const Configuration& config,
                                           const TimeGrid& grid, const IntegratorParams& integ = {},
                                           const GuardParams& guards = {});

} // namespace colhel::dyn
