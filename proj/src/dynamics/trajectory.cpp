#include "dynamics/trajectory.hpp"

#include "dynamics/dop853.hpp"

#include <cmath>
#include <stdexcept>

namespace colhel::dyn {

namespace {

struct RegRhs {
    Configuration config;
    void operator()(const double* y, double* dy) const { regularized_rhs_raw(y, dy, config); }
};

using Stepper = Dop853<RegRhs>;

AssembledSample assemble(const double* y, const StartSensitivities& sens, double t,
                         const Configuration& config) {
    AssembledSample s;
    s.t = t;
    const double absE = sens.absE;
    const double rootE = std::sqrt(absE);
    s.point.q1 = y[0] * y[0] / absE;
    s.point.q2 = y[1] * y[1] / absE;
    s.point.p1 = rootE * y[2] / (2.0 * y[0]);
    s.point.p2 = rootE * y[3] / (2.0 * y[1]);
    s.action = y[5] / rootE;

    RegState state;
    std::copy(y, y + kRegStateDim, state.begin());
    s.monodromy = physical_monodromy(state, sens, t, config, &s.singular);
    return s;
}

class StepDense final : public DenseAssembler {
public:
    StepDense(Stepper* stepper, const StartSensitivities& sens, double tcoef,
              const Configuration& config)
        : stepper_(stepper), sens_(sens), tcoef_(tcoef), config_(config) {}

    AssembledSample at(double tau) const override {
        RegState y;
        stepper_->dense_eval(tau, y.data());
        return assemble(y.data(), sens_, y[4] / tcoef_, config_);
    }
    double tau_begin() const override { return stepper_->tau_old(); }
    double tau_end() const override { return stepper_->tau(); }

private:
    Stepper* stepper_;
    const StartSensitivities& sens_;
    double tcoef_;
    Configuration config_;
};

// Locates tau with t~(tau) = target inside [lo, hi] by bisection on the dense
// interpolant. t~ is nondecreasing, so a sign bracket always exists.
double solve_tau(Stepper& stepper, double lo, double hi, double target, double tol) {
    double flo = stepper.dense_component(lo, 4) - target;
    if (flo >= 0)
        return lo;
    for (int it = 0; it < 120; ++it) {
        double mid = 0.5 * (lo + hi);
        double fmid = stepper.dense_component(mid, 4) - target;
        if (std::abs(fmid) < tol || hi - lo < 1e-15 * (1.0 + std::abs(mid)))
            return mid;
        if (fmid < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

Mat4 physical_monodromy(const RegState& y, const StartSensitivities& sens, double t,
                        const Configuration& config, bool* singular) {
    const double absE = sens.absE;
    const double rootE = std::sqrt(absE);
    const double Q[2] = {y[0], y[1]};
    const double Preg[2] = {y[2], y[3]};

    RegState dy;
    regularized_rhs_raw(y.data(), dy.data(), config);
    const Vec4 flow(dy[0], dy[1], dy[2], dy[3]);
    const double g = dy[4]; // dt~/dtau = Q1^2 Q2^2

    Mat4 Mreg;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            Mreg(i, j) = y[6 + 4 * i + j];
    const Vec4 dtdz(y[22], y[23], y[24], y[25]);

    bool sing = Q[0] * Q[0] < 1e-12 || Q[1] * Q[1] < 1e-12 || g < 1e-20;
    if (singular)
        *singular = sing;

    Mat4 out;
    for (int j = 0; j < 4; ++j) {
        const Vec4 v = sens.dz0_dalpha.col(j);
        const double ej = sens.dabsE_dalpha[j];
        // dtau/dalpha_j at fixed physical t, from differentiating
        // t~ = |E|^{3/2} t with respect to the initial conditions
        const double dtau = (1.5 * rootE * t * ej - dtdz.dot(v)) / g;
        const Vec4 w = Mreg * v + flow * dtau;
        for (int i = 0; i < 2; ++i) {
            const double q_it = Q[i] * Q[i] / absE;
            const double p_it = rootE * Preg[i] / (2.0 * Q[i]);
            out(i, j) = (2.0 * Q[i] * w[i] - q_it * ej) / absE;
            out(2 + i, j) =
                (-p_it * w[i] + 0.5 * rootE * w[2 + i] + Preg[i] / (4.0 * rootE) * ej) / Q[i];
        }
    }
    return out;
}

PropagationResult propagate(const PhasePoint& start, const Configuration& config,
                            const TimeGrid& grid, const IntegratorParams& integ,
                            const GuardParams& guards, PropagationMonitor& monitor) {
    if (grid.n == 0 || !(grid.dt > 0) )
        throw std::invalid_argument("time grid must be uniform with dt > 0 and n >= 1");
    const double energy = hamiltonian_energy(start, config);
    if (!(energy < 0))
        throw std::domain_error("trajectory propagation requires E < 0");
    if (config.variant == Variant::Zee && !(start.q2 > start.q1))
        throw std::domain_error("Zee initial conditions require q2 > q1");

    const StartSensitivities sens = start_sensitivities(start, config);
    const double absE = sens.absE;
    const double tcoef = absE * std::sqrt(absE); // |E|^{3/2}
    const RegularizedPoint rp = regularize(scale(start, energy));
    RegState y0 = initial_reg_state(rp);

    Dop853Options opts;
    opts.rel_tol = integ.rel_tol;
    opts.abs_tol = integ.abs_tol;
    if (integ.max_step > 0)
        opts.max_step = integ.max_step;
    Stepper stepper(RegRhs{config}, kRegStateDim, opts);
    stepper.init(y0.data(), 0.0);

    const double q_cut =
        guards.ionization_cutoff > 0 ? guards.ionization_cutoff : 100.0 * std::max(start.q1, start.q2);

    PropagationResult result;
    result.energy = energy;

    AssembledSample first = assemble(y0.data(), sens, 0.0, config);
    monitor.on_point(first, 0.0, true, 0, nullptr);
    result.n_recorded = 1;
    if (monitor.stop_requested()) {
        result.status = Status::prefactor_overflow;
        return result;
    }
    std::size_t k = 1;
    if (k == grid.n) {
        result.status = Status::alive;
        return result;
    }

    const double t_tol = 1e-10 * std::max(1.0, tcoef * grid.time(grid.n - 1));
    double prev_ttilde = 0.0;

    while (true) {
        const double h = stepper.step();
        if (h == 0.0) {
            // step-size underflow: the only mechanism that defeats the
            // regularized equations is an approach to the triple collision
            result.status = Status::triple_collision_proximity;
            result.n_recorded = k;
            return result;
        }
        const double* yn = stepper.y();
        if (yn[4] < prev_ttilde - t_tol)
            throw std::runtime_error("scaled time decreased along trajectory: integration bug");

        StepDense dense(&stepper, sens, tcoef, config);
        double lo = stepper.tau_old();
        while (k < grid.n && tcoef * grid.time(k) <= yn[4]) {
            const double target = tcoef * grid.time(k);
            const double tau_star = solve_tau(stepper, lo, stepper.tau(), target, t_tol);
            RegState ys;
            stepper.dense_eval(tau_star, ys.data());
            AssembledSample sample = assemble(ys.data(), sens, grid.time(k), config);
            monitor.on_point(sample, tau_star, true, k, &dense);
            ++k;
            lo = tau_star;
            if (monitor.stop_requested()) {
                result.status = Status::prefactor_overflow;
                result.n_recorded = k;
                return result;
            }
        }
        if (k == grid.n) {
            result.status = Status::alive;
            result.n_recorded = k;
            return result;
        }

        AssembledSample node = assemble(yn, sens, yn[4] / tcoef, config);
        monitor.on_point(node, stepper.tau(), false, 0, &dense);
        if (monitor.stop_requested()) {
            result.status = Status::prefactor_overflow;
            result.n_recorded = k;
            return result;
        }

        if (yn[0] * yn[0] + yn[1] * yn[1] < guards.triple_eps) {
            result.status = Status::triple_collision_proximity;
            result.n_recorded = k;
            return result;
        }
        if (config.variant == Variant::Zee && !(yn[1] * yn[1] > yn[0] * yn[0]))
            throw std::runtime_error("Zee ordering q2 > q1 violated: integration bug");

        // Ionization: electron far out, moving outward, with positive energy
        // in the net charge-1 field it sees asymptotically.
        for (int i = 0; i < 2 && result.status == Status::alive; ++i) {
            const double q_i = yn[i] * yn[i] / absE;
            if (q_i > q_cut) {
                const double p_i = std::sqrt(absE) * yn[2 + i] / (2.0 * yn[i]);
                if (p_i > 0 && 0.5 * p_i * p_i - 1.0 / q_i > 0) {
                    result.status = Status::ionized;
                    result.n_recorded = k;
                    return result;
                }
            }
        }
        prev_ttilde = yn[4];
    }
}

namespace {

class RecordingMonitor final : public PropagationMonitor {
public:
    explicit RecordingMonitor(TrajectoryRecord& rec) : rec_(rec) {}
    void on_point(const AssembledSample& s, double, bool is_output, std::size_t,
                  const DenseAssembler*) override {
        if (!is_output)
            return;
        rec_.times.push_back(s.t);
        rec_.points.push_back(s.point);
        rec_.actions.push_back(s.action);
        rec_.monodromies.push_back(s.monodromy);
        rec_.singular.push_back(s.singular ? 1 : 0);
    }

private:
    TrajectoryRecord& rec_;
};

} // namespace

TrajectoryRecord advance_to_physical_times(const PhasePoint& start, const Configuration& config,
                                           const TimeGrid& grid, const IntegratorParams& integ,
                                           const GuardParams& guards) {
    TrajectoryRecord rec;
    RecordingMonitor monitor(rec);
    PropagationResult res = propagate(start, config, grid, integ, guards, monitor);
    rec.status = res.status;
    rec.energy = res.energy;
    return rec;
}

} // namespace colhel::dyn
