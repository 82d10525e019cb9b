#include "hk/autocorrelation.hpp"

#include "core/parallel.hpp"
#include "hk/prefactor.hpp"

#include <cmath>
#include <stdexcept>

namespace colhel::hk {

double HeliumEngine::energy(const dyn::PhasePoint& pt) const {
    return dyn::hamiltonian_energy(pt, config_);
}

bool HeliumEngine::valid_start(const dyn::PhasePoint& pt) const {
    if (!(pt.q1 > 0) || !(pt.q2 > 0))
        return false;
    if (config_.variant == dyn::Variant::Zee && !(pt.q2 > pt.q1))
        return false;
    return true;
}

namespace {

class HkMonitor final : public dyn::PropagationMonitor {
public:
    HkMonitor(const Eigen::Vector2d& gamma, double discard_abs_R, std::size_t n_times)
        : gamma_(gamma), discard_abs_R_(discard_abs_R) {
        samples_.reserve(n_times);
    }

    void on_point(const dyn::AssembledSample& s, double tau, bool is_output,
                  std::size_t /*output_index*/, const dyn::DenseAssembler* dense) override {
        Complex d = s.singular ? Complex(std::nan(""), 0.0)
                               : prefactor_determinant(s.monodromy, gamma_);
        if (dense) {
            auto eval = [dense, this](double t) {
                return prefactor_determinant(dense->at(t).monodromy, gamma_);
            };
            tracker_.advance(tau, d, eval);
        } else {
            tracker_.advance(tau, d);
        }
        if (!is_output)
            return;
        TimeSample ts;
        ts.pt = s.point;
        ts.action = s.action;
        ts.valid = !s.singular && std::isfinite(d.real()) && std::isfinite(d.imag());
        ts.R = tracker_.R();
        if (ts.valid && discard_abs_R_ > 0 && tracker_.abs_R() > discard_abs_R_)
            overflow_ = true;
        samples_.push_back(ts);
    }

    bool stop_requested() const override { return overflow_; }

    std::vector<TimeSample> take_samples() { return std::move(samples_); }

private:
    Eigen::Vector2d gamma_;
    double discard_abs_R_;
    PrefactorTracker tracker_;
    std::vector<TimeSample> samples_;
    bool overflow_ = false;
};

} // namespace

EngineTrajectory HeliumEngine::run(const dyn::PhasePoint& start, const dyn::TimeGrid& grid,
                                   const Eigen::Vector2d& gamma, double discard_abs_R) const {
    HkMonitor monitor(gamma, discard_abs_R, grid.n);
    dyn::PropagationResult res = dyn::propagate(start, config_, grid, integ_, guards_, monitor);
    EngineTrajectory out;
    out.samples = monitor.take_samples();
    out.status = res.status;
    return out;
}

void TrajectoryCounts::merge(const TrajectoryCounts& other) {
    attempts += other.attempts;
    accepted += other.accepted;
    rejected_energy += other.rejected_energy;
    rejected_domain += other.rejected_domain;
    completed += other.completed;
    ionized += other.ionized;
    triple += other.triple;
    discarded += other.discarded;
}

namespace {

enum class DrawClass { accepted, domain, energy };

DrawClass classify(const Draw& draw, const SamplerConfig& sampler, const TrajectoryEngine& engine) {
    if (!engine.valid_start(draw.point))
        return DrawClass::domain;
    double energy;
    try {
        energy = engine.energy(draw.point);
    } catch (const std::domain_error&) {
        return DrawClass::domain;
    }
    if (!engine.energy_propagatable(energy))
        return DrawClass::energy;
    if (sampler.energy_window &&
        (energy < sampler.energy_window->first || energy > sampler.energy_window->second))
        return DrawClass::energy;
    return DrawClass::accepted;
}

void pairwise_sum(const std::vector<std::vector<Complex>>& parts, std::size_t lo, std::size_t hi,
                  std::vector<Complex>& out) {
    if (hi - lo == 1) {
        out = parts[lo];
        return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    std::vector<Complex> left, right;
    pairwise_sum(parts, lo, mid, left);
    pairwise_sum(parts, mid, hi, right);
    out.resize(left.size());
    for (std::size_t i = 0; i < left.size(); ++i)
        out[i] = left[i] + right[i];
}

constexpr std::size_t kChunkAttempts = 512;
constexpr std::size_t kErrorBatches = 32;

} // namespace

AutocorrelationSignal autocorrelation(const InitialStateSpec& spec, const SamplerConfig& sampler,
                                      const dyn::TimeGrid& grid, const TrajectoryEngine& engine,
                                      unsigned workers, ChunkStore* store) {
    if (sampler.n_traj == 0)
        throw std::invalid_argument("sampler.n_traj must be positive");
    if (sampler.energy_window && sampler.energy_window->second > 0)
        throw std::invalid_argument("energy window must satisfy E_max <= 0");
    if (spec.packet1.gamma != spec.packet2.gamma)
        throw std::invalid_argument("symmetrized autocorrelation requires a common packet width");

    const double norm = normalization_constant(spec);
    const double two_n2 = 2.0 * norm * norm;
    const double sign = spec.symmetry == Symmetry::symmetric ? 1.0 : -1.0;
    const Eigen::Vector2d gamma(spec.packet1.gamma, spec.packet2.gamma);
    const double discard_R = sampler.discard_threshold > 0 ? sampler.discard_threshold : 0.0;

    // Pre-scan: fix the total attempt count that yields exactly n_traj
    // accepted draws. Drawing is cheap next to propagation, so repeating the
    // draws inside the chunks costs little and keeps every chunk independent.
    std::uint64_t n_attempts = 0;
    {
        std::uint64_t accepted = 0, misses = 0;
        while (accepted < sampler.n_traj) {
            Draw d = raw_draw(spec, sampler.seed, n_attempts);
            ++n_attempts;
            if (classify(d, sampler, engine) == DrawClass::accepted) {
                ++accepted;
                misses = 0;
            } else if (++misses >= 1000000) {
                throw std::runtime_error("no draw accepted in 10^6 attempts; energy window is empty");
            }
        }
    }

    const std::size_t n_chunks = static_cast<std::size_t>((n_attempts + kChunkAttempts - 1) / kChunkAttempts);
    std::vector<std::vector<Complex>> chunk_sums(n_chunks);
    std::vector<TrajectoryCounts> chunk_counts(n_chunks);

    parallel_chunks(n_chunks, workers, [&](std::size_t c) {
        std::vector<Complex>& sums = chunk_sums[c];
        TrajectoryCounts& counts = chunk_counts[c];
        if (store && store->load(c, sums, counts) && sums.size() == grid.n)
            return;
        sums.assign(grid.n, Complex(0.0, 0.0));
        counts = {};

        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunkAttempts;
        const std::uint64_t end = std::min<std::uint64_t>(begin + kChunkAttempts, n_attempts);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            Draw d = raw_draw(spec, sampler.seed, idx);
            ++counts.attempts;
            switch (classify(d, sampler, engine)) {
            case DrawClass::domain:
                ++counts.rejected_domain;
                continue;
            case DrawClass::energy:
                ++counts.rejected_energy;
                continue;
            case DrawClass::accepted:
                break;
            }
            ++counts.accepted;

            EngineTrajectory tr = engine.run(d.point, grid, gamma, discard_R);
            if (tr.status == dyn::Status::prefactor_overflow) {
                ++counts.discarded; // dropped entirely, contributes nothing
                continue;
            }
            switch (tr.status) {
            case dyn::Status::alive: ++counts.completed; break;
            case dyn::Status::ionized: ++counts.ionized; break;
            case dyn::Status::triple_collision_proximity: ++counts.triple; break;
            default: break;
            }

            const Complex base = two_n2 * d.weight;
            const std::size_t n_valid = std::min<std::size_t>(tr.samples.size(), grid.n);
            for (std::size_t k = 0; k < n_valid; ++k) {
                const TimeSample& s = tr.samples[k];
                if (!s.valid)
                    continue;
                const Complex ov1 = overlap_1d(gamma[0], spec.packet1.q0, spec.packet1.p0, s.pt.q1, s.pt.p1);
                const Complex ov2 = overlap_1d(gamma[1], spec.packet2.q0, spec.packet2.p0, s.pt.q2, s.pt.p2);
                const Complex ox1 = overlap_1d(gamma[0], spec.packet2.q0, spec.packet2.p0, s.pt.q1, s.pt.p1);
                const Complex ox2 = overlap_1d(gamma[1], spec.packet1.q0, spec.packet1.p0, s.pt.q2, s.pt.p2);
                const Complex bracket = ov1 * ov2 + sign * ox1 * ox2;
                Complex r = s.R;
                if (sampler.prefactor_policy == PrefactorPolicy::modulus_sqrt)
                    r = std::polar(std::sqrt(std::abs(r)), std::arg(r));
                const Complex action_phase(std::cos(s.action), std::sin(s.action));
                sums[k] += base * bracket * r * action_phase;
            }
        }
        if (store)
            store->save(c, sums, counts);
    });

    AutocorrelationSignal out;
    out.dt = grid.dt;
    for (const auto& counts : chunk_counts)
        out.counts.merge(counts);
    out.n_traj_used = out.counts.accepted - out.counts.discarded;

    std::vector<Complex> total;
    pairwise_sum(chunk_sums, 0, n_chunks, total);
    const double inv_n = 1.0 / static_cast<double>(n_attempts);
    out.samples.resize(grid.n);
    for (std::size_t k = 0; k < grid.n; ++k)
        out.samples[k] = total[k] * inv_n;

    // Batch-means error estimate: group chunks cyclically into batches.
    const std::size_t n_batches = std::min<std::size_t>(kErrorBatches, n_chunks);
    out.std_error.assign(grid.n, 0.0);
    if (n_batches >= 2) {
        std::vector<std::vector<Complex>> batch_sums(n_batches, std::vector<Complex>(grid.n, 0.0));
        std::vector<double> batch_attempts(n_batches, 0.0);
        for (std::size_t c = 0; c < n_chunks; ++c) {
            auto& dst = batch_sums[c % n_batches];
            for (std::size_t k = 0; k < grid.n; ++k)
                dst[k] += chunk_sums[c][k];
            batch_attempts[c % n_batches] += static_cast<double>(chunk_counts[c].attempts);
        }
        for (std::size_t k = 0; k < grid.n; ++k) {
            double acc = 0.0;
            for (std::size_t b = 0; b < n_batches; ++b) {
                if (batch_attempts[b] == 0)
                    continue;
                Complex mean_b = batch_sums[b][k] / batch_attempts[b];
                acc += std::norm(mean_b - out.samples[k]);
            }
            out.std_error[k] =
                std::sqrt(acc / (static_cast<double>(n_batches) * (static_cast<double>(n_batches) - 1.0)));
        }
    }

    const std::uint64_t surviving = out.counts.completed;
    if (surviving < sampler.min_surviving)
        out.warning = "only " + std::to_string(surviving) +
                      " trajectories survived to the final time; increase n_traj or reduce T";
    return out;
}

} // namespace colhel::hk
