#include "cli/run.hpp"

#include "core/csv.hpp"
#include "core/parallel.hpp"
#include "core/sha1.hpp"
#include "spectral/fourier.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace colhel::cli {

using nlohmann::json;
namespace fs = std::filesystem;

hk::InitialStateSpec frozen_planet_initial_state(double energy_estimate, double gamma) {
    if (!(energy_estimate < 0))
        throw std::domain_error("frozen-planet scaling requires E < 0");
    const double absE = -energy_estimate;
    hk::InitialStateSpec spec;
    spec.packet1 = {2.15 / absE, 0.0, gamma};
    spec.packet2 = {5.76 / absE, 0.0, gamma};
    spec.symmetry = hk::Symmetry::symmetric;
    return spec;
}

namespace {

std::string physics_hash(const ExperimentConfig& c) {
    json j;
    j["configuration"] = c.configuration.variant == dyn::Variant::eZe ? "eZe" : "Zee";
    j["state"] = {c.state.packet1.q0,    c.state.packet1.p0, c.state.packet1.gamma,
                  c.state.packet2.q0,    c.state.packet2.p0, c.state.packet2.gamma,
                  static_cast<int>(c.state.symmetry)};
    j["sampler"] = {c.sampler.n_traj, c.sampler.seed,
                    static_cast<int>(c.sampler.prefactor_policy), c.sampler.discard_threshold};
    if (c.sampler.energy_window)
        j["window"] = {c.sampler.energy_window->first, c.sampler.energy_window->second};
    j["grid"] = {c.grid.dt, c.grid.n};
    j["integrator"] = {c.integrator.rel_tol, c.integrator.abs_tol, c.integrator.max_step};
    j["guards"] = {c.guards.ionization_cutoff, c.guards.triple_eps};
    return sha1_hex(j.dump());
}

// Append-only chunk checkpoint; records are fixed-size once the grid length
// is known, and the last record for a chunk wins on reload.
class FileChunkStore final : public hk::ChunkStore {
public:
    FileChunkStore(const std::string& path, const std::string& hash, std::size_t n_times,
                   bool resume)
        : path_(path), hash_(hash), n_times_(n_times) {
        if (resume)
            load_existing();
        out_ = std::fopen(path_.c_str(), resume && header_ok_ ? "ab" : "wb");
        if (!out_)
            throw std::runtime_error("cannot open checkpoint file: " + path_);
        if (!header_ok_) {
            std::fwrite(kMagic, 1, 8, out_);
            std::fwrite(hash_.data(), 1, 40, out_);
            const std::uint64_t nt = n_times_;
            std::fwrite(&nt, sizeof(nt), 1, out_);
            std::fflush(out_);
            header_ok_ = true;
        }
    }
    ~FileChunkStore() override {
        if (out_)
            std::fclose(out_);
    }

    bool load(std::size_t chunk, std::vector<hk::Complex>& sums,
              hk::TrajectoryCounts& counts) override {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(chunk);
        if (it == cache_.end())
            return false;
        sums = it->second.first;
        counts = it->second.second;
        return true;
    }

    void save(std::size_t chunk, const std::vector<hk::Complex>& sums,
              const hk::TrajectoryCounts& counts) override {
        std::lock_guard<std::mutex> lock(mutex_);
        const std::uint64_t id = chunk;
        std::fwrite(&id, sizeof(id), 1, out_);
        std::fwrite(&counts, sizeof(counts), 1, out_);
        std::fwrite(sums.data(), sizeof(hk::Complex), sums.size(), out_);
        if (++saves_ % 64 == 0)
            std::fflush(out_);
    }

private:
    static constexpr const char kMagic[9] = "COLHELCK";

    void load_existing() {
        std::FILE* in = std::fopen(path_.c_str(), "rb");
        if (!in)
            return;
        char magic[8];
        char hash[41] = {0};
        std::uint64_t nt = 0;
        if (std::fread(magic, 1, 8, in) == 8 && std::memcmp(magic, kMagic, 8) == 0 &&
            std::fread(hash, 1, 40, in) == 40 && hash_ == hash &&
            std::fread(&nt, sizeof(nt), 1, in) == 1 && nt == n_times_) {
            header_ok_ = true;
            while (true) {
                std::uint64_t id;
                hk::TrajectoryCounts counts;
                std::vector<hk::Complex> sums(n_times_);
                if (std::fread(&id, sizeof(id), 1, in) != 1)
                    break;
                if (std::fread(&counts, sizeof(counts), 1, in) != 1)
                    break;
                if (std::fread(sums.data(), sizeof(hk::Complex), n_times_, in) != n_times_)
                    break;
                cache_[id] = {std::move(sums), counts};
            }
        }
        std::fclose(in);
    }

    std::string path_, hash_;
    std::size_t n_times_;
    std::map<std::size_t, std::pair<std::vector<hk::Complex>, hk::TrajectoryCounts>> cache_;
    std::mutex mutex_;
    std::FILE* out_ = nullptr;
    bool header_ok_ = false;
    std::size_t saves_ = 0;
};

const char* status_name(dyn::Status status) {
    switch (status) {
    case dyn::Status::alive: return "alive";
    case dyn::Status::ionized: return "ionized";
    case dyn::Status::triple_collision_proximity: return "triple_collision_proximity";
    case dyn::Status::prefactor_overflow: return "prefactor_overflow";
    }
    return "?";
}

json counts_json(const hk::TrajectoryCounts& c) {
    return json{{"sampled", c.attempts},
                {"accepted", c.accepted},
                {"rejected_energy", c.rejected_energy},
                {"rejected_domain", c.rejected_domain},
                {"completed", c.completed},
                {"ionized", c.ionized},
                {"triple_collision", c.triple},
                {"discarded", c.discarded}};
}

} // namespace

void write_autocorr_csv(const std::string& path, const hk::AutocorrelationSignal& signal) {
    CsvWriter csv(path);
    csv.header("t,re_c,im_c,stderr");
    for (std::size_t k = 0; k < signal.samples.size(); ++k)
        csv.row({signal.dt * static_cast<double>(k), signal.samples[k].real(),
                 signal.samples[k].imag(), signal.std_error[k]});
}

hk::AutocorrelationSignal read_autocorr_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open signal: " + path);
    hk::AutocorrelationSignal signal;
    std::string line;
    std::getline(in, line); // header
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string f;
        std::getline(ss, f, ',');
        times.push_back(std::stod(f));
        std::getline(ss, f, ',');
        const double re = std::stod(f);
        std::getline(ss, f, ',');
        const double im = std::stod(f);
        signal.samples.emplace_back(re, im);
        if (std::getline(ss, f, ','))
            signal.std_error.push_back(std::stod(f));
        else
            signal.std_error.push_back(0.0);
    }
    if (times.size() < 2)
        throw std::runtime_error("signal has fewer than two samples: " + path);
    signal.dt = times[1] - times[0];
    return signal;
}

void write_lines_csv(const std::string& path, const std::vector<spectral::SpectralLine>& lines) {
    CsvWriter csv(path);
    csv.header("re_E,im_E,re_d,im_d,stability");
    for (const auto& l : lines)
        csv.row({l.energy.real(), l.energy.imag(), l.amplitude.real(), l.amplitude.imag(),
                 l.stability});
}

void write_spectrum_csv(const std::string& path, const std::vector<double>& e_grid,
                        const std::vector<double>& f) {
    CsvWriter csv(path);
    csv.header("E,F");
    for (std::size_t i = 0; i < e_grid.size(); ++i)
        csv.row({e_grid[i], f[i]});
}

hk::AutocorrelationSignal run_autocorrelation(const ExperimentConfig& config, bool resume,
                                              const std::string& checkpoint_path) {
    hk::HeliumEngine engine(config.configuration, config.integrator, config.guards);
    std::unique_ptr<FileChunkStore> store;
    if (!checkpoint_path.empty())
        store = std::make_unique<FileChunkStore>(checkpoint_path, physics_hash(config),
                                                 config.grid.n, resume);
    return hk::autocorrelation(config.state, config.sampler, config.grid, engine, config.workers,
                               store.get());
}

EnergyTable run_qm_jobs(const ExperimentConfig& config) {
    // group requested levels per (family, N) so one basis-growth run serves a
    // whole series
    std::map<std::pair<qm::Family, int>, int> groups;
    for (const auto& job : config.qm_jobs) {
        auto key = std::make_pair(job.family, job.N);
        groups[key] = std::max(groups[key], job.n);
    }
    std::vector<std::pair<std::pair<qm::Family, int>, int>> group_list(groups.begin(),
                                                                       groups.end());
    std::vector<std::vector<qm::LevelResult>> group_results(group_list.size());
    parallel_chunks(group_list.size(), config.workers, [&](std::size_t g) {
        const auto& [key, max_n] = group_list[g];
        group_results[g] = qm::converged_series(key.second, max_n, key.first, config.level_controls);
    });

    EnergyTable table;
    for (std::size_t g = 0; g < group_list.size(); ++g) {
        for (const auto& level : group_results[g]) {
            LevelKey key{family_name(group_list[g].first.first), level.N, level.n};
            // emit only the requested levels
            bool wanted = false;
            for (const auto& job : config.qm_jobs)
                wanted |= job.family == group_list[g].first.first && job.N == level.N &&
                          job.n == level.n;
            if (wanted)
                table[key] = {level.binding_energy, level.converged, level.basis_functions};
        }
    }
    return table;
}

namespace {

std::vector<spectral::SpectralLine> spectrum_and_lines(const ExperimentConfig& config,
                                                       const hk::AutocorrelationSignal& signal,
                                                       const std::string& out_dir) {
    std::vector<double> e_grid;
    const int n_grid = 1500;
    for (int i = 0; i <= n_grid; ++i)
        e_grid.push_back(config.inversion.e_lo +
                         (config.inversion.e_hi - config.inversion.e_lo) * i / double(n_grid));
    const auto f = spectral::fourier_spectrum(signal.samples, signal.dt, e_grid,
                                              spectral::Apodization::hann);
    write_spectrum_csv(out_dir + "/spectrum.csv", e_grid, f);

    auto lines = spectral::extract_lines(signal.samples, signal.dt, config.inversion,
                                         config.inversion_options);
    write_lines_csv(out_dir + "/lines.csv", lines);
    return lines;
}

} // namespace

RunResult run(const ExperimentConfig& config, bool resume) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(config.output_dir);
    const std::string out = config.output_dir;

    json manifest;
    manifest["config"] = config_to_json(config);
    manifest["config_hash"] = physics_hash(config);
    json outputs = json::array();
    int exit_code = 0;

    switch (config.mode) {
    case Mode::trajectory: {
        auto rec = dyn::advance_to_physical_times(config.start, config.configuration, config.grid,
                                                  config.integrator, config.guards);
        CsvWriter csv(out + "/trajectory.csv");
        csv.header("t,q1,q2,p1,p2,S,status");
        for (std::size_t k = 0; k < rec.times.size(); ++k)
            csv.raw_row(format_double(rec.times[k]) + "," + format_double(rec.points[k].q1) + "," +
                        format_double(rec.points[k].q2) + "," + format_double(rec.points[k].p1) +
                        "," + format_double(rec.points[k].p2) + "," +
                        format_double(rec.actions[k]) + "," + status_name(rec.status));
        manifest["trajectory"] = {{"status", status_name(rec.status)},
                                  {"energy", rec.energy},
                                  {"n_recorded", rec.times.size()}};
        outputs.push_back("trajectory.csv");
        break;
    }
    case Mode::autocorr: {
        auto signal = run_autocorrelation(config, resume, out + "/autocorr.ckpt");
        write_autocorr_csv(out + "/autocorr.csv", signal);
        manifest["counts"] = counts_json(signal.counts);
        manifest["n_traj_used"] = signal.n_traj_used;
        if (!signal.warning.empty())
            manifest["warning"] = signal.warning;
        outputs.push_back("autocorr.csv");
        break;
    }
    case Mode::spectrum: {
        auto signal = read_autocorr_csv(out + "/autocorr.csv");
        spectrum_and_lines(config, signal, out);
        outputs.push_back("spectrum.csv");
        outputs.push_back("lines.csv");
        break;
    }
    case Mode::qm: {
        auto table = run_qm_jobs(config);
        write_energy_table(out + "/qm_table.csv", table);
        outputs.push_back("qm_table.csv");
        break;
    }
    case Mode::reproduce: {
        auto signal = run_autocorrelation(config, resume, out + "/autocorr.ckpt");
        write_autocorr_csv(out + "/autocorr.csv", signal);
        manifest["counts"] = counts_json(signal.counts);
        manifest["n_traj_used"] = signal.n_traj_used;
        if (!signal.warning.empty())
            manifest["warning"] = signal.warning;
        outputs.push_back("autocorr.csv");

        auto lines = spectrum_and_lines(config, signal, out);
        outputs.push_back("spectrum.csv");
        outputs.push_back("lines.csv");

        EnergyTable reference = run_qm_jobs(config);
        // override with tabulated references where the preset pins them
        for (const auto& job : config.qm_jobs)
            if (job.reference > 0) {
                LevelKey key{family_name(job.family), job.N, job.n};
                if (!reference.count(key))
                    reference[key] = {job.reference, true, 0};
            }
        write_energy_table(out + "/qm_table.csv", reference);
        outputs.push_back("qm_table.csv");

        // label extracted lines by the nearest reference level
        EnergyTable computed;
        for (const auto& [key, ref] : reference) {
            double best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (const auto& line : lines) {
                const double binding = -line.energy.real();
                const double dist = std::abs(binding - ref.binding);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = binding;
                }
            }
            if (std::isfinite(best_dist))
                computed[key] = {best, true, 0};
        }
        auto report = compare_tables(computed, reference, config.compare_tolerance);
        write_compare_report(out + "/compare.csv", report);
        outputs.push_back("compare.csv");
        json rows = json::array();
        for (const auto& row : report.rows)
            rows.push_back({{"family", row.key.family},
                            {"N", row.key.N},
                            {"n", row.key.n},
                            {"semiclassical", row.computed},
                            {"reference", row.reference},
                            {"rel_dev", row.rel_dev},
                            {"pass", row.pass}});
        manifest["comparison"] = rows;
        manifest["all_pass"] = report.all_pass;
        if (!report.all_pass)
            exit_code = 2;
        break;
    }
    case Mode::compare:
        throw std::invalid_argument("compare mode runs through the CLI with two table paths");
    }

    const auto t1 = std::chrono::steady_clock::now();
    manifest["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();
    manifest["outputs"] = outputs;
    RunResult result;
    result.exit_code = exit_code;
    result.manifest_path = out + "/manifest.json";
    std::ofstream mf(result.manifest_path);
    mf << manifest.dump(2) << "\n";
    return result;
}

} // namespace colhel::cli
