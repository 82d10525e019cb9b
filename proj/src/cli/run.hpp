#pragma once

#include "cli/compare.hpp"
#include "cli/config.hpp"

namespace colhel::cli {

// Initial-state parameters on the frozen-planet orbit scaled to an energy
// estimate: q0 = (2.15, 5.76)/|E|, p0 = (0, 0). Rejects E >= 0.
hk::InitialStateSpec frozen_planet_initial_state(double energy_estimate, double gamma = 0.4);

struct RunResult {
    int exit_code = 0; // 0 pass, 2 tolerance failure
    std::string manifest_path;
};

// Executes the configured pipeline and writes artifacts plus a manifest
// into config.output_dir. `resume` reuses a matching checkpoint when present.
RunResult run(const ExperimentConfig& config, bool resume = false);

// Building blocks used by run(); exposed for tests.
hk::AutocorrelationSignal run_autocorrelation(const ExperimentConfig& config, bool resume,
                                              const std::string& checkpoint_path);
EnergyTable run_qm_jobs(const ExperimentConfig& config);

void write_autocorr_csv(const std::string& path, const hk::AutocorrelationSignal& signal);
hk::AutocorrelationSignal read_autocorr_csv(const std::string& path);
void write_lines_csv(const std::string& path, const std::vector<spectral::SpectralLine>& lines);
void write_spectrum_csv(const std::string& path, const std::vector<double>& e_grid,
                        const std::vector<double>& f);

} // namespace colhel::cli
