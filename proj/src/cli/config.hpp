#pragma once

#include "dynamics/trajectory.hpp"
#include "hk/autocorrelation.hpp"
#include "qm/levels.hpp"
#include "spectral/lines.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace colhel::cli {

enum class Mode { trajectory, autocorr, spectrum, qm, reproduce, compare };

struct QmJob {
    qm::Family family;
    int N = 1, n = 1;
    double reference = 0; // tabulated value when known, 0 otherwise
};

// One fully serializable experiment description; the JSON echo in the run
// manifest reproduces the run byte-for-byte on the same build.
struct ExperimentConfig {
    Mode mode = Mode::autocorr;
    dyn::Configuration configuration;
    hk::InitialStateSpec state;
    hk::SamplerConfig sampler;
    std::size_t full_n_traj = 0; // paper-scale count behind --full
    dyn::TimeGrid grid{0.5, 401};
    dyn::IntegratorParams integrator;
    dyn::GuardParams guards;
    spectral::ExtractionConfig inversion;
    spectral::InversionOptions inversion_options;
    std::vector<QmJob> qm_jobs;
    qm::LevelControls level_controls;
    dyn::PhasePoint start{2.0, 2.4, 0.0, -0.1}; // trajectory mode
    double compare_tolerance = 0.01;
    std::string output_dir = ".";
    unsigned workers = 0;
    std::string preset_name; // informational
};

// Throws std::invalid_argument with a JSON-pointer-style field path on schema
// violations.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

ExperimentConfig load_config_file(const std::string& path);
// Resolves <name>.json against dir, $COLHEL_PRESET_DIR, or the build-time
// preset directory.
ExperimentConfig load_preset(const std::string& name, const std::string& dir = "");

std::string mode_name(Mode mode);
std::string family_name(qm::Family family);
qm::Family family_from_name(const std::string& name);

} // namespace colhel::cli
