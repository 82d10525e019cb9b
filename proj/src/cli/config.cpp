#include "cli/config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#ifndef COLHEL_PRESET_DIR
#define COLHEL_PRESET_DIR ""
#endif

namespace colhel::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config error at " + path + ": " + what);
}

double get_number(const json& j, const std::string& path, const char* key, double fallback,
                  bool required = false) {
    if (!j.contains(key)) {
        if (required)
            fail(path + "/" + key, "missing required field");
        return fallback;
    }
    if (!j[key].is_number())
        fail(path + "/" + key, "expected a number");
    return j[key].get<double>();
}

std::string get_string(const json& j, const std::string& path, const char* key,
                       const std::string& fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required)
            fail(path + "/" + key, "missing required field");
        return fallback;
    }
    if (!j[key].is_string())
        fail(path + "/" + key, "expected a string");
    return j[key].get<std::string>();
}

} // namespace

std::string mode_name(Mode mode) {
    switch (mode) {
    case Mode::trajectory: return "trajectory";
    case Mode::autocorr: return "autocorr";
    case Mode::spectrum: return "spectrum";
    case Mode::qm: return "qm";
    case Mode::reproduce: return "reproduce";
    case Mode::compare: return "compare";
    }
    return "?";
}

std::string family_name(qm::Family family) {
    switch (family) {
    case qm::Family::eZe_symmetric: return "eZe_symmetric";
    case qm::Family::eZe_antisymmetric: return "eZe_antisymmetric";
    case qm::Family::Zee_singlet: return "Zee_singlet";
    }
    return "?";
}

qm::Family family_from_name(const std::string& name) {
    if (name == "eZe_symmetric")
        return qm::Family::eZe_symmetric;
    if (name == "eZe_antisymmetric")
        return qm::Family::eZe_antisymmetric;
    if (name == "Zee_singlet")
        return qm::Family::Zee_singlet;
    throw std::invalid_argument("unknown family: " + name +
                                " (expected eZe_symmetric|eZe_antisymmetric|Zee_singlet)");
}

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig c;
    if (!j.is_object())
        fail("/", "configuration must be a JSON object");

    const std::string mode = get_string(j, "", "mode", "autocorr");
    if (mode == "trajectory") c.mode = Mode::trajectory;
    else if (mode == "autocorr") c.mode = Mode::autocorr;
    else if (mode == "spectrum") c.mode = Mode::spectrum;
    else if (mode == "qm" || mode == "table1" || mode == "table2") c.mode = Mode::qm;
    else if (mode == "reproduce") c.mode = Mode::reproduce;
    else if (mode == "compare") c.mode = Mode::compare;
    else fail("/mode", "unknown mode '" + mode + "'");

    const std::string variant = get_string(j, "", "configuration", "eZe");
    if (variant == "eZe") c.configuration.variant = dyn::Variant::eZe;
    else if (variant == "Zee") c.configuration.variant = dyn::Variant::Zee;
    else fail("/configuration", "expected eZe or Zee");

    if (j.contains("initial_state")) {
        const json& s = j["initial_state"];
        const std::string path = "/initial_state";
        if (!s.is_object())
            fail(path, "expected an object");
        auto read_vec2 = [&](const char* key, double& a, double& b, bool required) {
            if (!s.contains(key)) {
                if (required)
                    fail(path + "/" + key, "missing required field");
                return;
            }
            if (!s[key].is_array() || s[key].size() != 2)
                fail(path + "/" + key, "expected an array of two numbers");
            a = s[key][0].get<double>();
            b = s[key][1].get<double>();
        };
        double q1 = 0, q2 = 0, p1 = 0, p2 = 0, g1 = 1, g2 = 1;
        read_vec2("q0", q1, q2, true);
        read_vec2("p0", p1, p2, false);
        read_vec2("gamma", g1, g2, false);
        if (!(g1 > 0) || !(g2 > 0))
            fail(path + "/gamma", "width parameters must be positive");
        c.state.packet1 = {q1, p1, g1};
        c.state.packet2 = {q2, p2, g2};
        const std::string sym = get_string(s, path, "symmetry", "symmetric");
        if (sym == "symmetric") c.state.symmetry = hk::Symmetry::symmetric;
        else if (sym == "antisymmetric") c.state.symmetry = hk::Symmetry::antisymmetric;
        else fail(path + "/symmetry", "expected symmetric or antisymmetric");
    }

    if (j.contains("sampler")) {
        const json& s = j["sampler"];
        const std::string path = "/sampler";
        c.sampler.n_traj = static_cast<std::size_t>(get_number(s, path, "n_traj", 10000));
        if (c.sampler.n_traj == 0)
            fail(path + "/n_traj", "must be positive");
        c.full_n_traj = static_cast<std::size_t>(get_number(s, path, "full_n_traj", 0));
        if (s.contains("energy_window")) {
            if (!s["energy_window"].is_array() || s["energy_window"].size() != 2)
                fail(path + "/energy_window", "expected [E_min, E_max]");
            const double lo = s["energy_window"][0].get<double>();
            const double hi = s["energy_window"][1].get<double>();
            if (!(lo < hi))
                fail(path + "/energy_window", "E_min must be below E_max");
            if (hi > 0)
                fail(path + "/energy_window", "E_max must be <= 0");
            c.sampler.energy_window = {{lo, hi}};
        }
        c.sampler.seed = static_cast<std::uint64_t>(get_number(s, path, "seed", 1));
        const std::string policy = get_string(s, path, "prefactor_policy", "exact");
        if (policy == "exact") c.sampler.prefactor_policy = hk::PrefactorPolicy::exact;
        else if (policy == "modulus_sqrt") c.sampler.prefactor_policy = hk::PrefactorPolicy::modulus_sqrt;
        else fail(path + "/prefactor_policy", "expected exact or modulus_sqrt");
        c.sampler.discard_threshold = get_number(s, path, "discard_threshold", 1e20);
        c.sampler.min_surviving =
            static_cast<std::size_t>(get_number(s, path, "min_surviving", 100));
    }

    if (j.contains("time_grid")) {
        const json& s = j["time_grid"];
        const std::string path = "/time_grid";
        c.grid.dt = get_number(s, path, "dt", 0.5, true);
        c.grid.n = static_cast<std::size_t>(get_number(s, path, "n_samples", 401, true));
        if (!(c.grid.dt > 0) || c.grid.n < 2)
            fail(path, "need dt > 0 and n_samples >= 2");
    }

    if (j.contains("integrator")) {
        const json& s = j["integrator"];
        const std::string path = "/integrator";
        c.integrator.rel_tol = get_number(s, path, "rel_tol", 1e-10);
        c.integrator.abs_tol = get_number(s, path, "abs_tol", 1e-12);
        c.integrator.max_step = get_number(s, path, "max_step", 0);
    }

    if (j.contains("guards")) {
        const json& s = j["guards"];
        const std::string path = "/guards";
        c.guards.ionization_cutoff = get_number(s, path, "ionization_cutoff", 0);
        c.guards.triple_eps = get_number(s, path, "triple_eps", 1e-6);
    }

    if (j.contains("inversion")) {
        const json& s = j["inversion"];
        const std::string path = "/inversion";
        c.inversion.e_lo = get_number(s, path, "e_lo", -1.0, true);
        c.inversion.e_hi = get_number(s, path, "e_hi", 0.0, true);
        if (!(c.inversion.e_lo < c.inversion.e_hi))
            fail(path, "e_lo must be below e_hi");
        c.inversion.basis_size = static_cast<std::size_t>(get_number(s, path, "basis_size", 50));
        c.inversion.window_width = get_number(s, path, "window_width", 0);
        c.inversion.n0 = static_cast<std::size_t>(get_number(s, path, "n0", 0));
        c.inversion.n1 = static_cast<std::size_t>(get_number(s, path, "n1", 0));
        c.inversion.min_amplitude = get_number(s, path, "min_amplitude", 1e-4);
        c.inversion.min_stability = get_number(s, path, "min_stability", 0.2);
        c.inversion_options.positive_im_slack =
            get_number(s, path, "positive_im_slack", c.inversion_options.positive_im_slack);
        c.inversion_options.condition_cutoff =
            get_number(s, path, "condition_cutoff", c.inversion_options.condition_cutoff);
    }

    if (j.contains("qm")) {
        const json& s = j["qm"];
        const std::string path = "/qm";
        if (!s.contains("jobs") || !s["jobs"].is_array())
            fail(path + "/jobs", "expected an array of {family, N, n}");
        for (std::size_t i = 0; i < s["jobs"].size(); ++i) {
            const json& job = s["jobs"][i];
            const std::string jp = path + "/jobs/" + std::to_string(i);
            QmJob q;
            q.family = family_from_name(get_string(job, jp, "family", "", true));
            q.N = static_cast<int>(get_number(job, jp, "N", 0, true));
            q.n = static_cast<int>(get_number(job, jp, "n", 0, true));
            if (q.N < 1 || q.n < q.N)
                fail(jp, "quantum labels require n >= N >= 1");
            q.reference = get_number(job, jp, "reference", 0);
            c.qm_jobs.push_back(q);
        }
        c.level_controls.convergence_tol =
            get_number(s, path, "convergence_tol", c.level_controls.convergence_tol);
        c.level_controls.cutoff = get_number(s, path, "overlap_cutoff", c.level_controls.cutoff);
        c.level_controls.theta = get_number(s, path, "theta", 0);
        c.level_controls.a_mod = get_number(s, path, "a_mod", 0);
        c.level_controls.max_basis_functions = static_cast<int>(
            get_number(s, path, "max_basis_functions", c.level_controls.max_basis_functions));
    }

    if (j.contains("trajectory_start")) {
        const json& s = j["trajectory_start"];
        if (!s.is_array() || s.size() != 4)
            fail("/trajectory_start", "expected [q1, q2, p1, p2]");
        c.start = {s[0].get<double>(), s[1].get<double>(), s[2].get<double>(), s[3].get<double>()};
    }

    c.compare_tolerance = get_number(j, "", "compare_tolerance", 0.01);
    c.output_dir = get_string(j, "", "output_dir", ".");
    c.workers = static_cast<unsigned>(get_number(j, "", "workers", 0));
    c.preset_name = get_string(j, "", "preset_name", "");
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    json j;
    j["mode"] = mode_name(c.mode);
    j["configuration"] = c.configuration.variant == dyn::Variant::eZe ? "eZe" : "Zee";
    j["initial_state"] = {
        {"q0", {c.state.packet1.q0, c.state.packet2.q0}},
        {"p0", {c.state.packet1.p0, c.state.packet2.p0}},
        {"gamma", {c.state.packet1.gamma, c.state.packet2.gamma}},
        {"symmetry", c.state.symmetry == hk::Symmetry::symmetric ? "symmetric" : "antisymmetric"},
    };
    j["sampler"] = {
        {"n_traj", c.sampler.n_traj},
        {"seed", c.sampler.seed},
        {"prefactor_policy",
         c.sampler.prefactor_policy == hk::PrefactorPolicy::exact ? "exact" : "modulus_sqrt"},
        {"discard_threshold", c.sampler.discard_threshold},
        {"min_surviving", c.sampler.min_surviving},
    };
    if (c.full_n_traj > 0)
        j["sampler"]["full_n_traj"] = c.full_n_traj;
    if (c.sampler.energy_window)
        j["sampler"]["energy_window"] = {c.sampler.energy_window->first,
                                         c.sampler.energy_window->second};
    j["time_grid"] = {{"dt", c.grid.dt}, {"n_samples", c.grid.n}};
    j["integrator"] = {{"rel_tol", c.integrator.rel_tol},
                       {"abs_tol", c.integrator.abs_tol},
                       {"max_step", c.integrator.max_step}};
    j["guards"] = {{"ionization_cutoff", c.guards.ionization_cutoff},
                   {"triple_eps", c.guards.triple_eps}};
    j["inversion"] = {
        {"e_lo", c.inversion.e_lo},           {"e_hi", c.inversion.e_hi},
        {"basis_size", c.inversion.basis_size}, {"window_width", c.inversion.window_width},
        {"n0", c.inversion.n0},               {"n1", c.inversion.n1},
        {"min_amplitude", c.inversion.min_amplitude},
        {"min_stability", c.inversion.min_stability},
    };
    if (!c.qm_jobs.empty()) {
        json jobs = json::array();
        for (const auto& q : c.qm_jobs) {
            json job = {{"family", family_name(q.family)}, {"N", q.N}, {"n", q.n}};
            if (q.reference != 0)
                job["reference"] = q.reference;
            jobs.push_back(job);
        }
        j["qm"] = {{"jobs", jobs},
                   {"convergence_tol", c.level_controls.convergence_tol},
                   {"overlap_cutoff", c.level_controls.cutoff},
                   {"theta", c.level_controls.theta},
                   {"a_mod", c.level_controls.a_mod},
                   {"max_basis_functions", c.level_controls.max_basis_functions}};
    }
    j["trajectory_start"] = {c.start.q1, c.start.q2, c.start.p1, c.start.p2};
    j["compare_tolerance"] = c.compare_tolerance;
    j["output_dir"] = c.output_dir;
    j["workers"] = c.workers;
    if (!c.preset_name.empty())
        j["preset_name"] = c.preset_name;
    return j;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

ExperimentConfig load_preset(const std::string& name, const std::string& dir) {
    std::vector<std::string> candidates;
    if (!dir.empty())
        candidates.push_back(dir + "/" + name + ".json");
    if (const char* env = std::getenv("COLHEL_PRESET_DIR"))
        candidates.push_back(std::string(env) + "/" + name + ".json");
    const std::string builtin = COLHEL_PRESET_DIR;
    if (!builtin.empty())
        candidates.push_back(builtin + "/" + name + ".json");
    for (const auto& path : candidates) {
        std::ifstream probe(path);
        if (probe) {
            auto config = load_config_file(path);
            config.preset_name = name;
            return config;
        }
    }
    throw std::runtime_error("preset '" + name + "' not found (searched " +
                             std::to_string(candidates.size()) + " locations)");
}

} // namespace colhel::cli
