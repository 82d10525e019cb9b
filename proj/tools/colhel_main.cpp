#include "cli/compare.hpp"
#include "cli/config.hpp"
#include "cli/run.hpp"

#include <CLI11.hpp>

#include <cstdio>

using namespace colhel;

namespace {

struct CommonOptions {
    std::string preset;
    std::string config_file;
    std::string preset_dir;
    std::string output_dir;
    unsigned workers = 0;
    bool full = false;
    bool resume = false;
    long long n_traj = 0;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool sampling) {
    cmd->add_option("--preset", opt.preset, "preset name (fig1, fig2, fig3, table1, table2)");
    cmd->add_option("--config-file", opt.config_file, "JSON experiment configuration");
    cmd->add_option("--preset-dir", opt.preset_dir, "directory containing preset files");
    cmd->add_option("--out", opt.output_dir, "output directory (overrides config)");
    cmd->add_option("--workers", opt.workers, "worker threads (0 = all cores)");
    if (sampling) {
        cmd->add_option("--n-traj", opt.n_traj, "override trajectory count");
        cmd->add_option("--seed", opt.seed, "override RNG seed");
        cmd->add_flag("--full", opt.full, "use the full paper-scale trajectory count (long-running)");
        cmd->add_flag("--resume", opt.resume, "resume from an existing checkpoint");
    }
}

cli::ExperimentConfig resolve_config(const CommonOptions& opt, cli::Mode mode) {
    cli::ExperimentConfig config;
    if (!opt.config_file.empty())
        config = cli::load_config_file(opt.config_file);
    else if (!opt.preset.empty())
        config = cli::load_preset(opt.preset, opt.preset_dir);
    else
        throw std::invalid_argument("provide --preset or --config-file");
    config.mode = mode;
    if (!opt.output_dir.empty())
        config.output_dir = opt.output_dir;
    if (opt.workers > 0)
        config.workers = opt.workers;
    if (opt.n_traj > 0)
        config.sampler.n_traj = static_cast<std::size_t>(opt.n_traj);
    if (opt.full) {
        if (config.full_n_traj == 0)
            throw std::invalid_argument("this preset defines no full-scale trajectory count");
        config.sampler.n_traj = config.full_n_traj;
    }
    if (opt.seed >= 0)
        config.sampler.seed = static_cast<std::uint64_t>(opt.seed);
    return config;
}

void print_report(const cli::ExperimentConfig& config, const cli::RunResult& result) {
    std::printf("run complete; manifest: %s\n", result.manifest_path.c_str());
    if (config.mode == cli::Mode::reproduce)
        std::printf("comparison %s\n", result.exit_code == 0 ? "PASSED" : "FAILED");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiclassical spectroscopy of collinear helium"};
    app.require_subcommand(1);

    CommonOptions opt;

    auto* trajectory = app.add_subcommand("trajectory", "integrate one trajectory and dump it");
    std::vector<double> q{2.0, 2.4}, p{0.0, -0.1};
    std::string variant = "eZe";
    double t_max = 5.0, dt = 0.05;
    trajectory->add_option("--q", q, "initial coordinates q1,q2")->expected(2)->delimiter(',');
    trajectory->add_option("--p", p, "initial momenta p1,p2")->expected(2)->delimiter(',');
    trajectory->add_option("--config", variant, "eZe or Zee");
    trajectory->add_option("--t-max", t_max, "final time (a.u.)");
    trajectory->add_option("--dt", dt, "output spacing (a.u.)");
    trajectory->add_option("--out", opt.output_dir, "output directory");

    auto* autocorr = app.add_subcommand("autocorr", "Monte Carlo autocorrelation function");
    add_common(autocorr, opt, true);
    auto* spectrum = app.add_subcommand("spectrum", "spectrum and line extraction from a signal");
    add_common(spectrum, opt, false);
    auto* qm_cmd = app.add_subcommand("qm", "complex-rotation quantum reference energies");
    add_common(qm_cmd, opt, false);
    std::string family_opt;
    std::string levels_opt;
    qm_cmd->add_option("--family", family_opt, "eZe_symmetric|eZe_antisymmetric|Zee_singlet");
    qm_cmd->add_option("--levels", levels_opt, "comma list of N:n labels, e.g. 1:1,2:2");
    auto* reproduce = app.add_subcommand("reproduce", "full pipeline with quantum comparison");
    add_common(reproduce, opt, true);
    auto* compare = app.add_subcommand("compare", "compare two binding-energy tables");
    std::string computed_path, reference_path, report_path = "compare.csv";
    double tolerance = 0.01;
    compare->add_option("--computed", computed_path)->required();
    compare->add_option("--reference", reference_path)->required();
    compare->add_option("--tolerance", tolerance, "relative tolerance (default 1%)");
    compare->add_option("--report", report_path, "report CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (trajectory->parsed()) {
            cli::ExperimentConfig config;
            config.mode = cli::Mode::trajectory;
            config.configuration.variant =
                variant == "Zee" ? dyn::Variant::Zee : dyn::Variant::eZe;
            config.start = {q[0], q[1], p[0], p[1]};
            config.grid.dt = dt;
            config.grid.n = static_cast<std::size_t>(t_max / dt) + 1;
            config.output_dir = opt.output_dir.empty() ? "." : opt.output_dir;
            auto result = cli::run(config);
            print_report(config, result);
            return result.exit_code;
        }
        if (autocorr->parsed()) {
            auto config = resolve_config(opt, cli::Mode::autocorr);
            auto result = cli::run(config, opt.resume);
            print_report(config, result);
            return result.exit_code;
        }
        if (spectrum->parsed()) {
            auto config = resolve_config(opt, cli::Mode::spectrum);
            auto result = cli::run(config);
            print_report(config, result);
            return result.exit_code;
        }
        if (qm_cmd->parsed()) {
            cli::ExperimentConfig config;
            if (!opt.preset.empty() || !opt.config_file.empty()) {
                config = resolve_config(opt, cli::Mode::qm);
            } else {
                config.mode = cli::Mode::qm;
                if (family_opt.empty() || levels_opt.empty())
                    throw std::invalid_argument("qm needs --preset, --config-file, or --family with --levels");
                const auto family = cli::family_from_name(family_opt);
                std::stringstream ss(levels_opt);
                std::string token;
                while (std::getline(ss, token, ',')) {
                    const auto colon = token.find(':');
                    if (colon == std::string::npos)
                        throw std::invalid_argument("levels must be N:n pairs, got '" + token + "'");
                    cli::QmJob job;
                    job.family = family;
                    job.N = std::stoi(token.substr(0, colon));
                    job.n = std::stoi(token.substr(colon + 1));
                    config.qm_jobs.push_back(job);
                }
                config.output_dir = opt.output_dir.empty() ? "." : opt.output_dir;
                config.workers = opt.workers;
            }
            auto result = cli::run(config);
            print_report(config, result);
            return result.exit_code;
        }
        if (reproduce->parsed()) {
            auto config = resolve_config(opt, cli::Mode::reproduce);
            auto result = cli::run(config, opt.resume);
            print_report(config, result);
            return result.exit_code;
        }
        if (compare->parsed()) {
            auto computed = cli::read_energy_table(computed_path);
            auto reference = cli::read_energy_table(reference_path);
            auto report = cli::compare_tables(computed, reference, tolerance);
            cli::write_compare_report(report_path, report);
            for (const auto& row : report.rows)
                std::printf("%s %d_%d: sc=%.5f qm=%.5f rel=%.3f%% %s\n", row.key.family.c_str(),
                            row.key.N, row.key.n, row.computed, row.reference, 100.0 * row.rel_dev,
                            row.pass ? "pass" : "FAIL");
            for (const auto& key : report.missing_in_computed)
                std::printf("%s %d_%d: missing in computed table\n", key.family.c_str(), key.N,
                            key.n);
            return report.all_pass ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
