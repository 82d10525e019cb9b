// Acceptance gate: one pass/fail line per criterion, exit 0 only if every
// required criterion passes. Heavy semiclassical runs use the shipped presets
// at their documented trajectory counts with fixed seeds.

#include "cli/config.hpp"
#include "cli/run.hpp"
#include "dynamics/dop853.hpp"
#include "qm/levels.hpp"
#include "spectral/lines.hpp"

#include "../support/harmonic.hpp"
#include "../support/quadrature.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace colhel;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%-58s %s  %s\n", name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

void report_skip(const std::string& name, const std::string& why) {
    std::printf("%-58s SKIP  %s\n", name.c_str(), why.c_str());
}

struct LevelCheck {
    int N, n;
    double reference;
};

// ---------------------------------------------------------------- criteria 1-3

void quantum_tables(unsigned workers) {
    const std::vector<LevelCheck> singlet = {{1, 1, 3.2459}, {2, 2, 0.8224}, {3, 3, 0.3662},
                                             {4, 4, 0.2061}, {5, 5, 0.1320}, {6, 6, 0.09204}};
    const std::vector<LevelCheck> triplet = {{1, 2, 2.2254}, {2, 3, 0.6184}, {3, 4, 0.2935}};
    const std::vector<LevelCheck> zee = {{1, 1, 2.1084},  {1, 2, 2.0504},  {2, 2, 0.5394},
                                         {2, 3, 0.5240},  {3, 3, 0.2420},  {3, 4, 0.2360},
                                         {4, 4, 0.1368},  {4, 5, 0.1339},  {5, 5, 0.08783},
                                         {5, 6, 0.08618}};

    auto run_family = [&](const std::vector<LevelCheck>& checks, qm::Family family,
                          double* max_dev, int* max_basis) {
        *max_dev = 0;
        *max_basis = 0;
        std::vector<double> devs(checks.size(), 1e9);
        std::vector<int> bases(checks.size(), 0);
        parallel_chunks(checks.size(), workers, [&](std::size_t i) {
            auto level = qm::converged_level(checks[i].N, checks[i].n, family);
            devs[i] = std::abs(level.binding_energy - checks[i].reference);
            bases[i] = level.basis_functions;
        });
        for (std::size_t i = 0; i < checks.size(); ++i) {
            *max_dev = std::max(*max_dev, devs[i]);
            *max_basis = std::max(*max_basis, bases[i]);
        }
    };

    double dev;
    int basis;
    char buf[128];
    run_family(singlet, qm::Family::eZe_symmetric, &dev, &basis);
    std::snprintf(buf, sizeof(buf), "max |dev| = %.2e (tol 1e-3), max basis %d (<= 600)", dev, basis);
    report("criterion 1: eZe singlet 1_1..6_6 vs QM table", dev <= 1e-3 && basis <= 600, buf);

    run_family(triplet, qm::Family::eZe_antisymmetric, &dev, &basis);
    std::snprintf(buf, sizeof(buf), "max |dev| = %.2e (tol 1e-3)", dev);
    report("criterion 2: eZe triplet 1_2, 2_3, 3_4 vs QM table", dev <= 1e-3, buf);

    run_family(zee, qm::Family::Zee_singlet, &dev, &basis);
    std::snprintf(buf, sizeof(buf), "max |dev| = %.2e over all ten levels (tol 1e-3)", dev);
    report("criterion 3: Zee singlet, all ten QM table values", dev <= 1e-3, buf);
}

// ---------------------------------------------------------------- criteria 4-5

struct LineMatch {
    double binding = 0;
    double rel_dev = 1e9;
};

LineMatch nearest_line(const std::vector<spectral::SpectralLine>& lines, double reference) {
    LineMatch match;
    for (const auto& line : lines) {
        const double b = -line.energy.real();
        if (std::abs(b - reference) < std::abs(match.binding - reference) || match.rel_dev > 1e8) {
            match.binding = b;
            match.rel_dev = std::abs(b - reference) / reference;
        }
    }
    return match;
}

std::vector<spectral::SpectralLine> preset_lines(const std::string& preset, unsigned workers,
                                                 const std::string& out_dir, std::size_t n_traj,
                                                 hk::TrajectoryCounts* counts,
                                                 double* wall_seconds) {
    auto config = cli::load_preset(preset);
    config.output_dir = out_dir;
    config.workers = workers;
    if (n_traj > 0)
        config.sampler.n_traj = n_traj;
    std::filesystem::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    auto signal = cli::run_autocorrelation(config, false, "");
    if (counts)
        *counts = signal.counts;
    if (wall_seconds)
        *wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    cli::write_autocorr_csv(out_dir + "/autocorr.csv", signal);
    auto lines = spectral::extract_lines(signal.samples, signal.dt, config.inversion,
                                         config.inversion_options);
    cli::write_lines_csv(out_dir + "/lines.csv", lines);
    return lines;
}

void semiclassical_zee(unsigned workers) {
    hk::TrajectoryCounts counts;
    double wall = 0;
    auto lines = preset_lines("fig3", workers, "acceptance_out/fig3", 0, &counts, &wall);
    const auto m33 = nearest_line(lines, 0.2420);
    const auto m34 = nearest_line(lines, 0.2360);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "3_3 = %.5f (%.2f%%), 3_4 = %.5f (%.2f%%) of QM 0.2420/0.2360; %.0fs, %llu traj",
                  m33.binding, 100 * m33.rel_dev, m34.binding, 100 * m34.rel_dev, wall,
                  static_cast<unsigned long long>(counts.accepted));
    const bool pass = m33.rel_dev <= 0.01 && m34.rel_dev <= 0.01 && counts.discarded == 0;
    report("criterion 4: Zee fig3 preset, 1.2e5 trajectories, 1%", pass, buf);
}

void semiclassical_eze(unsigned workers) {
    hk::TrajectoryCounts counts;
    double wall = 0;
    auto lines = preset_lines("fig2", workers, "acceptance_out/fig2", 0, &counts, &wall);
    const auto m55 = nearest_line(lines, 0.1320);
    const auto m56 = nearest_line(lines, 0.1117);
    const auto m66 = nearest_line(lines, 0.09204);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "5_5 = %.5f (%.2f%%), 5_6 = %.5f (%.2f%%), 6_6 = %.5f (%.2f%%); %.0fs",
                  m55.binding, 100 * m55.rel_dev, m56.binding, 100 * m56.rel_dev, m66.binding,
                  100 * m66.rel_dev, wall);
    const bool pass = m55.rel_dev <= 0.015 && m56.rel_dev <= 0.015 && m66.rel_dev <= 0.015;
    report("criterion 5: eZe fig2 preset, 3.6e5 trajectories, 1.5%", pass, buf);

    const char* fig1_env = std::getenv("COLHEL_ACCEPT_FIG1");
    if (!fig1_env || std::strcmp(fig1_env, "off") == 0) {
        report_skip("criterion 5b: fig1 ground state (optional, long-running)",
                    "set COLHEL_ACCEPT_FIG1=desk or =full to run");
        return;
    }
    const bool full = std::strcmp(fig1_env, "full") == 0;
    auto config = cli::load_preset("fig1");
    const std::size_t n = full ? config.full_n_traj : config.sampler.n_traj;
    auto lines1 = preset_lines("fig1", workers, "acceptance_out/fig1", n, &counts, &wall);
    const auto g = nearest_line(lines1, 3.2459);
    char buf1[160];
    std::snprintf(buf1, sizeof(buf1), "1_1 = %.4f (%.2f%% of 3.2459) at %llu traj; %.0fs",
                  g.binding, 100 * g.rel_dev, static_cast<unsigned long long>(counts.accepted),
                  wall);
    report("criterion 5b: fig1 ground state within 2% (optional)", g.rel_dev <= 0.02, buf1);
}

// ---------------------------------------------------------------- criterion 6

void property_suite(unsigned workers) {
    // 6a/6b: conserved quantity and symplecticity of the regularized flow
    {
        dyn::Configuration eze{dyn::Variant::eZe};
        const dyn::PhasePoint start{1.4, 2.2, 0.3, -0.1};
        auto y0 = dyn::initial_reg_state(dyn::regularize(dyn::scale(
            start, dyn::hamiltonian_energy(start, eze))));
        struct Rhs {
            dyn::Configuration config;
            void operator()(const double* y, double* dy) const {
                dyn::regularized_rhs_raw(y, dy, config);
            }
        } rhs{eze};
        dyn::Dop853Options opt;
        opt.rel_tol = 1e-12;
        opt.abs_tol = 1e-14;
        dyn::Dop853<Rhs> stepper(rhs, dyn::kRegStateDim, opt);
        stepper.init(y0.data(), 0.0);
        Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
        J.block<2, 2>(0, 2).setIdentity();
        J.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
        double max_h = 0, max_symp = 0;
        while (stepper.tau() < 12.0) {
            if (stepper.step() == 0)
                break;
            const double* y = stepper.y();
            max_h = std::max(max_h, std::abs(dyn::regularized_hamiltonian(y, eze)));
            Eigen::Matrix4d m;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    m(i, j) = y[6 + 4 * i + j];
            max_symp = std::max(max_symp, (m.transpose() * J * m - J).norm());
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "max |Hreg| = %.1e (tol 1e-8)", max_h);
        report("criterion 6a: regularized energy conservation", max_h <= 1e-8, buf);
        std::snprintf(buf, sizeof(buf), "max |M^T J M - J| = %.1e (tol 1e-6)", max_symp);
        report("criterion 6b: regularized monodromy symplecticity", max_symp <= 1e-6, buf);
    }

    // 6c: physical monodromy against finite differences
    {
        dyn::Configuration eze{dyn::Variant::eZe};
        const dyn::PhasePoint start{1.3, 2.1, 0.4, -0.3};
        const double t = 0.25;
        dyn::TimeGrid grid{t, 2};
        auto rec = dyn::advance_to_physical_times(start, eze, grid);
        struct PhysRhs {
            dyn::Configuration config;
            void operator()(const double* y, double* dy) const {
                const dyn::PhasePoint pt{y[0], y[1], y[2], y[3]};
                const auto g = dyn::hamiltonian_gradient(pt, config);
                dy[0] = g[2];
                dy[1] = g[3];
                dy[2] = -g[0];
                dy[3] = -g[1];
            }
        } rhs{eze};
        auto integrate = [&](dyn::PhasePoint p0) {
            dyn::Dop853Options opt;
            opt.rel_tol = 1e-12;
            opt.abs_tol = 1e-14;
            dyn::Dop853<PhysRhs> stepper(rhs, 4, opt);
            double y[4] = {p0.q1, p0.q2, p0.p1, p0.p2};
            stepper.init(y, 0.0);
            while (stepper.tau() < t)
                stepper.step();
            double out[4];
            stepper.dense_eval(t, out);
            return dyn::PhasePoint{out[0], out[1], out[2], out[3]};
        };
        double max_rel = 0;
        const double base[4] = {start.q1, start.q2, start.p1, start.p2};
        for (int j = 0; j < 4; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(base[j]));
            double plus[4], minus[4];
            for (int i = 0; i < 4; ++i)
                plus[i] = minus[i] = base[i];
            plus[j] += h;
            minus[j] -= h;
            const auto zp = integrate({plus[0], plus[1], plus[2], plus[3]});
            const auto zm = integrate({minus[0], minus[1], minus[2], minus[3]});
            const double fd[4] = {(zp.q1 - zm.q1) / (2 * h), (zp.q2 - zm.q2) / (2 * h),
                                  (zp.p1 - zm.p1) / (2 * h), (zp.p2 - zm.p2) / (2 * h)};
            for (int i = 0; i < 4; ++i)
                max_rel = std::max(max_rel, std::abs(rec.monodromies[1](i, j) - fd[i]) /
                                                std::max(1.0, std::abs(fd[i])));
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "max rel dev = %.1e (tol 1e-4)", max_rel);
        report("criterion 6c: physical monodromy vs finite differences", max_rel <= 1e-4, buf);
    }

    // 6d/6e: c(0) = 1 and HK exactness on the injected harmonic Hamiltonian
    {
        const double w = 1.1;
        oracle::HarmonicEngine engine(w, w);
        hk::InitialStateSpec spec;
        spec.packet1 = {1.4, 0.3, w};
        spec.packet2 = {-0.6, -0.2, w};
        hk::SamplerConfig sampler;
        sampler.n_traj = 3000000;
        sampler.seed = 17;
        sampler.discard_threshold = 0;
        sampler.min_surviving = 1;
        dyn::TimeGrid grid{0.25, 33};
        auto sig = hk::autocorrelation(spec, sampler, grid, engine, workers);
        auto exact = oracle::harmonic_autocorrelation_exact(spec, w, w, grid);
        const double dev0 = std::abs(sig.samples[0] - hk::Complex(1, 0));
        char buf[120];
        std::snprintf(buf, sizeof(buf), "|c(0) - 1| = %.2e vs 3*stderr = %.2e", dev0,
                      3 * sig.std_error[0]);
        report("criterion 6d: c(0) = 1 within 3 stderr", dev0 <= 3 * sig.std_error[0], buf);
        double max_err = 0;
        for (std::size_t k = 0; k < grid.n; ++k)
            max_err = std::max(max_err, std::abs(sig.samples[k] - exact[k]));
        std::snprintf(buf, sizeof(buf), "max |c_HK - c_exact| = %.2e (tol 1e-3)", max_err);
        report("criterion 6e: HK exact on quadratic Hamiltonian", max_err <= 1e-3, buf);
    }

    // 6f: noiseless multi-mode harmonic inversion
    {
        std::mt19937 gen(5);
        std::uniform_real_distribution<double> gap(0.12, 0.3), amp(0.3, 1.3), ph(-0.5, 0.5);
        double worst = 0;
        for (int trial = 0; trial < 5; ++trial) {
            const std::size_t n_modes = 4 + trial; // 4..8
            std::vector<spectral::Complex> es, ds;
            double e = -2.0;
            for (std::size_t k = 0; k < n_modes; ++k) {
                e += gap(gen);
                es.emplace_back(e, 0.0);
                ds.emplace_back(amp(gen), ph(gen));
            }
            const double dt = 0.4;
            const std::size_t n = 320;
            std::vector<spectral::Complex> c(n, {0, 0});
            for (std::size_t k = 0; k < es.size(); ++k)
                for (std::size_t i = 0; i < n; ++i)
                    c[i] += ds[k] * std::exp(spectral::Complex(0, -1) * es[k] * (dt * double(i)));
            spectral::InversionWindow w;
            w.e_lo = -2.2;
            w.e_hi = e + 0.3;
            w.basis_size = 60;
            auto lines = spectral::line_filtering(spectral::harmonic_inversion(c, dt, w), 1e-6, 0.5);
            if (lines.size() != n_modes) {
                worst = 1.0;
                break;
            }
            for (std::size_t k = 0; k < n_modes; ++k)
                worst = std::max(worst, std::abs(lines[k].energy.real() - es[k].real()));
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "max |dE| = %.1e over 4..8 modes (tol 1e-10)", worst);
        report("criterion 6f: harmonic inversion exact on noiseless signals", worst <= 1e-10, buf);
    }

    // 6g: every matrix-element class against adaptive quadrature
    {
        const double a = 0.9;
        double worst = 0;
        auto slater = [](int n, double aa, double r) {
            return std::pow(aa * r, n) * std::exp(-aa * r);
        };
        auto dslater = [](int n, double aa, double r) {
            return aa * (n * std::pow(aa * r, n - 1) - std::pow(aa * r, n)) * std::exp(-aa * r);
        };
        for (int fam = 0; fam < 3; ++fam) {
            const auto family = fam == 0   ? qm::Family::eZe_symmetric
                                : fam == 1 ? qm::Family::eZe_antisymmetric
                                           : qm::Family::Zee_singlet;
            const auto tables = qm::build_tables(family, 8);
            const double sign = family == qm::Family::eZe_antisymmetric ? -1.0 : 1.0;
            const bool zee = family == qm::Family::Zee_singlet;
            const std::vector<std::array<int, 4>> combos =
                fam == 1 ? std::vector<std::array<int, 4>>{{1, 2, 1, 2}, {2, 5, 1, 4}, {3, 8, 4, 7}}
                         : std::vector<std::array<int, 4>>{{1, 1, 1, 1}, {2, 3, 1, 4}, {5, 8, 4, 7}};
            for (const auto& combo : combos) {
                std::size_t mu = 0, nu = 0;
                for (std::size_t i = 0; i < tables.pairs.size(); ++i) {
                    if (tables.pairs[i] == std::make_pair(combo[0], combo[1]))
                        mu = i;
                    if (tables.pairs[i] == std::make_pair(combo[2], combo[3]))
                        nu = i;
                }
                auto value = [&](int n, int m, double lognorm, double r1, double r2) {
                    double v = slater(n, a, r1) * slater(m, a, r2);
                    if (!zee)
                        v += sign * slater(m, a, r1) * slater(n, a, r2);
                    return std::exp(-0.5 * lognorm) * a * v;
                };
                auto d1 = [&](int n, int m, double lognorm, double r1, double r2) {
                    double v = dslater(n, a, r1) * slater(m, a, r2);
                    if (!zee)
                        v += sign * dslater(m, a, r1) * slater(n, a, r2);
                    return std::exp(-0.5 * lognorm) * a * v;
                };
                auto d2 = [&](int n, int m, double lognorm, double r1, double r2) {
                    double v = slater(n, a, r1) * dslater(m, a, r2);
                    if (!zee)
                        v += sign * slater(m, a, r1) * dslater(n, a, r2);
                    return std::exp(-0.5 * lognorm) * a * v;
                };
                const double lmu = tables.log_norm[mu], lnu = tables.log_norm[nu];
                const int bn = combo[0], bm = combo[1], kn = combo[2], km = combo[3];
                const double s_quad = oracle::integrate_quadrant([&](double r1, double r2) {
                    return value(bn, bm, lmu, r1, r2) * value(kn, km, lnu, r1, r2);
                });
                worst = std::max(worst, std::abs(s_quad - tables.S(mu, nu)) /
                                            std::max(1e-3, std::abs(s_quad)));
                const double t_quad = oracle::integrate_quadrant([&](double r1, double r2) {
                    if (zee)
                        return 0.5 * d1(bn, bm, lmu, r1, r2) * d1(kn, km, lnu, r1, r2) +
                               d2(bn, bm, lmu, r1, r2) * d2(kn, km, lnu, r1, r2) -
                               0.5 * (d1(bn, bm, lmu, r1, r2) * d2(kn, km, lnu, r1, r2) +
                                      d2(bn, bm, lmu, r1, r2) * d1(kn, km, lnu, r1, r2));
                    return 0.5 * (d1(bn, bm, lmu, r1, r2) * d1(kn, km, lnu, r1, r2) +
                                  d2(bn, bm, lmu, r1, r2) * d2(kn, km, lnu, r1, r2));
                });
                worst = std::max(worst, std::abs(t_quad - a * a * tables.T(mu, nu)) /
                                            std::max(1e-3, std::abs(t_quad)));
                const double v_quad = oracle::integrate_quadrant([&](double r1, double r2) {
                    const double pot = zee ? -2.0 / r1 - 2.0 / (r1 + r2) + 1.0 / r2
                                           : -2.0 / r1 - 2.0 / r2 + 1.0 / (r1 + r2);
                    return value(bn, bm, lmu, r1, r2) * pot * value(kn, km, lnu, r1, r2);
                });
                worst = std::max(worst, std::abs(v_quad - a * tables.V(mu, nu)) /
                                            std::max(1e-3, std::abs(v_quad)));
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "max rel dev = %.1e over all classes (tol 1e-9)", worst);
        report("criterion 6g: matrix elements vs 2-D quadrature", worst <= 1e-9, buf);
    }
}

// ---------------------------------------------------------------- criterion 7

void reproducibility() {
    auto config = cli::load_preset("fig3");
    config.sampler.n_traj = 2500;
    config.grid.n = 201;
    config.mode = cli::Mode::autocorr;

    auto read_file = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    config.output_dir = "acceptance_out/repro_w1";
    config.workers = 1;
    cli::run(config);
    config.output_dir = "acceptance_out/repro_w2";
    config.workers = 2;
    cli::run(config);
    const bool same = read_file("acceptance_out/repro_w1/autocorr.csv") ==
                      read_file("acceptance_out/repro_w2/autocorr.csv");
    report("criterion 7: byte-identical output across worker counts", same,
           same ? "1 worker == 2 workers" : "outputs differ");
}

} // namespace

int main(int argc, char** argv) {
    unsigned workers = 0;
    bool quick = false; // skip the heavy semiclassical runs (development aid)
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc)
            workers = static_cast<unsigned>(std::atoi(argv[++i]));
        else if (std::strcmp(argv[i], "--quick") == 0)
            quick = true;
    }

    std::printf("acceptance suite (workers = %u)\n", resolve_workers(workers));
    quantum_tables(workers);
    if (quick) {
        report_skip("criterion 4: Zee fig3 preset", "--quick");
        report_skip("criterion 5: eZe fig2 preset", "--quick");
    } else {
        semiclassical_zee(workers);
        semiclassical_eze(workers);
    }
    property_suite(workers);
    reproducibility();

    std::printf("%s (%d failure%s)\n", failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                failures, failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
}
