#include "cli/compare.hpp"
#include "cli/config.hpp"
#include "cli/run.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace colhel;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing reports field paths") {
    using nlohmann::json;

    json bad1 = {{"mode", "warp"}};
    CHECK_THROWS_WITH_AS(cli::parse_config(bad1), doctest::Contains("/mode"),
                         std::invalid_argument);

    json bad2 = {{"initial_state", {{"q0", {1.0}}}}};
    CHECK_THROWS_WITH_AS(cli::parse_config(bad2), doctest::Contains("/initial_state/q0"),
                         std::invalid_argument);

    json bad3 = {{"sampler", {{"energy_window", {-3.0, 1.0}}}}};
    CHECK_THROWS_WITH_AS(cli::parse_config(bad3), doctest::Contains("/sampler/energy_window"),
                         std::invalid_argument);

    json bad4 = {{"qm", {{"jobs", {{{"family", "eZe_symmetric"}, {"N", 2}, {"n", 1}}}}}}};
    CHECK_THROWS_WITH_AS(cli::parse_config(bad4), doctest::Contains("/qm/jobs/0"),
                         std::invalid_argument);

    // round trip through the canonical echo
    json good = {{"mode", "autocorr"},
                 {"configuration", "Zee"},
                 {"initial_state", {{"q0", {8.37, 22.41}}, {"gamma", {0.4, 0.4}}}},
                 {"sampler", {{"n_traj", 500}, {"seed", 7}, {"energy_window", {-3.0, 0.0}}}},
                 {"time_grid", {{"dt", 0.5}, {"n_samples", 11}}}};
    auto config = cli::parse_config(good);
    auto echo = cli::config_to_json(config);
    auto config2 = cli::parse_config(echo);
    CHECK(config2.sampler.seed == 7);
    CHECK(config2.state.packet2.q0 == 22.41);
    CHECK(config2.configuration.variant == dyn::Variant::Zee);
    CHECK(config2.sampler.energy_window->first == -3.0);
}

TEST_CASE("frozen-planet initial state scaling") {
    auto s1 = cli::frozen_planet_initial_state(-1.0);
    CHECK(s1.packet1.q0 == doctest::Approx(2.15).epsilon(1e-14));
    CHECK(s1.packet2.q0 == doctest::Approx(5.76).epsilon(1e-14));
    CHECK(s1.packet1.p0 == 0.0);

    auto s2 = cli::frozen_planet_initial_state(-0.257);
    CHECK(s2.packet1.q0 == doctest::Approx(8.366).epsilon(1e-3));
    CHECK(s2.packet2.q0 == doctest::Approx(22.41).epsilon(1e-3));

    auto s3 = cli::frozen_planet_initial_state(-0.5);
    CHECK(s3.packet1.q0 == doctest::Approx(4.30).epsilon(1e-12));
    CHECK(s3.packet2.q0 == doctest::Approx(11.52).epsilon(1e-12));

    CHECK_THROWS_AS(cli::frozen_planet_initial_state(0.0), std::domain_error);
}

TEST_CASE("table comparison") {
    cli::EnergyTable reference = {
        {{"eZe_symmetric", 5, 5}, {0.1320, true, 300}},
        {{"Zee_singlet", 1, 1}, {2.1084, true, 200}},
        {{"Zee_singlet", 9, 9}, {0.02, true, 100}},
    };
    cli::EnergyTable computed = {
        {{"eZe_symmetric", 5, 5}, {0.1314, true, 0}},
        {{"Zee_singlet", 1, 1}, {2.1265, true, 0}},
        {{"Zee_singlet", 2, 2}, {0.54, true, 0}},
    };

    auto report = cli::compare_tables(computed, reference, 0.01);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].rel_dev == doctest::Approx(0.0006 / 0.1320).epsilon(1e-6));
    CHECK(report.rows[0].pass);
    CHECK(report.rows[1].rel_dev == doctest::Approx(0.0181 / 2.1084).epsilon(1e-3));
    CHECK(report.rows[1].pass); // 0.86% within 1%
    REQUIRE(report.missing_in_computed.size() == 1);
    CHECK(report.missing_in_computed[0].n == 9);
    CHECK(!report.all_pass); // missing level fails the report
    REQUIRE(report.missing_in_reference.size() == 1);

    auto identical = cli::compare_tables(reference, reference, 1e-12);
    CHECK(identical.all_pass);
    for (const auto& row : identical.rows)
        CHECK(row.abs_dev == 0.0);
}

TEST_CASE("energy table CSV round trip") {
    const std::string path = "/tmp/colhel_test_table.csv";
    cli::EnergyTable table = {
        {{"eZe_symmetric", 1, 1}, {3.2459, true, 105}},
        {{"Zee_singlet", 3, 4}, {0.23598, false, 324}},
    };
    cli::write_energy_table(path, table);
    auto back = cli::read_energy_table(path);
    REQUIRE(back.size() == 2);
    CHECK(back.at({"eZe_symmetric", 1, 1}).binding == doctest::Approx(3.2459));
    CHECK(back.at({"Zee_singlet", 3, 4}).converged == false);
    CHECK(back.at({"Zee_singlet", 3, 4}).basis_size == 324);
}

TEST_CASE("autocorr runs are byte-identical across worker counts and resumable") {
    cli::ExperimentConfig config;
    config.mode = cli::Mode::autocorr;
    config.configuration.variant = dyn::Variant::Zee;
    config.state.packet1 = {8.37, 0.0, 0.4};
    config.state.packet2 = {22.41, 0.0, 0.4};
    config.sampler.n_traj = 400;
    config.sampler.seed = 12;
    config.sampler.energy_window = {{-3.0, 0.0}};
    config.sampler.discard_threshold = 0;
    config.sampler.min_surviving = 1;
    config.grid = {0.5, 41};

    config.output_dir = "/tmp/colhel_repro_w1";
    config.workers = 1;
    fs::remove_all(config.output_dir);
    auto r1 = cli::run(config);
    config.output_dir = "/tmp/colhel_repro_w2";
    config.workers = 2;
    fs::remove_all(config.output_dir);
    auto r2 = cli::run(config);

    const std::string a = slurp("/tmp/colhel_repro_w1/autocorr.csv");
    const std::string b = slurp("/tmp/colhel_repro_w2/autocorr.csv");
    CHECK(a == b);

    // resuming from the checkpoint reproduces the same bytes without redoing
    // the propagation
    config.output_dir = "/tmp/colhel_repro_w2";
    auto r3 = cli::run(config, true);
    CHECK(slurp("/tmp/colhel_repro_w2/autocorr.csv") == a);

    // manifest counts reconcile
    auto manifest = nlohmann::json::parse(slurp(r1.manifest_path));
    const auto& c = manifest["counts"];
    CHECK(c["sampled"].get<std::uint64_t>() ==
          c["accepted"].get<std::uint64_t>() + c["rejected_energy"].get<std::uint64_t>() +
              c["rejected_domain"].get<std::uint64_t>());
    CHECK(c["accepted"].get<std::uint64_t>() ==
          c["completed"].get<std::uint64_t>() + c["ionized"].get<std::uint64_t>() +
              c["triple_collision"].get<std::uint64_t>() + c["discarded"].get<std::uint64_t>());
}

TEST_CASE("preset files parse and carry the documented parameters") {
    const char* dir = std::getenv("COLHEL_TEST_PRESET_DIR");
    const std::string preset_dir = dir ? dir : std::string(PRESET_SOURCE_DIR);

    auto fig1 = cli::load_preset("fig1", preset_dir);
    CHECK(fig1.state.packet1.q0 == 2.0);
    CHECK(fig1.state.packet1.gamma == 1.0);
    CHECK(fig1.sampler.energy_window->first == -3.5);
    CHECK(fig1.sampler.prefactor_policy == hk::PrefactorPolicy::modulus_sqrt);
    CHECK(fig1.full_n_traj == 23000000);

    auto fig2 = cli::load_preset("fig2", preset_dir);
    CHECK(fig2.state.packet1.q0 == 30.0);
    CHECK(fig2.state.packet1.gamma == 0.1);
    CHECK(fig2.sampler.n_traj == 360000);
    CHECK(fig2.sampler.energy_window->first == -4.0);

    auto fig3 = cli::load_preset("fig3", preset_dir);
    CHECK(fig3.configuration.variant == dyn::Variant::Zee);
    CHECK(fig3.state.packet2.q0 == doctest::Approx(22.41).epsilon(1e-2));
    CHECK(fig3.state.packet1.gamma == 0.4);
    CHECK(fig3.sampler.prefactor_policy == hk::PrefactorPolicy::exact);
    CHECK(fig3.sampler.discard_threshold <= 0); // Zee discards nothing
    CHECK(fig3.sampler.energy_window->first == -3.0);
}
