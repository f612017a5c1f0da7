#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "frontlab/ensemble_random.hpp"
#include "frontlab/run_config.hpp"

using namespace frontlab;

namespace {

const double kTheta = 0.25;

StepperConfig solver(const ReactionEnv& env) {
    StepperConfig cfg;
    cfg.dx = 0.05;
    cfg.dt = 0.02;
    cfg.lipschitz_bound = env.lipschitz_bound();
    cfg.window_width = 300.0;
    return cfg;
}

WaveProfile floor_wave(const ReactionEnv& env) {
    return solve_ignition_wave([&env](double u) { return env.f_min(u); }, env.theta(), 1e-8);
}

EnsembleConfig small_config(double horizon = 80.0) {
    EnsembleConfig ens;
    ens.horizon = horizon;
    ens.burn_in = 20.0;
    ens.checkpoints = 4;
    ens.workers = 2;
    ens.psi_cadence = 1.0;
    return ens;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("degenerate telegraph ensemble collapses to the frozen wave") {
    const ReactionEnv tmpl(kTheta, AmplitudeModel::telegraph(1.0, 1.0, 0.2, 0));
    const WaveProfile phi = floor_wave(tmpl);
    const auto cfg = solver(tmpl);
    const auto report =
        run_ensemble(tmpl, phi, {1, 2, 3, 4}, cfg, small_config(), phi.speed, phi.speed);

    CHECK(report.n_effective == 4);
    for (const auto& r : report.realizations) {
        CHECK(!r.failed);
        CHECK(r.checkpoints.back().speed == doctest::Approx(phi.speed).epsilon(0.01));
        CHECK(r.checkpoints.back().speed == report.realizations[0].checkpoints.back().speed);
    }
    CHECK(report.checkpoint_std.back() <= 1e-12);
}

TEST_CASE("same seed reproduces its speed path bit for bit") {
    const ReactionEnv tmpl(kTheta, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 0));
    const WaveProfile phi = floor_wave(tmpl);
    const auto cfg = solver(tmpl);
    const WaveProfile phi_hi =
        solve_ignition_wave([&tmpl](double u) { return tmpl.f_max(u); }, kTheta, 1e-8);
    const auto a = run_ensemble(tmpl, phi, {11, 12}, cfg, small_config(), phi.speed, phi_hi.speed);
    const auto b = run_ensemble(tmpl, phi, {12, 11}, cfg, small_config(), phi.speed, phi_hi.speed);
    for (int k = 0; k < 4; ++k) {
        CHECK(a.by_seed(11).checkpoints[k].xi == b.by_seed(11).checkpoints[k].xi);
        CHECK(a.by_seed(12).checkpoints[k].xi == b.by_seed(12).checkpoints[k].xi);
    }
}

TEST_CASE("coinciding checkpoints agree across different cadences") {
    const ReactionEnv tmpl(kTheta, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 0));
    const WaveProfile phi = floor_wave(tmpl);
    const auto cfg = solver(tmpl);
    auto dense = small_config();
    dense.checkpoints = 4;
    auto sparse = small_config();
    sparse.checkpoints = 2;
    const auto a = run_ensemble(tmpl, phi, {5}, cfg, dense, 0.0, 1.0);
    const auto b = run_ensemble(tmpl, phi, {5}, cfg, sparse, 0.0, 1.0);
    // checkpoints at 40 and 80 coincide
    CHECK(a.by_seed(5).checkpoints[1].xi == b.by_seed(5).checkpoints[0].xi);
    CHECK(a.by_seed(5).checkpoints[3].xi == b.by_seed(5).checkpoints[1].xi);
}

TEST_CASE("small mixed ensemble: sandwich and variance decay") {
    const ReactionEnv tmpl(kTheta, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 0));
    const WaveProfile phi = floor_wave(tmpl);
    const WaveProfile phi_hi =
        solve_ignition_wave([&tmpl](double u) { return tmpl.f_max(u); }, kTheta, 1e-8);
    const auto cfg = solver(tmpl);
    auto ens = small_config(160.0);
    ens.checkpoints = 8;
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 8; ++s) seeds.push_back(s);
    const auto report = run_ensemble(tmpl, phi, seeds, cfg, ens, phi.speed, phi_hi.speed);

    CHECK(report.n_effective == 8);
    const double slack = 10.0 / ens.horizon;
    for (const auto& r : report.realizations) {
        CHECK(r.checkpoints.back().speed >= phi.speed - slack);
        CHECK(r.checkpoints.back().speed <= phi_hi.speed + slack);
    }
    // dispersion shrinks as the averaging window grows
    CHECK(report.checkpoint_std.back() < report.checkpoint_std[1]);
}

TEST_CASE("averaged profile: frozen case equals the wave and stays monotone") {
    const ReactionEnv tmpl(kTheta, AmplitudeModel::telegraph(1.0, 1.0, 0.2, 0));
    const WaveProfile phi = floor_wave(tmpl);
    const auto cfg = solver(tmpl);
    auto ens = small_config();
    ens.profile_seed = 9;
    const auto report = run_ensemble(tmpl, phi, {9}, cfg, ens, phi.speed, phi.speed);
    const auto psi = averaged_profile(report, tmpl, phi, cfg, 9);

    REQUIRE(psi.size() == report.offsets.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        worst = std::max(worst, std::abs(psi[i] - phi.value(report.offsets[i])));
        if (i > 0) CHECK(psi[i] <= psi[i - 1] + 1e-10);
    }
    CHECK(worst <= 5e-3);  // discrete wave shape versus the shooting profile
    CHECK(psi.front() >= 1.0 - 2e-6);
    CHECK(psi.back() <= 2e-6);

    SUBCASE("recompute path without a stored stack matches") {
        const auto again = averaged_profile(report, tmpl, phi, cfg, 9);
        CHECK(again == psi);
        // realizations without a retained stack are recomputed untouched
        const auto report2 = run_ensemble(tmpl, phi, {9, 10}, cfg, small_config(), 0.0, 1.0);
        const auto via_rerun = averaged_profile(report2, tmpl, phi, cfg, 10);
        CHECK(via_rerun.size() == report2.offsets.size());
    }
}

TEST_CASE("checkpoint persistence: resume reproduces the summary byte for byte") {
    namespace fs = std::filesystem;
    const ReactionEnv tmpl(kTheta, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 0));
    const WaveProfile phi = floor_wave(tmpl);
    const auto cfg = solver(tmpl);
    const auto ens = small_config();
    std::vector<std::uint64_t> seeds{3, 4, 5};

    const auto full = run_ensemble(tmpl, phi, seeds, cfg, ens, 0.4, 0.9);
    const fs::path dir = fs::temp_directory_path() / "frontlab_ens_test";
    fs::create_directories(dir);
    const std::string jsonl = (dir / "ensemble.jsonl").string();
    const std::string summary = (dir / "summary.json").string();
    write_checkpoints_jsonl(full, jsonl);
    write_ensemble_summary(full, summary);
    const std::string expected_rows = read_file(jsonl);
    const std::string expected_summary = read_file(summary);

    // interrupt: drop the last seed's records entirely
    {
        std::ifstream in(jsonl);
        std::ofstream out(jsonl + ".partial");
        std::string line;
        while (std::getline(in, line))
            if (line.find("\"seed\":5") == std::string::npos) out << line << '\n';
    }
    auto prior = read_checkpoints_jsonl(jsonl + ".partial", ens.checkpoints);
    CHECK(prior.size() == 2);

    const auto resumed = run_ensemble(tmpl, phi, seeds, cfg, ens, 0.4, 0.9, &prior);
    write_checkpoints_jsonl(resumed, jsonl);
    write_ensemble_summary(resumed, summary);
    CHECK(read_file(jsonl) == expected_rows);
    CHECK(read_file(summary) == expected_summary);
}

TEST_CASE("validation of the ensemble preconditions") {
    const ReactionEnv frozen(kTheta, AmplitudeModel::constant(1.0));
    const ReactionEnv tmpl(kTheta, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 0));
    const WaveProfile phi = floor_wave(tmpl);
    const auto cfg = solver(tmpl);
    CHECK_THROWS_AS(run_ensemble(frozen, phi, {1}, cfg, small_config(), 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(run_ensemble(tmpl, phi, {1, 1}, cfg, small_config(), 0.0, 1.0), ConfigError);
}

TEST_CASE("failed realizations are reported, never dropped silently") {
    const ReactionEnv tmpl(kTheta, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 0));
    const WaveProfile phi = floor_wave(tmpl);
    StepperConfig bad = solver(tmpl);
    bad.window_width = 0.5;  // 11-node grid: every evolution must fail
    const auto report = run_ensemble(tmpl, phi, {1, 2}, bad, small_config(), 0.0, 1.0);
    CHECK(report.n_effective == 0);
    for (const auto& r : report.realizations) {
        CHECK(r.failed);
        CHECK(!r.error.empty());
    }
    // the summary is still writable
    const auto path = std::filesystem::temp_directory_path() / "frontlab_failed.jsonl";
    write_checkpoints_jsonl(report, path.string());
    CHECK(std::filesystem::file_size(path) > 0);
}
