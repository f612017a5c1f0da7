#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frontlab/front_builder.hpp"

using namespace frontlab;

namespace {

StepperConfig solver(const ReactionEnv& env, double dx = 0.05, double dt = 0.02) {
    StepperConfig cfg;
    cfg.dx = dx;
    cfg.dt = dt;
    cfg.lipschitz_bound = env.lipschitz_bound();
    cfg.window_width = 300.0;
    return cfg;
}

WaveProfile floor_wave(const ReactionEnv& env) {
    return solve_ignition_wave([&env](double u) { return env.f_min(u); }, env.theta(), 1e-8);
}

RunOptions options(double theta, double kappa) {
    RunOptions opt;
    opt.tracker.levels = {0.1, theta, 0.5, 0.625, 0.9};
    opt.tracker.kappa = kappa;
    return opt;
}

}  // namespace

TEST_CASE("find_shift in the frozen medium tracks the rigid translation") {
    const ReactionEnv env(0.25, AmplitudeModel::constant(1.0));
    const WaveProfile phi = floor_wave(env);
    const auto cfg = solver(env);
    double prev = 0.0;
    for (double s : {-10.0, -20.0, -40.0}) {
        const double x_s = find_shift(env, phi, s, 1e-8, cfg, phi.speed);
        // rigid translation at the wave speed, up to the discrete speed bias
        CHECK(x_s == doctest::Approx(phi.speed * s).epsilon(0.01));
        CHECK(x_s < prev);  // deeper starts shift further left
        prev = x_s;
    }
}

TEST_CASE("approximating run is normalized and monotone") {
    const ReactionEnv env(0.25, AmplitudeModel::periodic(1.0, 0.5, 10.0));
    const WaveProfile phi = floor_wave(env);
    const auto cfg = solver(env);
    const RunRecord run =
        run_approximating(env, phi, -10.0, 20.0, cfg, options(0.25, 0.0), phi.speed);

    CHECK(std::abs(run.u00 - 0.25) <= 1e-8);
    CHECK(run.s == -10.0);
    CHECK(run.x_s < 0.0);
    CHECK(!run.snapshots.empty());
    CHECK(run.snapshots.front().t == doctest::Approx(-10.0));
    CHECK(run.snapshots.back().t == doctest::Approx(20.0));

    for (const auto& snap : run.snapshots)
        for (int i = 0; i + 1 < snap.grid.n; ++i) CHECK(snap.u[i + 1] <= snap.u[i] + 1e-12);

    // the trace crossing reproduces the level by construction of the scan
    for (const auto& snap : run.snapshots) {
        const double xi = xi_lambda({snap.grid, snap.t, snap.u, {1.0, 0.0}}, 0.25);
        CHECK(snap.value(xi) == doctest::Approx(0.25).epsilon(1e-9));
    }
}

TEST_CASE("frozen-medium starts coincide once the transient has settled") {
    const ReactionEnv env(0.25, AmplitudeModel::constant(1.0));
    const WaveProfile phi = floor_wave(env);
    const auto cfg = solver(env);
    const FrontEstimate est = build_front(env, phi, {-50.0, -100.0}, 10.0, cfg,
                                          options(0.25, 0.0), phi.speed, 1e-4);
    REQUIRE(est.gaps.size() == 1);
    CHECK(est.gaps.back() <= 1e-6);
    CHECK(est.speed_estimate == doctest::Approx(phi.speed).epsilon(0.01));
}

TEST_CASE("periodic-medium starts form a contracting family") {
    const ReactionEnv env(0.25, AmplitudeModel::periodic(1.0, 0.5, 10.0));
    const WaveProfile phi = floor_wave(env);
    const auto cfg = solver(env);
    const FrontEstimate est = build_front(env, phi, {-20.0, -40.0, -80.0, -160.0}, 20.0, cfg,
                                          options(0.25, 0.0), phi.speed, 1e-4);
    REQUIRE(est.gaps.size() == 3);
    for (std::size_t i = 1; i < est.gaps.size(); ++i) CHECK(est.gaps[i] <= est.gaps[i - 1]);
    CHECK(est.gaps.back() <= 1e-4);
    for (std::size_t i = 1; i < est.x_s.size(); ++i) CHECK(est.x_s[i] < est.x_s[i - 1]);

    // front-centered profiles of the two deepest starts agree within the
    // reported gap (plus the recentering slack gap/|u_x| * sup|u_x|)
    double psi_gap = 0.0;
    for (std::size_t i = 0; i < est.profile_offsets.size(); ++i)
        psi_gap = std::max(psi_gap, std::abs(est.profile_deepest[i] - est.profile_prev[i]));
    CHECK(psi_gap <= 3.0 * est.gaps.back() + 1e-12);
}

TEST_CASE("non-contracting family is reported with its gap table") {
    const ReactionEnv env(0.25, AmplitudeModel::constant(1.0));
    const WaveProfile phi = floor_wave(env);
    const auto cfg = solver(env);
    try {
        build_front(env, phi, {-2.0, -3.0}, 5.0, cfg, options(0.25, 0.0), phi.speed, 1e-13);
        FAIL("expected NonCauchy");
    } catch (const NonCauchy& e) {
        CHECK(!e.gaps.empty());
        CHECK(e.gaps.back() > 1e-13);
    }
}

TEST_CASE("degenerate period reduces to the homogeneous wave") {
    const ReactionEnv env(0.25, AmplitudeModel::periodic(1.0, 0.0, 10.0));
    const WaveProfile phi = floor_wave(env);
    const auto cfg = solver(env);
    // the contraction floor is the front-centered resampling error ~ dx^2
    const PeriodicWave wave = periodic_wave(env, phi, cfg, 5e-5, 20.0, 30);
    CHECK(wave.c_T == doctest::Approx(phi.speed).epsilon(0.01));
    CHECK(wave.residuals.back() <= 5e-5);
    CHECK(wave.profile_equation_residual <= 5e-3);
}

TEST_CASE("oscillating medium admits a period-map fixed point") {
    const ReactionEnv env(0.25, AmplitudeModel::periodic(1.0, 0.5, 10.0));
    const WaveProfile phi = floor_wave(env);
    const WaveProfile phi_hi =
        solve_ignition_wave([&env](double u) { return env.f_max(u); }, env.theta(), 1e-8);
    auto cfg = solver(env, 0.025, 0.005);
    const PeriodicWave wave = periodic_wave(env, phi, cfg, 1e-4, 30.0, 30);

    CHECK(wave.residuals.back() <= 1e-4);
    for (std::size_t i = 1; i < wave.residuals.size(); ++i)
        CHECK(wave.residuals[i] <= wave.residuals[i - 1] * 1.2 + 1e-12);
    // comparison-principle sandwich between the frozen media
    CHECK(wave.c_T >= phi.speed * 0.99);
    CHECK(wave.c_T <= phi_hi.speed * 1.01);
    // profile decreasing through the front
    for (std::size_t i = 1; i < wave.profile.size(); ++i)
        CHECK(wave.profile[i] <= wave.profile[i - 1] + 1e-10);
}

TEST_CASE("time average of the front-centered profile is span-independent over whole periods") {
    const ReactionEnv env(0.25, AmplitudeModel::periodic(1.0, 0.5, 10.0));
    const WaveProfile phi = floor_wave(env);
    auto cfg = solver(env);
    RunOptions opt = options(0.25, 0.0);
    opt.observe_every = 0.5;
    opt.snapshot_every = 0.5;
    const RunRecord run = run_approximating(env, phi, 0.0, 80.0, cfg, opt, phi.speed);

    std::vector<double> offsets;
    for (double off = -30.0; off <= 30.0 + 1e-12; off += cfg.dx) offsets.push_back(off);
    const auto average_over = [&](double t0, double t1) {
        std::vector<double> acc(offsets.size(), 0.0);
        std::vector<double> prev;
        double t_prev = 0.0;
        bool have = false;
        for (const auto& snap : run.snapshots) {
            if (snap.t < t0 - 1e-9 || snap.t > t1 + 1e-9) continue;
            const Field f{snap.grid, snap.t, snap.u, {1.0, 0.0}};
            auto cur = front_centered_profile(snap, xi_lambda(f, 0.25), offsets);
            if (have)
                for (std::size_t i = 0; i < acc.size(); ++i)
                    acc[i] += 0.5 * (snap.t - t_prev) * (prev[i] + cur[i]);
            prev = std::move(cur);
            t_prev = snap.t;
            have = true;
        }
        for (auto& v : acc) v /= (t1 - t0);
        return acc;
    };

    // the settled profile is time-periodic, so whole-period averages agree
    const auto two = average_over(40.0, 60.0);
    const auto four = average_over(40.0, 80.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < two.size(); ++i)
        worst = std::max(worst, std::abs(two[i] - four[i]));
    CHECK(worst <= 1e-3);
    // averaged profile keeps the monotone front shape
    for (std::size_t i = 1; i < four.size(); ++i) CHECK(four[i] <= four[i - 1] + 1e-10);
}

TEST_CASE("measured front speed matches the shooting speed") {
    const ReactionEnv env(0.25, AmplitudeModel::constant(1.0));
    const WaveProfile phi = floor_wave(env);
    const auto cfg = solver(env);
    const double c_pde = measure_front_speed(env, phi, cfg, 10.0, 50.0);
    CHECK(c_pde == doctest::Approx(phi.speed).epsilon(0.01));
}
