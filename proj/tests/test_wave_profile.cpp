#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frontlab/wave_profile.hpp"

using namespace frontlab;

namespace {
const double kTheta = 0.25;
double f_default(double u) { return u <= kTheta ? 0.0 : (u - kTheta) * (1.0 - u); }
}  // namespace

TEST_CASE("ignition wave: exponential tail identity") {
    const WaveProfile w = solve_ignition_wave(f_default, kTheta, 1e-8);
    CHECK(w.speed > 0.0);
    double worst = 0.0;
    for (double x = 0.0; x <= 10.0; x += 1e-3)
        worst = std::max(worst, std::abs(w.value(x) - kTheta * std::exp(-w.speed * x)));
    CHECK(worst <= 1e-6);
}

TEST_CASE("ignition wave: shape and residual invariants") {
    const WaveProfile w = solve_ignition_wave(f_default, kTheta, 1e-8);
    CHECK(w.phi.front() >= 1.0 - 1e-6);
    CHECK(w.phi.back() <= 1e-6);
    CHECK(w.residual_max <= 5e-4);
    CHECK(w.value(0.0) == doctest::Approx(kTheta).epsilon(1e-9));
    // nonincreasing everywhere, strictly decreasing through the reaction zone
    for (std::size_t i = 1; i < w.phi.size(); ++i) {
        CHECK(w.phi[i] <= w.phi[i - 1] + 1e-12);
        if (w.phi[i] > 0.01 && w.phi[i] < 0.99) CHECK(w.phi[i] < w.phi[i - 1]);
    }
    // dichotomy witnesses stored by the solver
    CHECK(w.c_over > w.speed);
    CHECK(w.c_under < w.speed);
}

TEST_CASE("ignition wave: diffusive rescaling doubles the speed") {
    const WaveProfile w1 = solve_ignition_wave(f_default, kTheta, 1e-8);
    const WaveProfile w4 =
        solve_ignition_wave([](double u) { return 4.0 * f_default(u); }, kTheta, 1e-8);
    CHECK(w4.speed == doctest::Approx(2.0 * w1.speed).epsilon(1e-6));
}

TEST_CASE("ignition wave: bracket-independent speed") {
    const WaveProfile a = solve_ignition_wave(f_default, kTheta, 1e-8);
    const WaveProfile b = solve_ignition_wave(f_default, kTheta, 1e-8, 3.0);
    CHECK(std::abs(a.speed - b.speed) <= 2e-8 * std::max(1.0, a.speed));
}

TEST_CASE("bistable wave: classical cubic speed") {
    const double a = 0.25;
    const WaveProfile w = solve_bistable_wave(
        [a](double u) { return u * (u - a) * (1.0 - u); }, 0.5, 1e-8);
    CHECK(w.speed == doctest::Approx((1.0 - 2.0 * a) / std::sqrt(2.0)).epsilon(1e-3));
    CHECK(w.phi.front() >= 1.0 - 1e-6);
    CHECK(w.phi.back() <= 1e-6);
    CHECK(w.residual_max <= 5e-4);
}

TEST_CASE("bistable companion wave is slower than the ignition wave above it") {
    const ReactionEnv env(kTheta, AmplitudeModel::constant(1.0));
    const BistableCompanion fB(env, 0.05);
    const WaveProfile wB = solve_bistable_wave(fB);
    const WaveProfile wI = solve_ignition_wave(f_default, kTheta, 1e-8);
    CHECK(wB.speed > 0.0);
    CHECK(wB.speed < wI.speed);
    CHECK(wB.value(0.0) == doctest::Approx(kTheta).epsilon(1e-6));
}

TEST_CASE("kpp envelope parameters") {
    const auto p1 = kpp_envelope_params(0.04);
    CHECK(p1.lambda == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p1.c_star == doctest::Approx(0.4).epsilon(1e-15));
    const auto p2 = kpp_envelope_params(1.0);
    CHECK(p2.lambda == 1.0);
    CHECK(p2.c_star == 2.0);
    // kappa = c_min^2 is the largest admissible envelope parameter
    const WaveProfile w = solve_ignition_wave(f_default, kTheta, 1e-8);
    const auto p3 = kpp_envelope_params(w.speed * w.speed);
    CHECK(p3.lambda == doctest::Approx(w.speed).epsilon(1e-12));
}

TEST_CASE("envelope speed bound: linear stub and closed form") {
    const double kappa0 = 0.7;
    const auto stub = envelope_speed_bound([kappa0](double u) { return kappa0 * u; }, 0.04);
    CHECK(stub.kappa0 == doctest::Approx(kappa0).epsilon(1e-10));
    CHECK(stub.c_kappa0 == doctest::Approx(kappa0 / 0.2 + 0.2).epsilon(1e-9));

    const ReactionEnv env(kTheta, AmplitudeModel::constant(1.0));
    const auto b = envelope_speed_bound(env, 0.04);
    CHECK(b.kappa0 == doctest::Approx(std::pow(1.0 - std::sqrt(kTheta), 2)).epsilon(1e-9));

    // algebraic relation between kappa and kappa/4 through lambda_kappa
    const auto q = envelope_speed_bound(env, 0.01);
    CHECK(q.lambda_kappa == doctest::Approx(0.5 * b.lambda_kappa).epsilon(1e-12));
    CHECK(q.c_kappa0 ==
          doctest::Approx(b.kappa0 / q.lambda_kappa + q.lambda_kappa).epsilon(1e-9));
}

TEST_CASE("level crossing of f_max against kappa u") {
    const ReactionEnv env(kTheta, AmplitudeModel::constant(1.0));
    const double kappa = 0.0272;
    const double lam = level_kappa_crossing(env, kappa);
    CHECK(lam > kTheta);
    CHECK(env.f_max(lam) == doctest::Approx(kappa * lam).epsilon(1e-8));
    // below the crossing the reaction sits below the linear bound
    for (double u = 0.01; u < lam; u += 0.01) CHECK(env.f_max(u) <= kappa * u + 1e-12);
    CHECK_THROWS_AS(level_kappa_crossing(env, 10.0), ConfigError);
}
