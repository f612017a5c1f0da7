#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "frontlab/reaction_env.hpp"

using namespace frontlab;

namespace {

ReactionEnv default_env(double a = 1.0) {
    return ReactionEnv(0.25, AmplitudeModel::constant(a));
}

// Closed-form flow of u' = a (u - theta)(1 - u) for u0 in (theta, 1):
// (u - theta)/(1 - u) grows like exp(a (1 - theta) t).
double logistic_flow(double theta, double a, double u0, double t) {
    const double k = (u0 - theta) / (1.0 - u0) * std::exp(a * (1.0 - theta) * t);
    return (theta + k) / (1.0 + k);
}

}  // namespace

TEST_CASE("eval matches the quadratic family") {
    const auto env = default_env();
    CHECK(env.eval(0.0, 0.25) == 0.0);
    CHECK(env.eval(3.0, 1.0) == 0.0);
    CHECK(env.eval(-2.0, 0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(env.eval(0.0, 0.1) == 0.0);    // below ignition
    CHECK(env.eval(0.0, 1.2) < 0.0);     // above the stable state
}

TEST_CASE("sign pattern and envelope sandwich on random samples") {
    const ReactionEnv env(0.25, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 11));
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ut(-500.0, 500.0);
    std::uniform_real_distribution<double> uu(0.25, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double t = ut(rng), u = uu(rng);
        const double f = env.eval(t, u);
        CHECK(env.f_min(u) <= f);
        CHECK(f <= env.f_max(u));
        if (u > 0.25 && u < 1.0) CHECK(f > 0.0);
    }
    for (int i = 0; i < 1000; ++i) {
        const double t = ut(rng);
        CHECK(env.eval(t, 0.1) == 0.0);
        CHECK(env.eval(t, 1.0) == 0.0);
        CHECK(env.eval(t, 1.3) < 0.0);
    }
}

TEST_CASE("one-sided derivatives at u = 1 are ordered and negative") {
    const ReactionEnv env(0.25, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 3));
    const double h = 1e-7;
    const double d_min = (env.f_min(1.0) - env.f_min(1.0 - h)) / h;
    const double d_max = (env.f_max(1.0) - env.f_max(1.0 - h)) / h;
    CHECK(d_min < 0.0);
    CHECK(d_max <= d_min + 1e-9);
}

TEST_CASE("amplitude models evaluate as specified") {
    CHECK(AmplitudeModel::constant(1.0)(123.4) == 1.0);
    const auto per = AmplitudeModel::periodic(1.0, 0.5, 10.0);
    CHECK(per(0.0) == doctest::Approx(1.0));
    CHECK(per(2.5) == doctest::Approx(1.5));
    CHECK(per.a_min() == doctest::Approx(0.5));
    CHECK(per.a_max() == doctest::Approx(1.5));

    const auto qp = AmplitudeModel::quasi_periodic(1.0, {{0.25, 0.1}, {0.2, 0.1 / std::sqrt(2.0)}});
    for (double t : {-31.0, 0.0, 7.7, 400.0}) {
        CHECK(qp(t) >= qp.a_min() - 1e-12);
        CHECK(qp(t) <= qp.a_max() + 1e-12);
    }
}

TEST_CASE("telegraph sampling is deterministic and respects bounds") {
    const auto tg = AmplitudeModel::telegraph(0.5, 2.0, 0.2, 7);
    const auto tg_same = AmplitudeModel::telegraph(0.5, 2.0, 0.2, 7);
    const auto tg_other = AmplitudeModel::telegraph(0.5, 2.0, 0.2, 8);
    bool any_difference = false;
    for (double t = -200.0; t <= 200.0; t += 0.37) {
        CHECK(tg(t) == tg_same(t));
        CHECK(tg(t) >= 0.5);
        CHECK(tg(t) <= 2.0);
        any_difference |= tg(t) != tg_other(t);
    }
    CHECK(any_difference);
}

TEST_CASE("telegraph switch times bracket the query point") {
    const auto tg = AmplitudeModel::telegraph(0.5, 2.0, 0.2, 9);
    for (double t : {-40.2, -1.0, 0.0, 5.5, 90.0}) {
        const double sw = tg.next_switch_after(t);
        CHECK(sw > t);
        CHECK(tg(0.5 * (t + sw)) == tg(t));  // constant on the piece
    }
}

TEST_CASE("telegraph time average approaches the uniform mean") {
    const auto tg = AmplitudeModel::telegraph(0.5, 2.0, 0.2, 12345);
    const auto time_average = [&](double T) {
        double acc = 0.0, t = 0.0;
        while (t < T) {
            const double sw = std::min(T, tg.next_switch_after(t));
            acc += tg(t) * (sw - t);
            t = sw;
        }
        return acc / T;
    };
    const double mean = 0.5 * (0.5 + 2.0);
    // Standard error of the holding-time-weighted mean of ~T*rate uniform draws.
    const double sigma = (2.0 - 0.5) / std::sqrt(12.0);
    for (double T : {1e3, 1e4}) {
        const double se = sigma * std::sqrt(2.0 / (T * 0.2));
        CHECK(std::abs(time_average(T) - mean) <= 3.0 * se);
    }
    CHECK(std::abs(time_average(1e4) - mean) < std::abs(time_average(1e3) - mean) + 0.05);
}

TEST_CASE("ode_flow fixed points and closed-form oracle") {
    const auto env = default_env();
    CHECK(ode_flow(env, 0.0, 0.25, 10.0) == 0.25);
    CHECK(ode_flow(env, 0.0, 0.1, 5.0) == 0.1);
    CHECK(ode_flow(env, 0.0, 1.0, 7.0) == 1.0);

    const double got = ode_flow(env, 0.0, 0.5, 2.0);
    CHECK(got == doctest::Approx(logistic_flow(0.25, 1.0, 0.5, 2.0)).epsilon(1e-8));

    // climbing toward 1 from just above ignition
    double prev = 0.26;
    for (double t : {2.0, 5.0, 10.0, 40.0}) {
        const double u = ode_flow(env, 0.0, 0.26, t);
        CHECK(u >= prev);
        prev = u;
    }
    CHECK(prev > 1.0 - 1e-3);

    // decay from above 1
    const double from_above = ode_flow(env, 0.0, 1.1, 40.0);
    CHECK(from_above > 1.0);
    CHECK(from_above < 1.0 + 1e-3);
}

TEST_CASE("ode_flow rejects a reversed time interval") {
    const auto env = default_env();
    CHECK_THROWS_AS(ode_flow(env, 1.0, 0.5, 0.0), ConfigError);
}

TEST_CASE("ode_flow is monotone in the initial state") {
    const ReactionEnv env(0.25, AmplitudeModel::periodic(1.0, 0.5, 10.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uu(0.0, 1.1);
    for (int i = 0; i < 50; ++i) {
        double a = uu(rng), b = uu(rng);
        if (a > b) std::swap(a, b);
        CHECK(ode_flow(env, -3.0, a, 4.0) <= ode_flow(env, -3.0, b, 4.0) + 1e-12);
    }
}

TEST_CASE("ode_flow across telegraph switches stays within the envelope flows") {
    const ReactionEnv env(0.25, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 4));
    const ReactionEnv lo(0.25, AmplitudeModel::constant(0.5));
    const ReactionEnv hi(0.25, AmplitudeModel::constant(2.0));
    const double u = ode_flow(env, 0.0, 0.4, 6.0);
    CHECK(u >= ode_flow(lo, 0.0, 0.4, 6.0) - 1e-9);
    CHECK(u <= ode_flow(hi, 0.0, 0.4, 6.0) + 1e-9);
}

TEST_CASE("growth bound matches the closed form (1 - sqrt(theta))^2 a_max") {
    const ReactionEnv env(0.25, AmplitudeModel::telegraph(0.5, 2.0, 0.2, 1));
    const double expected = 2.0 * std::pow(1.0 - std::sqrt(0.25), 2.0);
    CHECK(env.growth_bound() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("bistable companion integral via the closed form") {
    const ReactionEnv env(0.25, AmplitudeModel::constant(0.5));
    const double theta = 0.25, a_min = 0.5, delta = 0.05;
    const BistableCompanion fB(env, delta);
    const double expected = a_min * std::pow(1.0 - theta, 3) / 6.0 - delta * std::pow(theta, 3) / 6.0;
    CHECK(fB.integral() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(fB(0.0) == 0.0);
    CHECK(fB(0.1) < 0.0);
    CHECK(fB(0.5) == doctest::Approx(env.f_min(0.5)));
    CHECK(fB(1.0) == 0.0);
}

TEST_CASE("companion rejects a dominating negative part") {
    const ReactionEnv env(0.25, AmplitudeModel::constant(0.5));
    CHECK_THROWS_AS(BistableCompanion(env, 1e3), IntegralNonPositive);
    // vanishing negative part: integral tends to the positive-part mass
    const BistableCompanion tiny(env, 1e-9);
    CHECK(tiny.integral() == doctest::Approx(0.5 * std::pow(0.75, 3) / 6.0).epsilon(1e-6));
}
