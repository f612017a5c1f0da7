#include "frontlab/reaction_env.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace frontlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Deterministic uniform in [0,1) from the raw engine; avoids the
// implementation-defined distribution adaptors so sampling is a pure
// function of (seed, t) on every platform.
inline double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct TelegraphPiece {
    double value;
    double t_lo, t_hi;  // value holds on [t_lo, t_hi)
};

// Walks the piecewise-constant path outward from t = 0 until it covers t.
// Streams for t >= 0 and t < 0 are independent and fixed by the seed.
TelegraphPiece telegraph_piece(double a_min, double a_max, double rate,
                               std::uint64_t seed, double t) {
    const bool forward = t >= 0.0;
    std::mt19937_64 rng(mix_seed(seed, forward ? 0 : 1));
    double lo = 0.0, hi = 0.0;
    double value = 0.0;
    do {
        value = a_min + (a_max - a_min) * canonical(rng);
        const double hold = -std::log1p(-canonical(rng)) / rate;
        if (forward) {
            lo = hi;
            hi = lo + hold;
        } else {
            hi = lo;
            lo = hi - hold;
        }
    } while (forward ? (t >= hi) : (t < lo));
    return {value, lo, hi};
}

}  // namespace

AmplitudeModel AmplitudeModel::constant(double a) {
    if (!(a > 0.0)) throw ConfigError("constant amplitude must be positive");
    AmplitudeModel m;
    m.kind_ = AmplitudeKind::Constant;
    m.mean_ = a;
    m.a_min_ = m.a_max_ = a;
    return m;
}

AmplitudeModel AmplitudeModel::periodic(double mean, double rel_amplitude, double period) {
    if (!(mean > 0.0) || !(period > 0.0) || rel_amplitude < 0.0 || rel_amplitude >= 1.0)
        throw ConfigError("periodic amplitude requires mean > 0, period > 0, rho in [0,1)");
    AmplitudeModel m;
    m.kind_ = AmplitudeKind::Periodic;
    m.mean_ = mean;
    m.rho_ = rel_amplitude;
    m.period_ = period;
    m.a_min_ = mean * (1.0 - rel_amplitude);
    m.a_max_ = mean * (1.0 + rel_amplitude);
    return m;
}

AmplitudeModel AmplitudeModel::quasi_periodic(double mean, std::vector<HarmonicTerm> terms) {
    double total = 0.0;
    for (const auto& h : terms) {
        if (h.rel_amplitude < 0.0 || !(h.frequency > 0.0))
            throw ConfigError("quasi-periodic terms need rel_amplitude >= 0, frequency > 0");
        total += h.rel_amplitude;
    }
    if (!(mean > 0.0) || total >= 1.0)
        throw ConfigError("quasi-periodic amplitude requires mean > 0 and total rho < 1");
    AmplitudeModel m;
    m.kind_ = AmplitudeKind::QuasiPeriodic;
    m.mean_ = mean;
    m.terms_ = std::move(terms);
    m.a_min_ = mean * (1.0 - total);
    m.a_max_ = mean * (1.0 + total);
    return m;
}

AmplitudeModel AmplitudeModel::telegraph(double a_min, double a_max, double holding_rate,
                                         std::uint64_t seed) {
    if (!(a_min > 0.0) || !(a_max >= a_min) || !(holding_rate > 0.0))
        throw ConfigError("telegraph amplitude requires 0 < a_min <= a_max, rate > 0");
    AmplitudeModel m;
    m.kind_ = AmplitudeKind::Telegraph;
    m.mean_ = 0.5 * (a_min + a_max);
    m.rate_ = holding_rate;
    m.seed_ = seed;
    m.a_min_ = a_min;
    m.a_max_ = a_max;
    return m;
}

double AmplitudeModel::operator()(double t) const {
    switch (kind_) {
        case AmplitudeKind::Constant:
            return mean_;
        case AmplitudeKind::Periodic:
            return mean_ * (1.0 + rho_ * std::sin(2.0 * M_PI * t / period_));
        case AmplitudeKind::QuasiPeriodic: {
            double s = 0.0;
            for (const auto& h : terms_) s += h.rel_amplitude * std::sin(2.0 * M_PI * h.frequency * t);
            return mean_ * (1.0 + s);
        }
        case AmplitudeKind::Telegraph:
            return telegraph_value(t);
    }
    return mean_;
}

double AmplitudeModel::telegraph_value(double t) const {
    if (a_min_ == a_max_) return a_min_;  // degenerate process is constant
    return telegraph_piece(a_min_, a_max_, rate_, seed_, t).value;
}

double AmplitudeModel::next_switch_after(double t) const {
    if (kind_ != AmplitudeKind::Telegraph || a_min_ == a_max_) return kInf;
    return telegraph_next_switch(t);
}

double AmplitudeModel::telegraph_next_switch(double t) const {
    if (t < 0.0) {
        const auto piece = telegraph_piece(a_min_, a_max_, rate_, seed_, t);
        // t lies in [lo, hi) with hi <= 0; the next switch is the piece end.
        return piece.t_hi;
    }
    return telegraph_piece(a_min_, a_max_, rate_, seed_, t).t_hi;
}

ReactionEnv::ReactionEnv(double theta, AmplitudeModel model)
    : theta_(theta), model_(std::move(model)) {
    if (!(theta > 0.0 && theta < 1.0))
        throw ConfigError("ignition temperature must lie in (0,1)");
}

double ReactionEnv::lipschitz_bound(double u_hi) const {
    // |g'| on [theta, u_hi] is |1 + theta - 2u|, extremal at the endpoints.
    const double at_theta = 1.0 - theta_;
    const double at_hi = std::abs(1.0 + theta_ - 2.0 * u_hi);
    return a_max() * std::max(at_theta, at_hi);
}

double sup_ratio_over_unit_interval(const std::function<double(double)>& f) {
    const int n = 4096;
    double best = -kInf;
    int best_i = 1;
    for (int i = 1; i < n; ++i) {
        const double u = static_cast<double>(i) / n;
        const double r = f(u) / u;
        if (r > best) {
            best = r;
            best_i = i;
        }
    }
    // Golden-section refinement on the bracketing interval.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::max(1e-12, (best_i - 1.0) / n);
    double hi = std::min(1.0 - 1e-12, (best_i + 1.0) / n);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1) / x1, f2 = f(x2) / x2;
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2) / x2;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1) / x1;
        }
    }
    return std::max(best, std::max(f1, f2));
}

double ReactionEnv::growth_bound() const {
    return sup_ratio_over_unit_interval([this](double u) { return f_max(u); });
}

namespace {

inline double rk4_step(const ReactionEnv& env, double t, double u, double h) {
    const auto f = [&env](double tt, double uu) { return env.eval(tt, uu); };
    const double k1 = f(t, u);
    const double k2 = f(t + 0.5 * h, u + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, u + 0.5 * h * k2);
    const double k4 = f(t + h, u + h * k3);
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Adaptive RK4 with step doubling on an interval free of amplitude switches.
double integrate_segment(const ReactionEnv& env, double t0, double u0, double t1, double tol) {
    const double span = t1 - t0;
    if (span <= 0.0) return u0;
    double t = t0, u = u0;
    double h = std::min(span, 0.1);
    int evals = 0;
    while (t < t1) {
        h = std::min(h, t1 - t);
        const double big = rk4_step(env, t, u, h);
        const double half = rk4_step(env, t, u, 0.5 * h);
        const double two = rk4_step(env, t + 0.5 * h, half, 0.5 * h);
        const double err = std::abs(big - two) / 15.0;
        const double budget = tol * std::max(h / span, 1e-6);
        if (err <= budget) {
            t += h;
            u = two;  // Richardson-preferred value
            if (err < 0.1 * budget) h *= 2.0;
        } else {
            h *= 0.5;
            if (h < 1e-14 * std::max(1.0, std::abs(span)))
                throw StepFailure("ode_flow: step size underflow before reaching tolerance");
        }
        if (++evals > 2'000'000)
            throw StepFailure("ode_flow: evaluation cap exceeded");
    }
    return u;
}

}  // namespace

double ode_flow(const ReactionEnv& env, double t0, double a0, double t1, double tol) {
    if (t1 < t0) throw ConfigError("ode_flow requires t1 >= t0");
    double t = t0, u = a0;
    while (t < t1) {
        const double sw = env.next_switch_after(t);
        const double t_stop = std::min(t1, sw);
        u = integrate_segment(env, t, u, t_stop, tol);
        t = t_stop;
    }
    return u;
}

namespace {

// Composite Simpson; exact for the cubic pieces of the companion.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

BistableCompanion::BistableCompanion(const ReactionEnv& env, double delta_B)
    : theta_(env.theta()), delta_B_(delta_B), a_min_(env.a_min()) {
    if (!(delta_B > 0.0)) throw ConfigError("delta_B must be positive");
    const auto fB = [this](double u) { return (*this)(u); };
    integral_ = simpson(fB, 0.0, theta_, 200) + simpson(fB, theta_, 1.0, 200);
    if (!(integral_ > 0.0))
        throw IntegralNonPositive("bistable companion integral is non-positive; shrink delta_B");
}

}  // namespace frontlab
