#include "frontlab/wave_profile.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace frontlab {

namespace {

struct Knot {
    double x, phi, dphi;
};

// Outcome of one shot at a trial speed.
enum class Shot { Overshoot, Turnback, Converged };

// Backward shooting for the ignition wave written in y = -x, so the profile
// climbs from theta toward 1:  psi'' = c psi' - f(psi), psi(0) = theta,
// psi'(0) = c theta (the exact exponential tail data).
Shot shoot_ignition(const std::function<double(double)>& f, double theta, double c,
                    double y_max, std::vector<Knot>* knots) {
    const bool profile_mode = knots != nullptr;
    const double dy = 1e-3;
    double psi = theta, v = c * theta;
    if (knots) knots->push_back({0.0, psi, -v});  // dphi/dx = -dpsi/dy
    const auto rhs_v = [&](double p, double w) { return c * w - f(p); };
    double y = 0.0;
    while (y < y_max) {
        const double k1p = v, k1v = rhs_v(psi, v);
        const double k2p = v + 0.5 * dy * k1v, k2v = rhs_v(psi + 0.5 * dy * k1p, v + 0.5 * dy * k1v);
        const double k3p = v + 0.5 * dy * k2v, k3v = rhs_v(psi + 0.5 * dy * k2p, v + 0.5 * dy * k2v);
        const double k4p = v + dy * k3v, k4v = rhs_v(psi + dy * k3p, v + dy * k3v);
        psi += (dy / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        v += (dy / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        y += dy;
        if (knots) knots->push_back({-y, psi, -v});
        // Classification relies only on the unambiguous events; a grazing
        // orbit passes arbitrarily close to the target state first.
        if (psi >= 1.0 + 1e-9 && v > 0.0) return Shot::Overshoot;
        if (v <= 0.0) return psi >= 1.0 - 1e-10 ? Shot::Converged : Shot::Turnback;
        if (profile_mode && psi >= 1.0 - 1e-6) return Shot::Converged;
    }
    return psi >= 1.0 - 1e-10 ? Shot::Converged : Shot::Turnback;
}

// Forward shooting for the bistable wave from the unstable manifold at u = 1.
Shot shoot_bistable(const std::function<double(double)>& f, double mu_plus, double c,
                    double x_max, std::vector<Knot>* knots) {
    const bool profile_mode = knots != nullptr;
    const double dx = 1e-3;
    const double eps0 = 1e-6;
    double phi = 1.0 - eps0, v = -eps0 * mu_plus;
    if (knots) knots->push_back({0.0, phi, v});
    const auto rhs_v = [&](double p, double w) { return -c * w - f(p); };
    double x = 0.0;
    while (x < x_max) {
        const double k1p = v, k1v = rhs_v(phi, v);
        const double k2p = v + 0.5 * dx * k1v, k2v = rhs_v(phi + 0.5 * dx * k1p, v + 0.5 * dx * k1v);
        const double k3p = v + 0.5 * dx * k2v, k3v = rhs_v(phi + 0.5 * dx * k2p, v + 0.5 * dx * k2v);
        const double k4p = v + dx * k3v, k4v = rhs_v(phi + dx * k3p, v + dx * k3v);
        phi += (dx / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        v += (dx / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        x += dx;
        if (knots) knots->push_back({x, phi, v});
        if (phi <= -1e-9 && v < 0.0) return Shot::Overshoot;
        if (v >= 0.0) return phi <= 1e-10 ? Shot::Converged : Shot::Turnback;
        if (profile_mode && phi <= 1e-6) return Shot::Converged;
    }
    return phi <= 1e-10 ? Shot::Converged : Shot::Turnback;
}

// Bisection on the shooting dichotomy.  `raise_on_overshoot` encodes which
// side of the bracket an overshoot closes: the backward ignition shot
// overshoots when c is too large, the forward bistable shot when c is too
// small.
double bisect_speed(const std::function<Shot(double)>& shot, double lo, double hi,
                    bool overshoot_means_too_large, double tol, double* witness_over,
                    double* witness_under) {
    auto is_high_side = [&](Shot s) {
        if (s == Shot::Converged) return true;  // inside the unresolved sliver
        return overshoot_means_too_large ? (s == Shot::Overshoot) : (s == Shot::Turnback);
    };

    Shot s_lo = shot(lo), s_hi = shot(hi);
    int widen = 0;
    while ((is_high_side(s_lo) || !is_high_side(s_hi)) && widen < 4) {
        if (is_high_side(s_lo)) lo = std::max(lo / 4.0, 1e-9);
        if (!is_high_side(s_hi)) hi *= 4.0;
        s_lo = shot(lo);
        s_hi = shot(hi);
        ++widen;
    }
    if (is_high_side(s_lo) || !is_high_side(s_hi))
        throw BracketFailure("speed bracket does not exhibit the shooting dichotomy");

    // Bisect to machine depth: the profile integration at the returned speed
    // must hug the connecting orbit well past the requested tolerance, or the
    // unstable mode contaminates the deep tail.
    for (int it = 0; it < 120 && hi - lo > 1e-15 * std::max(1.0, lo); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (is_high_side(shot(mid)))
            hi = mid;
        else
            lo = mid;
    }
    const double c = 0.5 * (lo + hi);
    if (hi - lo > tol * std::max(1.0, c))
        throw NonConvergence("speed bisection exceeded its iteration cap");

    // Dichotomy witnesses at c (1 +/- 10 tol).
    const double c_hi = c * (1.0 + 10.0 * tol), c_lo = c * (1.0 - 10.0 * tol);
    if (!is_high_side(shot(c_hi)) || is_high_side(shot(c_lo)))
        throw NonConvergence("dichotomy witnesses failed at the returned speed");
    if (witness_over) *witness_over = overshoot_means_too_large ? c_hi : c_lo;
    if (witness_under) *witness_under = overshoot_means_too_large ? c_lo : c_hi;
    return c;
}

// Cubic Hermite evaluation of (phi, phi') between knots, then resampling on
// a uniform grid.
void resample(const std::vector<Knot>& knots, double dx, std::vector<double>* phi,
              std::vector<double>* dphi, double* x_lo, double* x_hi) {
    assert(knots.size() >= 2);
    auto sorted = knots;
    if (sorted.front().x > sorted.back().x) std::reverse(sorted.begin(), sorted.end());
    *x_lo = std::ceil(sorted.front().x / dx) * dx;
    *x_hi = std::floor(sorted.back().x / dx) * dx;
    const int n = static_cast<int>(std::llround((*x_hi - *x_lo) / dx)) + 1;
    phi->resize(n);
    dphi->resize(n);
    std::size_t seg = 0;
    for (int i = 0; i < n; ++i) {
        const double x = *x_lo + i * dx;
        while (seg + 2 < sorted.size() && sorted[seg + 1].x < x) ++seg;
        const Knot& a = sorted[seg];
        const Knot& b = sorted[seg + 1];
        const double h = b.x - a.x;
        const double t = std::clamp((x - a.x) / h, 0.0, 1.0);
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        (*phi)[i] = h00 * a.phi + h10 * h * a.dphi + h01 * b.phi + h11 * h * b.dphi;
        const double d00 = 6 * t * (t - 1), d10 = (1 - t) * (1 - 3 * t);
        const double d01 = -d00, d11 = t * (3 * t - 2);
        (*dphi)[i] = (d00 * a.phi + d01 * b.phi) / h + d10 * a.dphi + d11 * b.dphi;
    }
}

double max_residual(const WaveProfile& w, const std::function<double(double)>& f) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < w.phi.size(); ++i) {
        const double d2 = (w.phi[i + 1] - 2.0 * w.phi[i] + w.phi[i - 1]) / (w.dx * w.dx);
        const double d1 = (w.phi[i + 1] - w.phi[i - 1]) / (2.0 * w.dx);
        worst = std::max(worst, std::abs(d2 + w.speed * d1 + f(w.phi[i])));
    }
    return worst;
}

double one_sided_derivative_at_one(const std::function<double(double)>& f) {
    const double h = 1e-6;
    return (f(1.0) - f(1.0 - h)) / h;
}

}  // namespace

double WaveProfile::value(double x) const {
    if (kind == Kind::Ignition && x >= 0.0) return theta * std::exp(-speed * x);
    if (x <= x_lo) return phi.front();
    if (x >= x_hi) return phi.back();
    const double s = (x - x_lo) / dx;
    const auto i = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(i);
    return phi[i] * (1.0 - t) + phi[i + 1] * t;
}

double WaveProfile::derivative(double x) const {
    if (kind == Kind::Ignition && x >= 0.0) return -speed * theta * std::exp(-speed * x);
    if (x <= x_lo) return dphi.front();
    if (x >= x_hi) return dphi.back();
    const double s = (x - x_lo) / dx;
    const auto i = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(i);
    return dphi[i] * (1.0 - t) + dphi[i + 1] * t;
}

WaveProfile solve_ignition_wave(const std::function<double(double)>& f, double theta,
                                double tol, double bracket_hint) {
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must lie in (0,1)");
    const double y_max = 400.0;
    const auto shot = [&](double c) { return shoot_ignition(f, theta, c, y_max, nullptr); };

    double amp = 0.0;
    for (int i = 1; i < 64; ++i) amp = std::max(amp, f(theta + (1.0 - theta) * i / 64.0));
    double lo = 1e-3, hi = bracket_hint > 0.0 ? bracket_hint : 10.0 * std::sqrt(std::max(amp, 1e-4));

    WaveProfile w;
    w.kind = WaveProfile::Kind::Ignition;
    w.theta = theta;
    w.tol = tol;
    w.speed = bisect_speed(shot, lo, hi, /*overshoot_means_too_large=*/true, tol,
                           &w.c_over, &w.c_under);

    std::vector<Knot> knots;
    shoot_ignition(f, theta, w.speed, y_max, &knots);
    // Drop any departed end segment, then extend analytically along the
    // stable direction at u = 1 until the behind-tail tolerance 1e-8 is met.
    while (knots.size() > 2 && knots.back().phi > 1.0 - 0.5e-6) knots.pop_back();
    const double fp1 = one_sided_derivative_at_one(f);
    const double nu = 0.5 * (w.speed - std::sqrt(w.speed * w.speed - 4.0 * fp1));  // < 0
    double gap = 1.0 - knots.back().phi;
    if (gap > 1e-8 && gap < 1e-3) {
        double x = knots.back().x;  // negative end
        while (gap > 1e-8) {
            x -= 0.05;
            gap *= std::exp(-std::abs(nu) * 0.05);
            knots.push_back({x, 1.0 - gap, -std::abs(nu) * gap});
        }
    }
    resample(knots, w.dx, &w.phi, &w.dphi, &w.x_lo, &w.x_hi);

    // Append the exact exponential tail on x >= 0.
    const double tail_end = std::max(40.0, std::ceil(std::log(theta / 1e-8) / w.speed));
    const int n_tail = static_cast<int>(std::llround((tail_end - w.x_hi) / w.dx));
    w.phi.reserve(w.phi.size() + n_tail);
    for (int i = 1; i <= n_tail; ++i) {
        const double x = w.x_hi + i * w.dx;
        w.phi.push_back(theta * std::exp(-w.speed * x));
        w.dphi.push_back(-w.speed * theta * std::exp(-w.speed * x));
    }
    w.x_hi = tail_end;
    w.residual_max = max_residual(w, f);
    return w;
}

WaveProfile solve_bistable_wave(const std::function<double(double)>& f_B,
                                double normalize_level, double tol) {
    const double fp1 = one_sided_derivative_at_one(f_B);
    if (!(fp1 < 0.0)) throw ConfigError("bistable nonlinearity needs f'(1) < 0");
    const double x_max = 400.0;

    double amp = 0.0;
    for (int i = 1; i < 64; ++i) amp = std::max(amp, f_B(i / 64.0));
    if (!(amp > 0.0)) throw ConfigError("bistable nonlinearity has no positive part");

    const auto shot = [&](double c) {
        const double mu = 0.5 * (-c + std::sqrt(c * c - 4.0 * fp1));
        return shoot_bistable(f_B, mu, c, x_max, nullptr);
    };

    WaveProfile w;
    w.kind = WaveProfile::Kind::Bistable;
    w.theta = normalize_level;
    w.tol = tol;
    w.speed = bisect_speed(shot, 1e-3, 10.0 * std::sqrt(amp),
                           /*overshoot_means_too_large=*/false, tol, &w.c_over, &w.c_under);

    std::vector<Knot> knots;
    const double mu = 0.5 * (-w.speed + std::sqrt(w.speed * w.speed - 4.0 * fp1));
    // Prepend the linearized approach to 1 down to the 1e-8 tolerance.
    {
        double eps = 1e-6;
        std::vector<Knot> head;
        double x = 0.0;
        for (int it = 0; eps > 1e-8 && it < 10000; ++it) {
            x -= 0.05;
            eps *= std::exp(-mu * 0.05);
            head.push_back({x, 1.0 - eps, -mu * eps});
        }
        std::reverse(head.begin(), head.end());
        knots = std::move(head);
    }
    shoot_bistable(f_B, mu, w.speed, x_max, &knots);
    // Drop any departed end segment and extend to 1e-8 along the stable
    // eigendirection of the rest state.
    while (knots.size() > 2 && knots.back().phi < 0.5e-6) knots.pop_back();
    {
        const double h = 1e-6;
        const double fp0 = (f_B(h) - f_B(0.0)) / h;
        const double mu_minus = 0.5 * (-w.speed - std::sqrt(w.speed * w.speed - 4.0 * fp0));
        double tail = knots.back().phi;
        double x = knots.back().x;
        for (int it = 0; tail > 1e-8 && it < 10000; ++it) {
            x += 0.05;
            tail *= std::exp(mu_minus * 0.05);
            knots.push_back({x, tail, mu_minus * tail});
        }
    }

    // Normalize so the profile crosses `normalize_level` at x = 0.
    double x_cross = 0.0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (knots[i].phi >= normalize_level && knots[i + 1].phi < normalize_level) {
            const double t = (knots[i].phi - normalize_level) / (knots[i].phi - knots[i + 1].phi);
            x_cross = knots[i].x + t * (knots[i + 1].x - knots[i].x);
            found = true;
            break;
        }
    }
    if (!found) throw LevelOutOfRange("normalization level not attained by the bistable profile");
    for (auto& k : knots) k.x -= x_cross;

    resample(knots, w.dx, &w.phi, &w.dphi, &w.x_lo, &w.x_hi);
    w.residual_max = max_residual(w, f_B);
    return w;
}

WaveProfile solve_bistable_wave(const BistableCompanion& f_B, double tol) {
    return solve_bistable_wave([&f_B](double u) { return f_B(u); }, f_B.theta(), tol);
}

KppParams kpp_envelope_params(double kappa) {
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    const double lambda = std::sqrt(kappa);
    const double c_star = 2.0 * lambda;
    const double residual = lambda * lambda - c_star * lambda + kappa;  // = kappa - lambda^2
    if (std::abs(residual) > 8.0 * std::numeric_limits<double>::epsilon() * kappa)
        throw Error("kpp envelope identity failed beyond rounding");
    return {lambda, c_star};
}

EnvelopeBound envelope_speed_bound(const std::function<double(double)>& f_max, double kappa) {
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    EnvelopeBound b;
    b.kappa0 = sup_ratio_over_unit_interval(f_max);
    b.lambda_kappa = std::sqrt(kappa);
    b.c_kappa0 = b.kappa0 / b.lambda_kappa + b.lambda_kappa;
    return b;
}

EnvelopeBound envelope_speed_bound(const ReactionEnv& env, double kappa) {
    return envelope_speed_bound([&env](double u) { return env.f_max(u); }, kappa);
}

double level_kappa_crossing(const ReactionEnv& env, double kappa) {
    const auto h = [&](double u) { return env.f_max(u) - kappa * u; };
    const int n = 20000;
    double prev_u = env.theta(), prev_h = h(prev_u);
    for (int i = 1; i <= n; ++i) {
        const double u = env.theta() + (1.0 - env.theta()) * i / n;
        const double hu = h(u);
        if (prev_h < 0.0 && hu >= 0.0) {
            double lo = prev_u, hi = u;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                (h(mid) < 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_u = u;
        prev_h = hu;
    }
    throw ConfigError("no crossing f_max(u) = kappa u: kappa at or above the growth bound");
}

}  // namespace frontlab
