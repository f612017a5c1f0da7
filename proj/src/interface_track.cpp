#include "frontlab/interface_track.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frontlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double interp_at(const std::vector<double>& v, const Grid& g, double x) {
    const double s = (x - g.x_left) / g.dx;
    const auto i = static_cast<std::size_t>(std::clamp(s, 0.0, static_cast<double>(g.n - 2)));
    const double t = s - static_cast<double>(i);
    return v[i] * (1.0 - t) + v[i + 1] * t;
}
}  // namespace

double xi_lambda(const Field& field, double lambda) {
    const auto& u = field.u;
    const int n = field.grid.n;
    if (!(u.front() >= lambda && lambda > u.back()))
        throw LevelOutOfRange("level not attained on the window");
    // Monotone scan for the bracketing pair u[i] >= lambda > u[i+1].
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (u[mid] >= lambda ? lo : hi) = mid;
    }
    const double t = (u[lo] - lambda) / (u[lo] - u[hi]);
    return field.grid.x(lo) + t * field.grid.dx;
}

double xi_envelope(const Field& field, double kappa, double u_floor) {
    const double lambda = std::sqrt(kappa);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < field.grid.n; ++i) {
        if (field.u[i] <= u_floor) continue;
        best = std::max(best, field.grid.x(i) + std::log(field.u[i]) / lambda);
    }
    if (!std::isfinite(best)) throw AllBelowFloor("every node lies below the envelope floor");
    return best;
}

namespace {

// At the ignition level the third space derivative jumps across the
// crossing, so centered stencils touching it lose an order.  The region
// strictly ahead is reaction-free and smooth; a cubic through the four
// nodes ahead of xi gives u_x and u_xx there at full order, and
// u_t(xi) = u_xx(xi) + f(t, lambda).
bool tail_side_derivatives(const Field& field, double xi, double* ux, double* uxx) {
    const Grid& g = field.grid;
    const int j = static_cast<int>(std::ceil((xi - g.x_left) / g.dx + 1e-9));
    if (j < 0 || j + 3 >= g.n) return false;
    const double u0 = field.u[j], u1 = field.u[j + 1], u2 = field.u[j + 2], u3 = field.u[j + 3];
    const double d1 = u1 - u0, d2 = u2 - 2.0 * u1 + u0, d3 = u3 - 3.0 * u2 + 3.0 * u1 - u0;
    const double z = (xi - g.x(j)) / g.dx;  // in [-1, 0)
    const double a1 = d1, a2 = 0.5 * d2, a3 = d3 / 6.0;
    *ux = (a1 + a2 * (2.0 * z - 1.0) + a3 * (3.0 * z * z - 6.0 * z + 2.0)) / g.dx;
    *uxx = (2.0 * a2 + a3 * (6.0 * z - 6.0)) / (g.dx * g.dx);
    return true;
}

}  // namespace

double interface_speed(const Field& field, const Derivatives& d, double lambda,
                       double steep_floor) {
    const double xi = xi_lambda(field, lambda);
    const double ux = interp_at(d.ux, field.grid, xi);
    if (std::abs(ux) < steep_floor)
        throw DegenerateSlope("|u_x| below the speed-formula floor at the interface");
    const double ut = interp_at(d.ut, field.grid, xi);
    return -ut / ux;
}

double interface_speed_at_ignition(const Field& field, const ReactionEnv& env,
                                   double steep_floor) {
    const double theta = env.theta();
    const double xi = xi_lambda(field, theta);
    double ux, uxx;
    if (!tail_side_derivatives(field, xi, &ux, &uxx))
        return interface_speed(field, derivatives(field, env), theta, steep_floor);
    if (std::abs(ux) < steep_floor)
        throw DegenerateSlope("|u_x| below the speed-formula floor at the interface");
    const double ut = uxx + env.eval(field.t, theta);
    return -ut / ux;
}

double interface_speed(const Field& field, const ReactionEnv& env, double lambda,
                       double steep_floor) {
    if (std::abs(lambda - env.theta()) < 1e-12)
        return interface_speed_at_ignition(field, env, steep_floor);
    return interface_speed(field, derivatives(field, env), lambda, steep_floor);
}

Tracker::Tracker(const ReactionEnv& env, TrackerConfig cfg) : env_(&env) {
    if (cfg.levels.empty()) throw ConfigError("tracker needs at least one level");
    bool has_theta = false;
    for (double l : cfg.levels) has_theta |= std::abs(l - env.theta()) < 1e-12;
    if (!has_theta) cfg.levels.push_back(env.theta());
    std::sort(cfg.levels.begin(), cfg.levels.end());
    trace_.cfg = std::move(cfg);
    trace_.theta = env.theta();
}

void Tracker::operator()(const Field& field, const Derivatives& d) {
    TraceRow row;
    row.t = field.t;
    const auto& levels = trace_.cfg.levels;
    row.xi.reserve(levels.size());
    row.slope.reserve(levels.size());
    row.speed.reserve(levels.size());
    for (double l : levels) {
        const double xi = xi_lambda(field, l);
        const double ux = interp_at(d.ux, field.grid, xi);
        row.xi.push_back(xi);
        row.slope.push_back(ux);
        if (std::abs(ux) < trace_.cfg.steep_floor) {
            row.speed.push_back(kNaN);
        } else if (std::abs(l - trace_.theta) < 1e-12) {
            double tux, tuxx;
            if (tail_side_derivatives(field, xi, &tux, &tuxx) &&
                std::abs(tux) >= trace_.cfg.steep_floor)
                row.speed.push_back(-(tuxx + env_->eval(field.t, l)) / tux);
            else
                row.speed.push_back(-interp_at(d.ut, field.grid, xi) / ux);
        } else {
            row.speed.push_back(-interp_at(d.ut, field.grid, xi) / ux);
        }
    }
    row.xi_env = trace_.cfg.kappa > 0.0
                     ? xi_envelope(field, trace_.cfg.kappa, trace_.cfg.u_floor)
                     : kNaN;

    const double xi_theta = row.xi[trace_.level_index(trace_.theta)];
    const double R = trace_.cfg.slope_window_radius;
    const int i_lo = std::max(0, static_cast<int>(std::ceil((xi_theta - R - field.grid.x_left) /
                                                            field.grid.dx)));
    const int i_hi = std::min(field.grid.n - 1,
                              static_cast<int>(std::floor((xi_theta + R - field.grid.x_left) /
                                                          field.grid.dx)));
    row.ux_first_x = field.grid.x(i_lo);
    row.ux_dx = field.grid.dx;
    row.ux_window.assign(d.ux.begin() + i_lo, d.ux.begin() + i_hi + 1);
    trace_.rows.push_back(std::move(row));
}

int InterfaceTrace::level_index(double level) const {
    for (std::size_t i = 0; i < cfg.levels.size(); ++i)
        if (std::abs(cfg.levels[i] - level) < 1e-12) return static_cast<int>(i);
    throw ConfigError("level not tracked");
}

std::vector<double> InterfaceTrace::times() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.t);
    return out;
}

std::vector<double> InterfaceTrace::xi_series(double level) const {
    const int j = level_index(level);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.xi[j]);
    return out;
}

std::vector<double> InterfaceTrace::slope_series(double level) const {
    const int j = level_index(level);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.slope[j]);
    return out;
}

std::vector<double> InterfaceTrace::speed_series(double level) const {
    const int j = level_index(level);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.speed[j]);
    return out;
}

std::vector<double> InterfaceTrace::xi_env_series() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.xi_env);
    return out;
}

std::vector<double> InterfaceTrace::width_series(double l1, double l2) const {
    const auto a = xi_series(l1);
    const auto b = xi_series(l2);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::abs(a[i] - b[i]);
    return out;
}

double InterfaceTrace::WidthStats::max_over(double t_lo, double t_hi,
                                            const std::vector<double>& ts) const {
    double best = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i)
        if (ts[i] >= t_lo && ts[i] <= t_hi) best = std::max(best, series[i]);
    return best;
}

InterfaceTrace::WidthStats InterfaceTrace::width(double l1, double l2) const {
    WidthStats w;
    w.series = width_series(l1, l2);
    w.running_max.resize(w.series.size());
    double m = 0.0;
    for (std::size_t i = 0; i < w.series.size(); ++i) {
        m = std::max(m, w.series[i]);
        w.running_max[i] = m;
    }
    auto sorted = w.series;
    std::sort(sorted.begin(), sorted.end());
    w.median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    return w;
}

std::vector<double> InterfaceTrace::steepness_series(double M) const {
    const int j = level_index(theta);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        const double xi = r.xi[j];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r.ux_window.size(); ++i) {
            const double x = r.ux_first_x + static_cast<double>(i) * r.ux_dx;
            if (std::abs(x - xi) <= M) best = std::min(best, -r.ux_window[i]);
        }
        out.push_back(best);
    }
    return out;
}

std::vector<double> InterfaceTrace::speed_fd_series(double level) const {
    const auto xi = xi_series(level);
    const auto ts = times();
    std::vector<double> out(xi.size(), kNaN);
    for (std::size_t i = 1; i + 1 < xi.size(); ++i) {
        if (i >= 2 && i + 2 < xi.size()) {
            // fourth-order five-point stencil on the uniform cadence
            const double h = 0.5 * (ts[i + 1] - ts[i - 1]);
            out[i] = (-xi[i + 2] + 8.0 * xi[i + 1] - 8.0 * xi[i - 1] + xi[i - 2]) / (12.0 * h);
        } else {
            out[i] = (xi[i + 1] - xi[i - 1]) / (ts[i + 1] - ts[i - 1]);
        }
    }
    return out;
}

double InterfaceTrace::estimate_delay() const {
    if (rows.empty()) return 0.0;
    const auto ts = times();
    const double t_mid = 0.5 * (ts.front() + ts.back());

    // Last excursion of a series outside the band its settled second half
    // occupies (padded by a tenth of the band width).
    const auto settle_time = [&](const std::vector<double>& v, double floor_scale) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (ts[i] < t_mid || !std::isfinite(v[i])) continue;
            lo = std::min(lo, v[i]);
            hi = std::max(hi, v[i]);
        }
        const double pad = 0.1 * (hi - lo) + floor_scale;
        std::size_t first_ok = 0;
        for (std::size_t i = v.size(); i-- > 0;) {
            if (!std::isfinite(v[i])) continue;
            if (v[i] < lo - pad || v[i] > hi + pad) {
                first_ok = i + 1;
                break;
            }
        }
        return first_ok < ts.size() ? ts[first_ok] : ts.back();
    };

    // Steepness component: slope at the ignition level must stay at or above
    // half its long-run median.
    const int j = level_index(theta);
    std::vector<double> sigma;
    sigma.reserve(rows.size());
    for (const auto& r : rows) sigma.push_back(-r.slope[j]);
    std::vector<double> tail;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (ts[i] >= t_mid) tail.push_back(sigma[i]);
    std::sort(tail.begin(), tail.end());
    const double half_median = 0.5 * tail[tail.size() / 2];
    std::size_t first_ok = 0;
    for (std::size_t i = sigma.size(); i-- > 0;) {
        if (sigma[i] < half_median) {
            first_ok = i + 1;
            break;
        }
    }
    const double t_slope = first_ok < ts.size() ? ts[first_ok] : ts.back();

    // Shape-adjustment component: the interface speed must have entered the
    // stationary band it occupies over the settled half of the run.
    const double t_speed = settle_time(speed_series(theta), 1e-6);

    // The delay is strictly positive: even data starting on a clean wave
    // spend a short parabolic-smoothing layer adjusting, which the series
    // statistics cannot see.
    return std::max({t_slope, t_speed, ts.front() + 1.0});
}

}  // namespace frontlab
