#include "frontlab/front_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frontlab {

namespace {

struct SnapshotRecorder {
    double every;
    std::vector<Snapshot>* out;

    void operator()(const Field& f, const Derivatives&) const {
        const double k = std::round(f.t / every);
        if (std::abs(f.t - k * every) > 1e-9 * std::max(1.0, std::abs(f.t))) return;
        out->push_back({f.t, f.grid, f.u});
    }
};

}  // namespace

double Snapshot::value(double x) const {
    if (x <= grid.x_left) return x < grid.x_left ? 1.0 : u.front();
    if (x >= grid.x_right()) return x > grid.x_right() ? 0.0 : u.back();
    const double s = (x - grid.x_left) / grid.dx;
    const auto i = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(i);
    return u[i] * (1.0 - t) + u[i + 1] * t;
}

const Snapshot& RunRecord::at(double t) const {
    if (snapshots.empty()) throw InsufficientSnapshots("run holds no snapshots");
    const Snapshot* best = &snapshots.front();
    for (const auto& s : snapshots)
        if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
    return *best;
}

double find_shift(const ReactionEnv& env, const WaveProfile& phi, double s, double tol,
                  const StepperConfig& cfg, double c_min) {
    if (!(s < 0.0)) throw ConfigError("find_shift requires s < 0");
    const double M = env.growth_bound();
    const double c_sup = c_min + M / c_min;  // exponential sup-solution speed

    // The trial evolutions only need the window to hold both tails around
    // the traveling front, not the caller's full observation window.
    StepperConfig trial = cfg;
    trial.window_width = std::min(cfg.window_width, 160.0);
    trial.shift_margin = std::min(cfg.shift_margin, 0.25 * trial.window_width);

    const auto u_origin = [&](double y) {
        Field f = make_front_field(phi, y, s, trial.dx, trial.window_width);
        evolve(f, env, trial, 0.0);
        return f.value(0.0);
    };

    double pad = 10.0;
    double y_hi = c_min * s + pad;  // sub-solution translate keeps u(0,0) > theta here
    double y_lo = c_sup * s - pad;  // sup-solution pushes u(0,0) below theta here
    int widen = 0;
    while (widen <= 4) {
        if (u_origin(y_hi) > env.theta() && u_origin(y_lo) < env.theta()) break;
        pad *= 4.0;
        y_hi = c_min * s + pad;
        y_lo = c_sup * s - pad;
        ++widen;
    }
    if (widen > 4) throw BracketFailure("find_shift bracket failed after widening");

    double lo = y_lo, hi = y_hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double val = u_origin(mid);
        if (std::abs(val - env.theta()) <= tol) return mid;
        (val > env.theta() ? hi : lo) = mid;
        if (hi - lo < 1e-13 * std::max(1.0, std::abs(mid))) {
            if (std::abs(u_origin(mid) - env.theta()) <= 10.0 * tol) return mid;
            throw NonConvergence("find_shift bracket underflow before tolerance");
        }
    }
    throw NonConvergence("find_shift exceeded its iteration cap");
}

RunRecord run_approximating(const ReactionEnv& env, const WaveProfile& phi, double s,
                            double t_end, const StepperConfig& cfg, const RunOptions& opt,
                            double c_min) {
    if (s > t_end) throw ConfigError("run_approximating requires s <= t_end");
    RunRecord run;
    run.s = s;
    run.t_end = t_end;
    run.theta = env.theta();
    run.dx = cfg.dx;
    run.dt = cfg.dt;
    run.cfg = cfg;
    run.x_s = s < 0.0 ? find_shift(env, phi, s, opt.shift_tol, cfg, c_min) : 0.0;

    Field f = make_front_field(phi, run.x_s, s, cfg.dx, cfg.window_width);
    Tracker tracker(env, opt.tracker);
    const double snap_every = std::max(opt.snapshot_every, opt.observe_every);

    std::vector<Observer> obs;
    obs.emplace_back(std::ref(tracker));
    obs.push_back(SnapshotRecorder{snap_every, &run.snapshots});
    double u00 = std::numeric_limits<double>::quiet_NaN();
    obs.push_back([&u00](const Field& field, const Derivatives&) {
        if (std::abs(field.t) < 1e-9) u00 = field.value(0.0);
    });

    evolve(f, env, cfg, t_end, obs, opt.observe_every);
    run.trace = tracker.take();
    run.u00 = u00;
    return run;
}

namespace {

// Sup-norm distance between two snapshots over the overlap of their windows.
double snapshot_gap(const Snapshot& a, const Snapshot& b) {
    const double dx = a.grid.dx;
    const auto off = static_cast<long long>(std::llround((b.grid.x_left - a.grid.x_left) / dx));
    double worst = 0.0;
    for (int i = 0; i < a.grid.n; ++i) {
        const long long j = static_cast<long long>(i) - off;
        if (j < 0 || j >= b.grid.n) continue;
        worst = std::max(worst, std::abs(a.u[i] - b.u[static_cast<int>(j)]));
    }
    return worst;
}

}  // namespace

FrontEstimate build_front(const ReactionEnv& env, const WaveProfile& phi,
                          const std::vector<double>& s_list, double t_end,
                          const StepperConfig& cfg, const RunOptions& opt, double c_min,
                          double cauchy_tol) {
    if (s_list.size() < 2) throw ConfigError("build_front needs at least two starts");
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        if (!(s_list[i] < 0.0)) throw ConfigError("starts must be negative");
        if (i > 0 && !(s_list[i] < s_list[i - 1]))
            throw ConfigError("starts must be strictly decreasing");
    }

    FrontEstimate est;
    est.s_list = s_list;
    std::vector<RunRecord> runs;
    runs.reserve(s_list.size());
    for (double s : s_list) {
        runs.push_back(run_approximating(env, phi, s, t_end, cfg, opt, c_min));
        est.x_s.push_back(runs.back().x_s);
    }

    for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
        double gap = 0.0;
        for (const auto& snap : runs[k].snapshots) {
            if (snap.t < 0.0) continue;
            for (const auto& other : runs[k + 1].snapshots) {
                if (std::abs(other.t - snap.t) < 1e-9) {
                    gap = std::max(gap, snapshot_gap(snap, other));
                    break;
                }
            }
        }
        est.gaps.push_back(gap);
    }

    if (est.gaps.back() > cauchy_tol)
        throw NonCauchy("successive-run gaps did not reach tolerance", est.gaps);

    for (double off = -40.0; off <= 40.0 + 1e-12; off += cfg.dx) est.profile_offsets.push_back(off);
    const auto centered = [&](const RunRecord& r) {
        const Snapshot& snap = r.snapshots.back();
        const Field f{snap.grid, snap.t, snap.u, {1.0, 0.0}};
        return front_centered_profile(snap, xi_lambda(f, env.theta()), est.profile_offsets);
    };
    est.profile_prev = centered(runs[runs.size() - 2]);
    est.profile_deepest = centered(runs.back());

    est.deepest = std::move(runs.back());
    const auto ts = est.deepest.trace.times();
    const auto xi = est.deepest.trace.xi_series(env.theta());
    double t0 = ts.front(), xi0 = xi.front();
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] >= 0.0) {
            t0 = ts[i];
            xi0 = xi[i];
            break;
        }
    est.speed_estimate = (xi.back() - xi0) / (ts.back() - t0);
    return est;
}

double measure_front_speed(const ReactionEnv& env, const WaveProfile& phi,
                           const StepperConfig& cfg, double t_from, double t_to) {
    Field f = make_front_field(phi, 0.0, 0.0, cfg.dx, cfg.window_width);
    evolve(f, env, cfg, t_from);
    const double xi0 = xi_lambda(f, env.theta());
    evolve(f, env, cfg, t_to);
    const double xi1 = xi_lambda(f, env.theta());
    return (xi1 - xi0) / (t_to - t_from);
}

std::vector<double> front_centered_profile(const Snapshot& snap, double xi,
                                           const std::vector<double>& offsets) {
    std::vector<double> out;
    out.reserve(offsets.size());
    for (double off : offsets) out.push_back(snap.value(xi + off));
    return out;
}

PeriodicWave periodic_wave(const ReactionEnv& env, const WaveProfile& phi,
                           const StepperConfig& cfg, double per_tol, double burn_in,
                           int max_periods) {
    if (env.model().kind() != AmplitudeKind::Periodic)
        throw ConfigError("periodic_wave requires a periodic amplitude model");
    const double T = env.model().period();

    PeriodicWave wave;
    wave.period = T;
    for (double off = -60.0; off <= 60.0 + 1e-12; off += cfg.dx) wave.offsets.push_back(off);

    Field f = make_front_field(phi, 0.0, 0.0, cfg.dx, cfg.window_width);
    const double t0 = std::ceil(burn_in / T) * T;
    evolve(f, env, cfg, t0);

    const auto capture = [&](const Field& field, double* xi_out) {
        const double xi = xi_lambda(field, env.theta());
        *xi_out = xi;
        std::vector<double> psi;
        psi.reserve(wave.offsets.size());
        for (double off : wave.offsets) psi.push_back(field.value(xi + off));
        return psi;
    };

    double xi_prev = 0.0;
    std::vector<double> prev = capture(f, &xi_prev);
    int k_conv = -1;
    for (int k = 1; k <= max_periods; ++k) {
        evolve(f, env, cfg, t0 + k * T);
        double xi_now = 0.0;
        const auto cur = capture(f, &xi_now);
        double r = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) r = std::max(r, std::abs(cur[i] - prev[i]));
        wave.residuals.push_back(r);
        wave.period_displacements.push_back(xi_now - xi_prev);
        prev = cur;
        xi_prev = xi_now;
        if (r <= per_tol) {
            k_conv = k;
            break;
        }
    }
    if (k_conv < 0)
        throw NoContraction("period map did not contract below tolerance within the cap");

    wave.c_T = wave.period_displacements.back() / T;
    wave.t_converged = t0 + k_conv * T;
    wave.profile = prev;

    // One more period, densely recorded, for the profile-equation residual
    // psi_t = psi_xx + c_T psi_x + f(t, psi) in the frame moving at c_T.
    const double dt_obs = T / 50.0;
    std::vector<Snapshot> dense;
    std::vector<Observer> obs{SnapshotRecorder{dt_obs, &dense}};
    const double t_ref = wave.t_converged;
    const double b = xi_prev;
    evolve(f, env, cfg, t_ref + T, obs, dt_obs);

    wave.kink_exclusion_radius = 3.0 * cfg.dx;
    double worst = 0.0, worst_full = 0.0;
    for (std::size_t j = 1; j + 1 < dense.size(); ++j) {
        const Snapshot& sj = dense[j];
        const double shift_j = b + wave.c_T * (sj.t - t_ref);
        const double dxg = sj.grid.dx;
        const Field as_field{sj.grid, sj.t, sj.u, {1.0, 0.0}};
        const double xi_here = xi_lambda(as_field, env.theta());
        for (int i = 1; i + 1 < sj.grid.n; ++i) {
            const double x_tilde = sj.grid.x(i) - shift_j;
            if (x_tilde < -30.0 || x_tilde > 30.0) continue;
            const double psi_x = (sj.u[i + 1] - sj.u[i - 1]) / (2.0 * dxg);
            const double psi_xx = (sj.u[i + 1] - 2.0 * sj.u[i] + sj.u[i - 1]) / (dxg * dxg);
            const double ahead = dense[j + 1].value(x_tilde + b + wave.c_T * (dense[j + 1].t - t_ref));
            const double behind = dense[j - 1].value(x_tilde + b + wave.c_T * (dense[j - 1].t - t_ref));
            const double psi_t = (ahead - behind) / (dense[j + 1].t - dense[j - 1].t);
            const double res =
                std::abs(psi_t - psi_xx - wave.c_T * psi_x - env.eval(sj.t, sj.u[i]));
            worst_full = std::max(worst_full, res);
            // The centered second difference does not see the derivative
            // kink carried by the moving ignition point; skip its layer.
            if (std::abs(sj.grid.x(i) - xi_here) > wave.kink_exclusion_radius)
                worst = std::max(worst, res);
        }
    }
    wave.profile_equation_residual = worst;
    wave.profile_equation_residual_full = worst_full;
    return wave;
}

}  // namespace frontlab
