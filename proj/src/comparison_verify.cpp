#include "frontlab/comparison_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frontlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const TraceRow* row_at(const InterfaceTrace& trace, double t) {
    for (const auto& r : trace.rows)
        if (std::abs(r.t - t) < 1e-7) return &r;
    return nullptr;
}

struct Margin {
    double value = kInf;
    double t = 0.0, x = 0.0;
    void update(double m, double at_t, double at_x) {
        if (m < value) {
            value = m;
            t = at_t;
            x = at_x;
        }
    }
};

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

double supersolution_speed(const ReactionEnv& env, double c_min, double dx, double dt) {
    const double M = env.growth_bound();
    // Discrete diffusion amplifies the exp(-c_min x) mode at rate
    // -ln(1 - dt mu)/dt with mu = (2/dx^2)(cosh(c_min dx) - 1) >= c_min^2,
    // so the barrier speed must absorb that in place of c_min^2.
    const double mu = 2.0 * (std::cosh(c_min * dx) - 1.0) / (dx * dx);
    const double diffusion_rate = -std::log1p(-dt * mu) / dt;
    return (M + diffusion_rate) / c_min + 1e-9;
}

double envelope_offset(const WaveProfile& phi, double rate) {
    double best = -kInf;
    for (std::size_t i = 0; i < phi.phi.size(); ++i) {
        if (phi.phi[i] <= 0.0) continue;
        const double x = phi.x_lo + static_cast<double>(i) * phi.dx;
        best = std::max(best, x + std::log(phi.phi[i]) / rate);
    }
    return best;
}

CheckReport check_super_exponential(const RunRecord& run, const ReactionEnv& env,
                                    double c_min, double c, double y0, double tol) {
    CheckReport rep;
    rep.name = "super_exponential";
    rep.tolerance = tol;
    rep.values["c"] = c;
    rep.values["y0"] = y0;
    rep.values["c_min"] = c_min;
    const double M = env.growth_bound();
    rep.values["growth_bound"] = M;
    rep.values["growth_condition_slack"] = c_min * (c - c_min) - M;

    Margin margin;
    for (const auto& snap : run.snapshots) {
        for (int i = 0; i < snap.grid.n; ++i) {
            const double arg = snap.grid.x(i) - run.x_s - y0 - c * (snap.t - run.s);
            const double bound = -c_min * arg > 30.0 ? kInf : std::exp(-c_min * arg);
            // Nodes where the barrier exceeds 2 are trivially satisfied.
            if (bound <= 2.0) margin.update(bound - snap.u[i], snap.t, snap.grid.x(i));
        }
    }
    rep.worst_margin = margin.value;
    rep.worst_t = margin.t;
    rep.worst_x = margin.x;
    rep.pass = rep.worst_margin >= -tol && rep.values["growth_condition_slack"] >= 0.0;
    return rep;
}

CheckReport check_lower_translate(const RunRecord& run, const ReactionEnv& env,
                                  const WaveProfile& phi, double c_min, double tol,
                                  double companion_amplitude) {
    CheckReport rep;
    rep.name = "lower_translate";
    rep.tolerance = tol;
    const double a_floor = companion_amplitude > 0.0 ? companion_amplitude : env.a_min();
    rep.values["companion_amplitude"] = a_floor;
    rep.values["c_min"] = c_min;

    // Same-schedule frozen-floor comparison run from the same initial data.
    ReactionEnv floor_env(env.theta(), AmplitudeModel::constant(a_floor));
    Field v = make_front_field(phi, run.x_s, run.s, run.cfg.dx, run.cfg.window_width);

    Margin margin;
    Margin literal;
    double xi_slack = kInf;
    for (const auto& snap : run.snapshots) {
        evolve(v, floor_env, run.cfg, snap.t, {}, 0.0, &env.model());
        const auto off =
            static_cast<long long>(std::llround((v.grid.x_left - snap.grid.x_left) / snap.grid.dx));
        for (int i = 0; i < snap.grid.n; ++i) {
            const long long j = static_cast<long long>(i) - off;
            const double x = snap.grid.x(i);
            if (j >= 0 && j < v.grid.n)
                margin.update(snap.u[i] - v.u[static_cast<long long>(j)], snap.t, x);
            literal.update(snap.u[i] - phi.value(x - run.x_s - c_min * (snap.t - run.s)),
                           snap.t, x);
        }
        const auto* row = row_at(run.trace, snap.t);
        if (row != nullptr) {
            const double xi = row->xi[run.trace.level_index(run.theta)];
            xi_slack = std::min(xi_slack, xi - (run.x_s + c_min * (snap.t - run.s)));
        }
    }
    rep.worst_margin = margin.value;
    rep.worst_t = margin.t;
    rep.worst_x = margin.x;
    rep.values["literal_translate_margin"] = literal.value;
    rep.values["xi_minus_translate"] = xi_slack;
    rep.pass = rep.worst_margin >= -tol;
    return rep;
}

CheckReport check_omega_pair(const ReactionEnv& env, const WaveProfile& phi, double c_min,
                             double t0, double delta, double horizon, double c_init,
                             int max_doublings) {
    if (!(delta > 0.0 && delta < 1.0 - env.theta()))
        throw ConfigError("delta must lie in (0, 1 - theta)");
    const double theta = env.theta();
    const double dt_grid = 0.1, dz = 0.02, z_lo = -40.0, z_hi = 50.0;

    // Cache the two reaction flows on the time grid.
    const int nt = static_cast<int>(std::floor(horizon / dt_grid)) + 1;
    std::vector<double> ts(nt), U(nt), V(nt);
    for (int j = 0; j < nt; ++j) ts[j] = t0 + j * dt_grid;
    U[0] = 1.0 + delta;
    V[0] = theta + delta;
    for (int j = 1; j < nt; ++j) {
        U[j] = ode_flow(env, ts[j - 1], U[j - 1], ts[j]);
        V[j] = ode_flow(env, ts[j - 1], V[j - 1], ts[j]);
    }

    const auto worst_residuals = [&](double C, double* sup_neg, double* sub_pos,
                                     double* at_t, double* at_z) {
        *sup_neg = kInf;   // min of N_+ (must stay >= 0)
        *sub_pos = -kInf;  // max of N_- (must stay <= 0)
        for (int j = 0; j < nt; ++j) {
            const double t = ts[j];
            for (double z = z_lo; z <= z_hi; z += dz) {
                const double p = phi.value(z), dp = phi.derivative(z);
                const double fmin = env.f_min(p);
                {
                    const double w = (theta - delta) * (1.0 - p) + U[j] * p;
                    const double n_plus = (theta - delta - U[j]) * ((C - c_min) * dp - fmin) +
                                          env.eval(t, U[j]) * p - env.eval(t, w);
                    if (n_plus < *sup_neg) {
                        *sup_neg = n_plus;
                        *at_t = t;
                        *at_z = z;
                    }
                }
                {
                    const double w = -delta * (1.0 - p) + V[j] * p;
                    const double n_minus = (V[j] + delta) * ((C + c_min) * dp + fmin) +
                                           env.eval(t, V[j]) * p - env.eval(t, w);
                    *sub_pos = std::max(*sub_pos, n_minus);
                }
            }
        }
    };

    CheckReport rep;
    rep.name = "omega_pair";
    rep.values["delta"] = delta;
    rep.values["horizon"] = horizon;
    double C = c_init > 0.0 ? c_init : 2.0 * c_min;
    const double eps = 1e-11;
    for (int d = 0; d <= max_doublings; ++d, C *= 2.0) {
        double sup_neg = kInf, sub_pos = -kInf, at_t = t0, at_z = 0.0;
        worst_residuals(C, &sup_neg, &sub_pos, &at_t, &at_z);
        if (sup_neg >= -eps && sub_pos <= eps) {
            rep.pass = true;
            rep.worst_margin = std::min(sup_neg, -sub_pos);
            rep.worst_t = at_t;
            rep.worst_x = at_z;
            rep.values["C"] = C;
            rep.values["sup_residual_min"] = sup_neg;
            rep.values["sub_residual_max"] = sub_pos;
            return rep;
        }
    }
    throw NoAdmissibleC("no admissible comparison speed within the doubling cap");
}

BehindDecayParams scan_behind_params(const RunRecord& run, const ReactionEnv& env,
                                     double lambda0) {
    BehindDecayParams p;
    p.lambda0 = lambda0;
    p.delay = run.trace.estimate_delay();

    double ratio_min = kInf;
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        const double u = lambda0 + (1.0 - 1e-6 - lambda0) * i / n;
        ratio_min = std::min(ratio_min, env.shape(u) / (1.0 - u));
    }
    p.beta0 = env.a_min() * ratio_min;

    const auto speeds = run.trace.speed_series(lambda0);
    const auto ts = run.trace.times();
    const auto xi_t = run.trace.xi_series(run.theta);
    const auto xi_l = run.trace.xi_series(lambda0);
    double c_max = 0.0, width = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < p.delay) continue;
        if (std::isfinite(speeds[i])) c_max = std::max(c_max, std::abs(speeds[i]));
        width = std::max(width, xi_t[i] - xi_l[i]);
    }
    p.c_lambda0 = c_max;
    p.width = width;
    p.rate = 0.5 * (-c_max + std::sqrt(c_max * c_max + 4.0 * p.beta0));
    return p;
}

CheckReport check_decay_behind(const RunRecord& run, const ReactionEnv& env,
                               const BehindDecayParams& p, double tol) {
    CheckReport rep;
    rep.name = "decay_behind";
    rep.tolerance = tol;
    rep.values["lambda0"] = p.lambda0;
    rep.values["beta0"] = p.beta0;
    rep.values["rate"] = p.rate;
    rep.values["c_lambda0"] = p.c_lambda0;
    rep.values["width"] = p.width;
    rep.values["delay"] = p.delay;
    (void)env;

    Margin margin;
    for (const auto& snap : run.snapshots) {
        if (snap.t < run.s + p.delay) continue;
        const auto* row = row_at(run.trace, snap.t);
        if (row == nullptr) continue;
        const double xi = row->xi[run.trace.level_index(run.theta)];
        const double early = std::exp(-p.beta0 * (snap.t - run.s));
        for (int i = 0; i < snap.grid.n; ++i) {
            const double x_rel = snap.grid.x(i) - xi;
            if (x_rel > -p.width) continue;
            const double floor =
                1.0 - (1.0 - p.lambda0) * (early + std::exp(p.rate * (x_rel + p.width)));
            margin.update(snap.u[i] - floor, snap.t, snap.grid.x(i));
        }
    }
    rep.worst_margin = margin.value;
    rep.worst_t = margin.t;
    rep.worst_x = margin.x;
    rep.pass = rep.worst_margin >= -tol;
    return rep;
}

CheckReport check_decay_ahead(const RunRecord& run, const AheadDecayOptions& opt) {
    CheckReport rep;
    rep.name = "decay_ahead";
    rep.tolerance = opt.pointwise_slack;
    const double theta = run.theta;
    const double delay = run.trace.estimate_delay();
    const double t_cal_end = delay + 0.25 * (run.t_end - delay);
    rep.values["delay"] = delay;
    rep.values["calibration_end"] = t_cal_end;

    const int j_theta = run.trace.level_index(theta);
    double c_cal = kInf;
    std::vector<std::pair<double, double>> later;  // (t, xi) of assertion rows

    double inf_fitted = kInf;
    double slope_min = kInf;
    struct Row {
        double t, xi;
    };
    std::vector<Row> assert_rows;

    for (const auto& snap : run.snapshots) {
        if (snap.t < delay) continue;
        const auto* row = row_at(run.trace, snap.t);
        if (row == nullptr) continue;
        const double xi = row->xi[j_theta];
        slope_min = std::min(slope_min, -row->slope[j_theta]);

        double c_max = kInf;
        double sum_x = 0, sum_y = 0, sum_xx = 0, sum_xy = 0;
        int count = 0;
        for (double x = snap.grid.dx; x <= opt.fit_depth + 1e-12; x += snap.grid.dx) {
            const double u = snap.value(xi + x);
            if (u <= 1e-9) break;
            c_max = std::min(c_max, -std::log(u / theta) / x);
            const double y = std::log(u);
            sum_x += x;
            sum_y += y;
            sum_xx += x * x;
            sum_xy += x * y;
            ++count;
        }
        if (count >= 8) {
            const double slope = (count * sum_xy - sum_x * sum_y) / (count * sum_xx - sum_x * sum_x);
            inf_fitted = std::min(inf_fitted, -slope);
        }
        if (snap.t < t_cal_end)
            c_cal = std::min(c_cal, c_max);
        else
            assert_rows.push_back({snap.t, xi});
    }
    if (!std::isfinite(c_cal)) {
        rep.note = "no calibration rows post delay";
        rep.pass = false;
        return rep;
    }

    const double c_hat = opt.c_hat_override > 0.0 ? opt.c_hat_override : opt.safety * c_cal;
    rep.values["c_hat"] = c_hat;
    rep.values["calibration_rate"] = c_cal;
    rep.values["inf_fitted_rate"] = inf_fitted;
    rep.values["slope_min"] = slope_min;

    Margin margin;
    for (const auto& rw : assert_rows) {
        const Snapshot& snap = run.at(rw.t);
        for (double x = 0.0; x <= opt.fit_depth + 1e-12; x += snap.grid.dx) {
            const double u = snap.value(rw.xi + x);
            const double bound = theta * std::exp(-c_hat * x) * (1.0 + opt.pointwise_slack);
            margin.update(bound - u, rw.t, rw.xi + x);
        }
    }
    rep.worst_margin = margin.value;
    rep.worst_t = margin.t;
    rep.worst_x = margin.x;

    const bool fitted_ok = inf_fitted >= opt.fitted_floor * c_hat;
    const bool slope_ok = slope_min >= c_hat * theta * (1.0 - opt.slope_slack);
    rep.values["fitted_ok"] = fitted_ok ? 1.0 : 0.0;
    rep.values["slope_ok"] = slope_ok ? 1.0 : 0.0;
    rep.pass = margin.value >= 0.0 && fitted_ok && slope_ok;
    return rep;
}

CheckReport check_bistable_push(const RunRecord& run, double c_B, double lambda, double t0,
                                double delay_cap) {
    CheckReport rep;
    rep.name = "bistable_push";
    rep.values["c_B"] = c_B;
    rep.values["lambda"] = lambda;
    rep.values["t0"] = t0;
    const double eps = 0.1 * c_B;
    rep.values["eps"] = eps;

    const auto ts = run.trace.times();
    const auto xi = run.trace.xi_series(lambda);
    double xi0 = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!found && ts[i] >= t0 - 1e-9) {
            xi0 = xi[i];
            found = true;
        }
    }
    if (!found) throw ConfigError("t0 outside the recorded trace");

    double t_hat = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < t0) continue;
        t_hat = std::max(t_hat, (ts[i] - t0) - (xi[i] - xi0) / (c_B - eps));
    }
    if (t_hat > delay_cap)
        throw NoAdmissibleDelay("no admissible push delay within the cap");

    Margin margin;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < t0) continue;
        margin.update(xi[i] - xi0 - (c_B - eps) * (ts[i] - t0 - t_hat), ts[i], xi[i]);
    }
    rep.values["t_hat"] = t_hat;
    rep.worst_margin = margin.value;
    rep.worst_t = margin.t;
    rep.pass = margin.value >= -1e-9;
    return rep;
}

SlidingHit sliding_first_hit(const RunRecord& run, double c_min, double c,
                             double theta_star) {
    SlidingHit hit;
    const double theta = run.theta;
    hit.lower = run.trace.estimate_delay() - run.s;  // delay measured from s

    const auto ts = run.trace.times();
    const auto xi = run.trace.xi_series(theta);
    double h_D = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] - run.s <= hit.lower) h_D = std::max(h_D, xi[i] - run.x_s);
    hit.h_D = h_D;
    const double gap0 = std::log(theta_star / theta) / c;
    if (gap0 <= h_D) return hit;  // c too large for the anchoring construction

    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double eta = run.x_s + gap0 + c * (ts[i] - run.s);
        if (xi[i] >= eta) {
            hit.T_s = ts[i] - run.s;
            // Exponential domination at the hit.
            const Snapshot& snap = run.at(ts[i]);
            double m = kInf;
            for (double x = 0.0; x <= 20.0; x += snap.grid.dx)
                m = std::min(m, theta * std::exp(-c * x) - snap.value(xi[i] + x));
            hit.margin = m;
            hit.upper = gap0 / (0.99 * c_min - c);
            hit.ok = hit.T_s >= hit.lower - 1e-9 && hit.T_s <= hit.upper && m >= -1e-6;
            return hit;
        }
    }
    return hit;  // never hit within the horizon
}

CheckReport check_monotone_range(const RunRecord& run, double strict_floor, double range_tol) {
    CheckReport rep;
    rep.name = "monotone_range";
    rep.tolerance = range_tol;
    rep.values["strict_floor"] = strict_floor;

    Margin margin;
    for (const auto& snap : run.snapshots) {
        for (int i = 0; i < snap.grid.n; ++i) {
            margin.update(snap.u[i] + range_tol, snap.t, snap.grid.x(i));
            margin.update(1.0 + range_tol - snap.u[i], snap.t, snap.grid.x(i));
            if (i + 1 < snap.grid.n) {
                const double drop = snap.u[i] - snap.u[i + 1];
                const bool in_band = snap.u[i] >= 0.01 && snap.u[i] <= 0.99 &&
                                     snap.u[i + 1] >= 0.01 && snap.u[i + 1] <= 0.99;
                margin.update(in_band ? drop - strict_floor : drop + range_tol, snap.t,
                              snap.grid.x(i));
            }
        }
    }
    rep.worst_margin = margin.value;
    rep.worst_t = margin.t;
    rep.worst_x = margin.x;
    rep.pass = margin.value >= 0.0;
    return rep;
}

CheckReport check_envelope_speed(const RunRecord& run, const ReactionEnv& env, double kappa,
                                 double tol, double c_kappa0_override) {
    CheckReport rep;
    rep.name = "envelope_speed";
    rep.tolerance = tol;
    const EnvelopeBound b = envelope_speed_bound(env, kappa);
    const double c_bound = c_kappa0_override > 0.0 ? c_kappa0_override : b.c_kappa0;
    rep.values["kappa"] = kappa;
    rep.values["kappa0"] = b.kappa0;
    rep.values["c_kappa0"] = c_bound;

    const auto ts = run.trace.times();
    const auto env_series = run.trace.xi_env_series();
    Margin margin;
    double running_min = kInf;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double m = env_series[i] - c_bound * ts[i];
        if (i > 0) margin.update(running_min + tol - m, ts[i], env_series[i]);
        running_min = std::min(running_min, m);
    }
    rep.worst_margin = margin.value - tol;  // signed distance to the inequality
    rep.pass = margin.value >= 0.0;
    return rep;
}

CheckReport check_width_bounded(const RunRecord& run, double l1, double l2, double t_mid,
                                double factor) {
    CheckReport rep;
    rep.name = "width_bounded";
    rep.values["l1"] = l1;
    rep.values["l2"] = l2;
    rep.values["factor"] = factor;
    const double delay = run.trace.estimate_delay();
    rep.values["delay"] = delay;

    const auto w = run.trace.width(l1, l2);
    const auto ts = run.trace.times();
    const double early = w.max_over(delay, t_mid, ts);
    const double late = w.max_over(t_mid, ts.back(), ts);
    rep.values["max_early"] = early;
    rep.values["max_late"] = late;
    rep.values["median"] = w.median;
    rep.worst_margin = factor * early - late;
    rep.pass = late <= factor * early;
    return rep;
}

CheckReport check_steepness(const RunRecord& run, double c_hat, double slope_slack) {
    CheckReport rep;
    rep.name = "steepness";
    rep.values["c_hat"] = c_hat;
    const double delay = run.trace.estimate_delay();
    rep.values["delay"] = delay;

    const auto ts = run.trace.times();
    const auto slopes = run.trace.slope_series(run.theta);
    std::vector<double> sigma;
    double inf_sigma = kInf;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < delay) continue;
        sigma.push_back(-slopes[i]);
        inf_sigma = std::min(inf_sigma, -slopes[i]);
    }
    const double med = median_of(sigma);
    rep.values["infimum"] = inf_sigma;
    rep.values["median"] = med;
    const double floor_med = 0.5 * med;
    const double floor_rate = c_hat * run.theta * (1.0 - slope_slack);
    rep.worst_margin = std::min(inf_sigma - floor_med, inf_sigma - floor_rate);
    rep.pass = inf_sigma >= floor_med && inf_sigma >= floor_rate;
    return rep;
}

CheckReport check_speed_formula(const RunRecord& run, double tol) {
    CheckReport rep;
    rep.name = "speed_formula";
    rep.tolerance = tol;
    const double delay = run.trace.estimate_delay();
    rep.values["delay"] = delay;

    const auto ts = run.trace.times();
    const auto formula = run.trace.speed_series(run.theta);
    const auto fd = run.trace.speed_fd_series(run.theta);
    double worst = 0.0, at_t = 0.0;
    for (std::size_t i = 2; i + 2 < ts.size(); ++i) {
        // the differencing stencil must itself lie past the delay
        if (ts[i - 2] < delay || !std::isfinite(formula[i]) || !std::isfinite(fd[i])) continue;
        const double d = std::abs(formula[i] - fd[i]);
        if (d > worst) {
            worst = d;
            at_t = ts[i];
        }
    }
    rep.values["sup_difference"] = worst;
    rep.worst_margin = tol - worst;
    rep.worst_t = at_t;
    rep.pass = worst <= tol;
    return rep;
}

}  // namespace frontlab
