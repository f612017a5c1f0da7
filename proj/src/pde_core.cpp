#include "frontlab/pde_core.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

double Field::value(double x) const {
    if (x <= grid.x_left) return x < grid.x_left ? boundary.first : u.front();
    if (x >= grid.x_right()) return x > grid.x_right() ? boundary.second : u.back();
    const double s = (x - grid.x_left) / grid.dx;
    const auto i = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(i);
    return u[i] * (1.0 - t) + u[i + 1] * t;
}

namespace {

// Thomas solve of (I - r D2) v = rhs on the interior, Dirichlet ends already
// pinned in v[0] and v[n-1].  Coefficients are constant so the forward
// elimination multipliers are cached per (n, r).
class DiffusionSolver {
  public:
    void prepare(int n, double r) {
        if (n == n_ && r == r_) return;
        n_ = n;
        r_ = r;
        cp_.assign(n, 0.0);
        const double diag = 1.0 + 2.0 * r;
        cp_[1] = -r / diag;
        for (int i = 2; i < n - 1; ++i) {
            const double denom = diag + r * cp_[i - 1];
            if (denom <= 0.0) throw LinearSolveFailure("tridiagonal pivot lost positivity");
            cp_[i] = -r / denom;
        }
    }

    void solve(std::vector<double>& v, const std::pair<double, double>& boundary) const {
        const int n = n_;
        const double r = r_;
        const double diag = 1.0 + 2.0 * r;
        v[0] = boundary.first;
        v[n - 1] = boundary.second;
        // forward sweep on interior nodes 1..n-2
        scratch_.resize(n);
        scratch_[1] = (v[1] + r * v[0]) / diag;
        for (int i = 2; i < n - 1; ++i) {
            const double denom = diag + r * cp_[i - 1];
            const double rhs = v[i] + (i == n - 2 ? r * v[n - 1] : 0.0);
            scratch_[i] = (rhs + r * scratch_[i - 1]) / denom;
        }
        v[n - 2] = scratch_[n - 2];
        for (int i = n - 3; i >= 1; --i) v[i] = scratch_[i] - cp_[i] * v[i + 1];
    }

  private:
    int n_ = -1;
    double r_ = 0.0;
    std::vector<double> cp_;
    mutable std::vector<double> scratch_;
};

thread_local DiffusionSolver g_solver;

void substep(Field& f, const ReactionEnv& env, double dt, double dx) {
    const int n = f.grid.n;
    // Symmetrized IMEX: explicit half reaction, implicit diffusion, explicit
    // half reaction.  Each factor is monotone under dt*L <= 1, so the
    // discrete comparison principle is untouched, while the splitting defect
    // in u_t drops an order.  Amplitudes are evaluated at the half-step
    // midpoints; telegraph pieces are constant across a sub-step by the
    // switch alignment.
    const double a1 = env.amplitude(f.t + 0.25 * dt);
    for (int i = 0; i < n; ++i) f.u[i] += 0.5 * dt * a1 * env.shape(f.u[i]);
    g_solver.prepare(n, dt / (dx * dx));
    g_solver.solve(f.u, f.boundary);
    const double a2 = env.amplitude(f.t + 0.75 * dt);
    for (int i = 0; i < n; ++i) f.u[i] += 0.5 * dt * a2 * env.shape(f.u[i]);
    f.t += dt;
}

// Rightmost node index with u >= level, or -1.
int rightmost_at_or_above(const Field& f, double level) {
    for (int i = f.grid.n - 1; i >= 0; --i)
        if (f.u[i] >= level) return i;
    return -1;
}

}  // namespace

void step(Field& field, const ReactionEnv& env, const StepperConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (field.grid.n < 16) throw ConfigError("grid needs at least 16 nodes");
    if (cfg.lipschitz_bound * cfg.dt > 1.0)
        throw ConfigError("monotonicity condition dt*L <= 1 violated");
    const double t_end = field.t + cfg.dt;
    while (field.t < t_end) {
        const double sw = env.next_switch_after(field.t);
        const double dt = std::min(t_end, sw) - field.t;
        substep(field, env, dt, field.grid.dx);
        if (std::min(t_end, sw) == t_end) break;
    }
    field.t = t_end;  // absorb rounding from sub-step accumulation
}

Field shift_window(const Field& field, double new_x_left) {
    const double dx = field.grid.dx;
    const auto k = static_cast<long long>(std::llround((new_x_left - field.grid.x_left) / dx));
    if (std::abs(new_x_left - (field.grid.x_left + k * dx)) > 1e-9 * dx)
        throw ConfigError("new_x_left is not aligned to the grid lattice");
    if (std::llabs(k) >= field.grid.n)
        throw ShiftTooLarge("window shift drops every interior node");
    Field out = field;
    out.grid.x_left = field.grid.x_left + k * dx;
    const int n = field.grid.n;
    for (int i = 0; i < n; ++i) {
        const long long j = i + k;
        if (j < 0)
            out.u[i] = field.boundary.first;
        else if (j >= n)
            out.u[i] = field.boundary.second;
        else
            out.u[i] = field.u[j];
    }
    return out;
}

Derivatives derivatives(const Field& field, const ReactionEnv& env) {
    const int n = field.grid.n;
    const double dx = field.grid.dx;
    Derivatives d;
    d.ux.resize(n);
    d.ut.resize(n);
    const double a = env.amplitude(field.t);
    for (int i = 0; i < n; ++i) {
        if (i == 0)
            d.ux[i] = (-3.0 * field.u[0] + 4.0 * field.u[1] - field.u[2]) / (2.0 * dx);
        else if (i == n - 1)
            d.ux[i] = (3.0 * field.u[n - 1] - 4.0 * field.u[n - 2] + field.u[n - 3]) / (2.0 * dx);
        else
            d.ux[i] = (field.u[i + 1] - field.u[i - 1]) / (2.0 * dx);
        double uxx;
        if (i == 0 || i == n - 1)
            uxx = 0.0;  // boundary nodes are pinned
        else
            uxx = (field.u[i + 1] - 2.0 * field.u[i] + field.u[i - 1]) / (dx * dx);
        d.ut[i] = uxx + a * env.shape(field.u[i]);
    }
    return d;
}

void evolve(Field& field, const ReactionEnv& env, const StepperConfig& cfg, double t_end,
            const std::vector<Observer>& observers, double observe_every,
            const AmplitudeModel* subdivide_like) {
    if (t_end < field.t) throw ConfigError("evolve requires t_end >= field.t");
    if (field.grid.n < 16) throw ConfigError("grid needs at least 16 nodes");
    if (cfg.lipschitz_bound * cfg.dt > 1.0)
        throw ConfigError("monotonicity condition dt*L <= 1 violated");

    const double dt = cfg.dt;
    // Observations fire on the absolute lattice {j * stride * dt}, resolved
    // in integer step counts so runs with different start times share them
    // exactly.  The cadence snaps to a whole number of steps.
    const long long stride =
        observe_every > 0.0 ? std::max<long long>(1, std::llround(observe_every / dt)) : 0;
    const long long base_k = std::llround(field.t / dt);

    const auto observe = [&](const Field& f) {
        if (observers.empty()) return;
        const Derivatives d = derivatives(f, env);
        for (const auto& obs : observers) obs(f, d);
    };

    const auto on_lattice = [&](long long k_abs) {
        return stride > 0 && ((k_abs % stride) + stride) % stride == 0;
    };

    if (on_lattice(base_k)) observe(field);

    const long long steps = std::llround((t_end - field.t) / dt);
    const double t0 = field.t;
    for (long long k = 1; k <= steps; ++k) {
        const double target = t0 + static_cast<double>(k) * dt;
        // Sub-step across amplitude switches of the driving model (or of a
        // reference model, to keep two runs on identical schedules).
        while (field.t < target - 1e-12) {
            const double sw = subdivide_like ? subdivide_like->next_switch_after(field.t)
                                             : env.next_switch_after(field.t);
            const double stop = std::min(target, sw);
            substep(field, env, stop - field.t, field.grid.dx);
            field.t = stop;
        }
        field.t = target;

        // Shift the window when the interface nears the right edge.
        const int idx = rightmost_at_or_above(field, env.theta());
        if (idx >= 0) {
            const double xi = field.grid.x(idx);
            if (xi > field.grid.x_right() - cfg.shift_margin) {
                const double center = field.grid.x_left + 0.5 * cfg.window_width;
                const double shift = std::round((xi - center) / field.grid.dx) * field.grid.dx;
                if (shift > 0.0) field = shift_window(field, field.grid.x_left + shift);
            }
        }
        if (on_lattice(base_k + k)) observe(field);
    }
}

Field make_front_field(const WaveProfile& profile, double center, double t0, double dx,
                       double width) {
    Field f;
    f.t = t0;
    f.grid.dx = dx;
    f.grid.x_left = std::floor((center - 0.5 * width) / dx) * dx;
    f.grid.n = static_cast<int>(std::llround(width / dx)) + 1;
    f.u.resize(f.grid.n);
    for (int i = 0; i < f.grid.n; ++i) f.u[i] = profile.value(f.grid.x(i) - center);
    return f;
}

}  // namespace frontlab
