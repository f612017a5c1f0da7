#ifndef FRONTLAB_PDE_CORE_HPP
#define FRONTLAB_PDE_CORE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "frontlab/reaction_env.hpp"
#include "frontlab/wave_profile.hpp"

namespace frontlab {

struct Grid {
    double x_left = 0.0;
    double dx = 0.05;
    int n = 0;

    double x(int i) const { return x_left + i * dx; }
    double x_right() const { return x(n - 1); }
};

/// One time-slice of the discretized solution on a truncated window with
/// Dirichlet boundary data (default (1, 0), the front's limits).
struct Field {
    Grid grid;
    double t = 0.0;
    std::vector<double> u;
    std::pair<double, double> boundary{1.0, 0.0};

    /// Linear interpolation; outside the window returns the boundary value
    /// of the nearer side.
    double value(double x) const;
};

struct StepperConfig {
    double dx = 0.05;
    double dt = 0.02;
    double lipschitz_bound = 0.0;  // reaction Lipschitz bound L; dt*L <= 1 required
    double window_width = 400.0;
    double shift_margin = 50.0;
};

struct Derivatives {
    std::vector<double> ux;  // centered second-order, one-sided at the ends
    std::vector<double> ut;  // PDE right-hand side u_xx + f(t,u)
};

/// One IMEX step: explicit reaction u* = u + dt f(t,u), then implicit
/// diffusion (I - dt D2) u_new = u* with Dirichlet boundary data.  dt is
/// subdivided so no amplitude switch lies strictly inside a sub-step.
void step(Field& field, const ReactionEnv& env, const StepperConfig& cfg);

using Observer = std::function<void(const Field&, const Derivatives&)>;

/// Repeated stepping with window shifting.  Observers fire at absolute
/// multiples of `observe_every` (snapped to the dt lattice); pass
/// `subdivide_like` to force another model's switch schedule, which keeps
/// two evolutions step-for-step comparable.
void evolve(Field& field, const ReactionEnv& env, const StepperConfig& cfg, double t_end,
            const std::vector<Observer>& observers = {}, double observe_every = 0.0,
            const AmplitudeModel* subdivide_like = nullptr);

/// Re-windows the field onto [new_x_left, new_x_left + (n-1) dx]; entering
/// nodes take the boundary value of their side.  Throws ShiftTooLarge if no
/// interior node survives.
Field shift_window(const Field& field, double new_x_left);

Derivatives derivatives(const Field& field, const ReactionEnv& env);

/// Field sampled from a wave profile translated so its normalization point
/// sits at `center`; the window is the global lattice {k dx} of width
/// `width` centered on `center`.
Field make_front_field(const WaveProfile& profile, double center, double t0, double dx,
                       double width);

}  // namespace frontlab

#endif
