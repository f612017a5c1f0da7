#ifndef FRONTLAB_INTERFACE_TRACK_HPP
#define FRONTLAB_INTERFACE_TRACK_HPP

#include <vector>

#include "frontlab/pde_core.hpp"

namespace frontlab {

/// Unique level crossing of a monotone field: monotone scan plus linear
/// interpolation between the bracketing nodes.
double xi_lambda(const Field& field, double lambda);

/// Envelope interface for decay rate lambda_kappa = sqrt(kappa): the exact
/// discrete evaluation of inf{ y : u(x) <= exp(-lambda_kappa (x - y)) },
/// i.e. the max over nodes of x_i + ln(u_i)/lambda_kappa.  Nodes at or
/// below u_floor are excluded.
double xi_envelope(const Field& field, double kappa, double u_floor = 1e-12);

/// Interface speed -u_t/u_x at the lambda-crossing, both derivatives
/// interpolated there.  Throws DegenerateSlope below steep_floor.
double interface_speed(const Field& field, const ReactionEnv& env, double lambda,
                       double steep_floor = 1e-6);
double interface_speed(const Field& field, const Derivatives& d, double lambda,
                       double steep_floor = 1e-6);

/// Speed formula specialized to the ignition level, where the reaction term
/// kinks: derivatives come from a one-sided cubic on the smooth side ahead.
double interface_speed_at_ignition(const Field& field, const ReactionEnv& env,
                                   double steep_floor = 1e-6);

struct TrackerConfig {
    std::vector<double> levels;        // must contain theta
    double kappa = 0.0;                // envelope decay parameter
    double slope_window_radius = 20.0; // u_x kept on [xi_theta +/- radius]
    double steep_floor = 1e-6;
    double u_floor = 1e-12;
};

struct TraceRow {
    double t = 0.0;
    std::vector<double> xi;     // per tracked level
    std::vector<double> slope;  // u_x at each level crossing
    std::vector<double> speed;  // -u_t/u_x at each level crossing (NaN if degenerate)
    double xi_env = 0.0;
    double ux_first_x = 0.0;    // abscissa of ux_window[0]
    double ux_dx = 0.0;         // spacing of the stored derivative window
    std::vector<double> ux_window;
};

/// Time series of interface diagnostics recorded along an evolution.
struct InterfaceTrace {
    TrackerConfig cfg;
    double theta = 0.0;
    std::vector<TraceRow> rows;

    int level_index(double level) const;
    std::vector<double> times() const;
    std::vector<double> xi_series(double level) const;
    std::vector<double> slope_series(double level) const;
    std::vector<double> speed_series(double level) const;
    std::vector<double> xi_env_series() const;

    /// |xi_l1 - xi_l2| per time.
    std::vector<double> width_series(double l1, double l2) const;
    struct WidthStats {
        std::vector<double> series;
        std::vector<double> running_max;
        double median = 0.0;
        double max_over(double t_lo, double t_hi, const std::vector<double>& ts) const;
    };
    WidthStats width(double l1, double l2) const;

    /// Per-time min of -u_x over [xi_theta - M, xi_theta + M] from the
    /// stored derivative window.
    std::vector<double> steepness_series(double M) const;

    /// Centered finite differences of xi_theta(t); NaN at the ends.
    std::vector<double> speed_fd_series(double level) const;

    /// Delay estimate: earliest time after which -u_x(t, xi_theta) stays at
    /// or above half its long-run median.
    double estimate_delay() const;
};

/// Evolution observer recording an InterfaceTrace.
class Tracker {
  public:
    Tracker(const ReactionEnv& env, TrackerConfig cfg);
    void operator()(const Field& field, const Derivatives& d);
    const InterfaceTrace& trace() const { return trace_; }
    InterfaceTrace take() { return std::move(trace_); }

  private:
    const ReactionEnv* env_;
    InterfaceTrace trace_;
};

}  // namespace frontlab

#endif
