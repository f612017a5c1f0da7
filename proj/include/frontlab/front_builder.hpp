#ifndef FRONTLAB_FRONT_BUILDER_HPP
#define FRONTLAB_FRONT_BUILDER_HPP

#include <vector>

#include "frontlab/interface_track.hpp"
#include "frontlab/pde_core.hpp"

namespace frontlab {

struct Snapshot {
    double t = 0.0;
    Grid grid;
    std::vector<double> u;

    double value(double x) const;
};

/// One evolution from wave-profile initial data, with its recorded
/// snapshots and interface trace.
struct RunRecord {
    double s = 0.0;      // start time
    double x_s = 0.0;    // initial translate of the profile
    double t_end = 0.0;
    double theta = 0.0;
    double dx = 0.0, dt = 0.0;
    double u00 = 0.0;    // u(0, 0) when 0 lies in the run's time range
    StepperConfig cfg;
    std::vector<Snapshot> snapshots;
    InterfaceTrace trace;

    const Snapshot& at(double t) const;  // nearest recorded snapshot
};

/// Front speed measured from a direct evolution: displacement of xi_theta
/// between t_from and t_to divided by the elapsed time.
double measure_front_speed(const ReactionEnv& env, const WaveProfile& phi,
                           const StepperConfig& cfg, double t_from, double t_to);

/// Normalization shift of the profile for a start at time s < 0: bisection
/// on the translate y of the initial data phi(x - y), evolving to time 0 and
/// matching u(0,0) = theta.  Monotone in y by the comparison principle.
double find_shift(const ReactionEnv& env, const WaveProfile& phi, double s, double tol,
                  const StepperConfig& cfg, double c_min);

struct RunOptions {
    double observe_every = 0.5;
    double snapshot_every = 0.5;
    double shift_tol = 1e-8;
    TrackerConfig tracker;
};

/// Evolves initial data phi(x - x_s) from time s, recording trace and
/// snapshots.  For s < 0 the shift x_s is solved so that u(0,0) = theta;
/// for s = 0 the data is centered at x_s = 0.
RunRecord run_approximating(const ReactionEnv& env, const WaveProfile& phi, double s,
                            double t_end, const StepperConfig& cfg, const RunOptions& opt,
                            double c_min);

/// Runs a family of starts and reports the successive sup-norm gaps on the
/// common observation window [0, t_end].
struct FrontEstimate {
    std::vector<double> s_list;
    std::vector<double> x_s;
    std::vector<double> gaps;  // gaps[i] = sup |u(.;s_i) - u(.;s_{i+1})|
    RunRecord deepest;
    double speed_estimate = 0.0;
    // front-centered profiles of the two deepest starts at t_end, for the
    // self-consistency bound |psi_deepest - psi_prev| <~ final gap
    std::vector<double> profile_offsets;
    std::vector<double> profile_deepest;
    std::vector<double> profile_prev;
};
FrontEstimate build_front(const ReactionEnv& env, const WaveProfile& phi,
                          const std::vector<double>& s_list, double t_end,
                          const StepperConfig& cfg, const RunOptions& opt, double c_min,
                          double cauchy_tol);

/// Front-centered profile u(t, x + xi_theta(t)) resampled on uniform offsets.
std::vector<double> front_centered_profile(const Snapshot& snap, double xi,
                                           const std::vector<double>& offsets);

struct PeriodicWave {
    double period = 0.0;
    double c_T = 0.0;                     // (xi_theta(t+T) - xi_theta(t)) / T at the fixed point
    std::vector<double> residuals;        // period-map residuals r_k
    std::vector<double> period_displacements;
    std::vector<double> offsets;          // front-centered sample offsets
    std::vector<double> profile;          // psi at the final period start
    // sup of |psi_t - psi_xx - c_T psi_x - f| away from the ignition point,
    // where the discrete solution carries a derivative kink layer; the sup
    // including that O(dx) layer is reported separately.
    double profile_equation_residual = 0.0;
    double profile_equation_residual_full = 0.0;
    double kink_exclusion_radius = 0.0;
    double t_converged = 0.0;
};

/// Evolves until the front-centered period map contracts below per_tol and
/// extracts the wave speed, profile and the residual of the profile
/// equation psi_t = psi_xx + c psi_x + f(t, psi).
PeriodicWave periodic_wave(const ReactionEnv& env, const WaveProfile& phi,
                           const StepperConfig& cfg, double per_tol = 1e-4,
                           double burn_in = 50.0, int max_periods = 60);

}  // namespace frontlab

#endif
