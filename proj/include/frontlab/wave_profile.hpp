#ifndef FRONTLAB_WAVE_PROFILE_HPP
#define FRONTLAB_WAVE_PROFILE_HPP

#include <functional>
#include <vector>

#include "frontlab/reaction_env.hpp"

namespace frontlab {

/// Traveling-wave profile phi with speed c solving
/// phi'' + c phi' + f(phi) = 0, strictly decreasing from 1 to 0, normalized
/// so phi(0) equals the ignition temperature.  For the ignition kind the
/// tail obeys phi(x) = theta exp(-c x) for x >= 0.
struct WaveProfile {
    enum class Kind { Ignition, Bistable };

    Kind kind = Kind::Ignition;
    double speed = 0.0;
    double theta = 0.0;  // normalization level: phi(0) = theta
    double x_lo = 0.0, x_hi = 0.0, dx = 1e-3;
    std::vector<double> phi;   // samples on the uniform grid
    std::vector<double> dphi;  // phi' samples on the same grid

    double residual_max = 0.0;    // max |phi'' + c phi' + f(phi)| at interior nodes
    double c_over = 0.0;          // dichotomy witnesses stored by the solver
    double c_under = 0.0;
    double tol = 0.0;

    /// Linear interpolation between nodes; clamps to phi(x_lo) on the left.
    /// Ignition profiles evaluate the exact exponential tail for x >= 0.
    double value(double x) const;
    double derivative(double x) const;
};

/// Shooting solver for the homogeneous ignition wave: integrates backward
/// from the exact tail data (phi, phi')(0) = (theta, -c theta) and bisects
/// the speed on the overshoot-above-1 / turn-back-below-1 dichotomy.
WaveProfile solve_ignition_wave(const std::function<double(double)>& f, double theta,
                                double tol = 1e-8, double bracket_hint = 0.0);

/// Bistable wave by shooting from the unstable manifold at u = 1.
WaveProfile solve_bistable_wave(const std::function<double(double)>& f_B,
                                double normalize_level, double tol = 1e-8);
WaveProfile solve_bistable_wave(const BistableCompanion& f_B, double tol = 1e-8);

struct KppParams {
    double lambda;  // sqrt(kappa)
    double c_star;  // 2 sqrt(kappa)
};
/// Decay/speed pair of the linearized envelope; validates
/// lambda^2 - c_star lambda + kappa = 0 to rounding.
KppParams kpp_envelope_params(double kappa);

struct EnvelopeBound {
    double kappa0;        // sup of f_max(u)/u over (0,1)
    double lambda_kappa;  // sqrt(kappa)
    double c_kappa0;      // kappa0/lambda + lambda
};
EnvelopeBound envelope_speed_bound(const ReactionEnv& env, double kappa);
EnvelopeBound envelope_speed_bound(const std::function<double(double)>& f_max, double kappa);

/// Smallest u > 0 with f_max(u) = kappa u; requires kappa below the growth
/// bound so a crossing exists.
double level_kappa_crossing(const ReactionEnv& env, double kappa);

}  // namespace frontlab

#endif
