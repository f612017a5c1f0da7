#ifndef FRONTLAB_REACTION_ENV_HPP
#define FRONTLAB_REACTION_ENV_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "frontlab/errors.hpp"

namespace frontlab {

enum class AmplitudeKind { Constant, Periodic, QuasiPeriodic, Telegraph };

struct HarmonicTerm {
    double rel_amplitude = 0.0;  // fraction of the mean
    double frequency = 0.0;      // cycles per unit time
};

/// Time model a(t) with values in [a_min, a_max].  Immutable; Telegraph
/// sampling is a pure function of (seed, t).
class AmplitudeModel {
  public:
    static AmplitudeModel constant(double a);
    static AmplitudeModel periodic(double mean, double rel_amplitude, double period);
    static AmplitudeModel quasi_periodic(double mean, std::vector<HarmonicTerm> terms);
    static AmplitudeModel telegraph(double a_min, double a_max, double holding_rate,
                                    std::uint64_t seed);

    AmplitudeKind kind() const { return kind_; }
    double a_min() const { return a_min_; }
    double a_max() const { return a_max_; }
    double operator()(double t) const;

    /// Smallest switch time > t, or +inf for continuous models.  The stepper
    /// aligns sub-steps with these so each sub-step sees a constant amplitude.
    double next_switch_after(double t) const;

    double mean() const { return mean_; }
    double rel_amplitude() const { return rho_; }
    double period() const { return period_; }
    double holding_rate() const { return rate_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<HarmonicTerm>& terms() const { return terms_; }

  private:
    AmplitudeModel() = default;
    double telegraph_value(double t) const;
    double telegraph_next_switch(double t) const;

    AmplitudeKind kind_ = AmplitudeKind::Constant;
    double a_min_ = 1.0, a_max_ = 1.0;
    double mean_ = 1.0, rho_ = 0.0, period_ = 0.0, rate_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<HarmonicTerm> terms_;
};

/// Ignition reaction family f(t,u) = a(t) g(u) with ignition temperature
/// theta.  g vanishes on (-inf, theta] and at u = 1, is positive on
/// (theta, 1) and negative above 1.  Immutable and safe to share across
/// threads.
class ReactionEnv {
  public:
    ReactionEnv(double theta, AmplitudeModel model);

    double theta() const { return theta_; }
    double a_min() const { return model_.a_min(); }
    double a_max() const { return model_.a_max(); }
    const AmplitudeModel& model() const { return model_; }

    /// Fixed profile g(u): (u - theta)(1 - u) for u >= theta, 0 below.
    double shape(double u) const {
        return u <= theta_ ? 0.0 : (u - theta_) * (1.0 - u);
    }
    /// g'(u); one-sided (right) derivative at u = theta.
    double shape_prime(double u) const {
        return u < theta_ ? 0.0 : 1.0 + theta_ - 2.0 * u;
    }

    double amplitude(double t) const { return model_(t); }
    double next_switch_after(double t) const { return model_.next_switch_after(t); }

    double eval(double t, double u) const { return amplitude(t) * shape(u); }
    double f_min(double u) const { return a_min() * shape(u); }
    double f_max(double u) const { return a_max() * shape(u); }

    /// sup over [0, u_hi] of a_max |g'|; the stepper's reaction Lipschitz bound.
    double lipschitz_bound(double u_hi = 1.05) const;

    /// kappa_0 = sup over (0,1) of f_max(u)/u, located by a fine grid scan
    /// refined by golden-section.  Also serves as the linear growth bound
    /// f(t,u) <= kappa_0 u for u >= 0.
    double growth_bound() const;

  private:
    double theta_;
    AmplitudeModel model_;
};

/// Grid-scan plus golden-section maximiser of ratio(u) = f(u)/u on (0,1).
double sup_ratio_over_unit_interval(const std::function<double(double)>& f);

/// u^o(t1; t0, a0): solution of u' = f(t,u) by adaptive RK4 with step
/// doubling, sub-stepped across amplitude switches.  Monotone nondecreasing
/// in a0.  Throws StepFailure if the tolerance cannot be met.
double ode_flow(const ReactionEnv& env, double t0, double a0, double t1, double tol = 1e-10);

/// Bistable companion: f_B(u) = -delta_B u (theta - u) on [0, theta],
/// f_B = f_min on [theta, 1].  Construction enforces the positive-integral
/// condition by quadrature.
class BistableCompanion {
  public:
    BistableCompanion(const ReactionEnv& env, double delta_B);

    double operator()(double u) const {
        if (u < theta_) return -delta_B_ * u * (theta_ - u);
        return a_min_ * (u - theta_) * (1.0 - u);
    }
    double theta() const { return theta_; }
    double delta_B() const { return delta_B_; }
    double integral() const { return integral_; }

  private:
    double theta_, delta_B_, a_min_, integral_;
};

}  // namespace frontlab

#endif
