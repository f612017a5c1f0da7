#ifndef FRONTLAB_TESTS_ORACLES_HPP
#define FRONTLAB_TESTS_ORACLES_HPP

// Test-only oracles, independent of the solver paths they check.

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Heat-kernel convolution of initial data given as a callable, by composite
// Simpson quadrature over a window [a, b] outside of which the data vanishes.
inline double heat_convolution(const std::function<double(double)>& u0, double x, double t,
                               double a, double b, int n = 20001) {
    if (n % 2 == 0) ++n;
    const double h = (b - a) / (n - 1);
    const auto kernel = [&](double y) {
        return std::exp(-(x - y) * (x - y) / (4.0 * t)) / std::sqrt(4.0 * M_PI * t) * u0(y);
    };
    double s = kernel(a) + kernel(b);
    for (int i = 1; i + 1 < n; ++i) s += kernel(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Exact spread of a Gaussian bump under the heat equation; validates the
// quadrature oracle itself.
inline double gaussian_heat_exact(double amplitude, double sigma, double x, double t) {
    const double s2 = sigma * sigma + 2.0 * t;
    return amplitude * sigma / std::sqrt(s2) * std::exp(-x * x / (2.0 * s2));
}

// Minimal IMEX evolver for u_t = u_xx + f(u) with Dirichlet data, written
// independently of the library stepper.  Used to drive autonomous
// nonlinearities (e.g. the bistable companion) in oracle roles.
class MiniImex {
  public:
    MiniImex(std::vector<double> u0, double x_left, double dx, double dt,
             std::function<double(double)> f, double left, double right)
        : u_(std::move(u0)), x_left_(x_left), dx_(dx), dt_(dt), f_(std::move(f)),
          left_(left), right_(right) {}

    void run(double duration) {
        const int n = static_cast<int>(u_.size());
        const double r = dt_ / (dx_ * dx_);
        const int steps = static_cast<int>(std::llround(duration / dt_));
        std::vector<double> cp(n, 0.0), d(n, 0.0);
        for (int s = 0; s < steps; ++s) {
            for (int i = 0; i < n; ++i) u_[i] += dt_ * f_(u_[i]);
            u_[0] = left_;
            u_[n - 1] = right_;
            const double diag = 1.0 + 2.0 * r;
            cp[1] = -r / diag;
            d[1] = (u_[1] + r * u_[0]) / diag;
            for (int i = 2; i < n - 1; ++i) {
                const double m = diag + r * cp[i - 1];
                cp[i] = -r / m;
                d[i] = (u_[i] + (i == n - 2 ? r * u_[n - 1] : 0.0) + r * d[i - 1]) / m;
            }
            u_[n - 2] = d[n - 2];
            for (int i = n - 3; i >= 1; --i) u_[i] = d[i] - cp[i] * u_[i + 1];
            t_ += dt_;
        }
    }

    // level crossing by linear interpolation
    double crossing(double level) const {
        for (std::size_t i = 0; i + 1 < u_.size(); ++i) {
            if (u_[i] >= level && u_[i + 1] < level) {
                const double t = (u_[i] - level) / (u_[i] - u_[i + 1]);
                return x_left_ + (static_cast<double>(i) + t) * dx_;
            }
        }
        return x_left_;
    }

    double t() const { return t_; }

  private:
    std::vector<double> u_;
    double x_left_, dx_, dt_, t_ = 0.0;
    std::function<double(double)> f_;
    double left_, right_;
};

}  // namespace oracles

#endif
