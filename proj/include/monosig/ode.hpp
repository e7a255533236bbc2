#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "monosig/errors.hpp"

namespace monosig {

/// Time-stamped states; times strictly increasing.
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;

    std::size_t size() const { return times.size(); }
    const Eigen::VectorXd& back() const { return states.back(); }
    /// Linear interpolation; clamps outside the recorded range.
    Eigen::VectorXd at(double t) const;
};

enum class Method { Euler, RK4 };

struct IntegrationOptions {
    double dt = 1e-3;
    Method method = Method::RK4;
    /// Spacing of stored states; 0 stores every step. Rounded to a whole
    /// number of steps. The final state is always stored.
    double record_interval = 0.0;
};

inline constexpr double kStepMassTol = 1e-9;

/// Moves a post-step state back onto the simplex: small negative components
/// are clamped and the vector renormalised. Throws IntegrationError if mass
/// drift or negativity exceeds kStepMassTol.
inline void renormalize_step(Eigen::VectorXd& x, double t)
{
    const double mass = x.sum();
    const double low = x.minCoeff();
    if (!x.allFinite() || std::abs(mass - 1.0) > kStepMassTol || low < -kStepMassTol) {
        std::ostringstream msg;
        msg << "integration left the simplex at t = " << t << " (mass " << mass
            << ", min component " << low << "); try a smaller dt";
        throw IntegrationError(msg.str());
    }
    x = x.cwiseMax(0.0);
    x /= x.sum();
}

/// Fixed-step integration of x' = f(x) on a simplex.
template <class Field>
Trajectory integrate_on_simplex(Field&& f, Eigen::VectorXd x, double t_end,
                                const IntegrationOptions& options)
{
    if (!(t_end > 0.0))
        throw InvalidParameter("t_end must be positive");
    if (!(options.dt > 0.0))
        throw InvalidParameter("dt must be positive");

    const auto steps = static_cast<long long>(std::ceil(t_end / options.dt - 1e-9));
    long long stride = 1;
    if (options.record_interval > 0.0)
        stride = std::max(1LL, std::llround(options.record_interval / options.dt));

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(x);

    Eigen::VectorXd k1, k2, k3, k4;
    for (long long s = 1; s <= steps; ++s) {
        const double t0 = static_cast<double>(s - 1) * options.dt;
        const double h = s == steps ? t_end - t0 : options.dt;
        if (options.method == Method::Euler) {
            x += h * f(x);
        } else {
            k1 = f(x);
            k2 = f(x + 0.5 * h * k1);
            k3 = f(x + 0.5 * h * k2);
            k4 = f(x + h * k3);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const double t = s == steps ? t_end : static_cast<double>(s) * options.dt;
        renormalize_step(x, t);
        if (s % stride == 0 || s == steps) {
            traj.times.push_back(t);
            traj.states.push_back(x);
        }
    }
    return traj;
}

inline Eigen::VectorXd Trajectory::at(double t) const
{
    if (times.empty())
        throw InvalidInput("empty trajectory");
    if (t <= times.front())
        return states.front();
    if (t >= times.back())
        return states.back();
    const auto hi = static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), t) - times.begin());
    const double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
    return (1.0 - w) * states[hi - 1] + w * states[hi];
}

} // namespace monosig
