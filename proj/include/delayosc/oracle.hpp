#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "delayosc/errors.hpp"
#include "delayosc/types.hpp"

// Independent verification of the analytic solver: pointwise residual of the
// delay equation, knot-jump diagnostics, and a method-of-steps RK4 reference
// integrator. Deliberately self-contained: nothing here touches the
// trig-polynomial machinery, so agreement between the two paths is evidence,
// not tautology.

namespace delayosc {

/// One solution sample; xpp absent means the caller has no exact second
/// derivative and the residual falls back to central differences (with
/// correspondingly widened pass thresholds).
struct PointEval {
    double x = 0.0;
    double xp = 0.0;
    std::optional<double> xpp;
};

using Evaluator = std::function<PointEval(double)>;
using SidedEvaluator = std::function<PointEval(double, Side)>;

struct KnotJump {
    double t = 0.0;
    double dx = 0.0;
    double dxp = 0.0;
    double dxpp = 0.0;
};

struct ResidualReport {
    std::vector<double> grid;
    std::vector<double> residuals;  // |x'' + w1^2 x(t) + w2^2 x(t-tau) - f(t)|
    double max_residual = 0.0;
    std::vector<KnotJump> knot_jumps;         // knots k*tau, k = 0..K-1
    bool exact_second_derivative = true;
};

/// Residual of the evaluator against the delay equation on a grid placed
/// strictly inside each interval ((k-1)tau, k*tau), where x'' cannot jump.
/// Knot jumps are measured exactly when a sided evaluator is supplied, else
/// by one-sided offsets of 1e-5*tau.
inline ResidualReport residual(const Evaluator& eval, const DelayIvp& ivp,
                               int points_per_interval,
                               const SidedEvaluator* sided = nullptr) {
    if (points_per_interval < 3) {
        throw InvalidParameter("residual: need at least 3 points per interval");
    }
    const double w1sq = ivp.omega1 * ivp.omega1;
    const double w2sq = ivp.omega2 * ivp.omega2;
    const double fd_h = 1e-5 * ivp.tau;

    ResidualReport report;
    auto second = [&](double t, const PointEval& pe) {
        if (pe.xpp) return *pe.xpp;
        report.exact_second_derivative = false;
        return (eval(t + fd_h).x - 2.0 * pe.x + eval(t - fd_h).x) / (fd_h * fd_h);
    };

    for (int k = 1; k <= ivp.intervals; ++k) {
        const double lo = (static_cast<double>(k) - 1.0) * ivp.tau;
        for (int i = 0; i < points_per_interval; ++i) {
            const double t = lo + ivp.tau * (static_cast<double>(i) + 0.5) /
                                      static_cast<double>(points_per_interval);
            const PointEval here = eval(t);
            const PointEval delayed = eval(t - ivp.tau);
            const double f = ivp.forcing ? ivp.forcing(t) : 0.0;
            const double res = std::abs(second(t, here) + w1sq * here.x + w2sq * delayed.x - f);
            report.grid.push_back(t);
            report.residuals.push_back(res);
            if (res > report.max_residual) report.max_residual = res;
        }
    }

    for (int k = 0; k < ivp.intervals; ++k) {
        const double t = static_cast<double>(k) * ivp.tau;
        PointEval left, right;
        if (sided) {
            left = (*sided)(t, Side::Left);
            right = (*sided)(t, Side::Right);
        } else {
            left = eval(t - fd_h);
            right = eval(t + fd_h);
        }
        KnotJump jump;
        jump.t = t;
        jump.dx = right.x - left.x;
        jump.dxp = right.xp - left.xp;
        jump.dxpp = (right.xpp ? *right.xpp : 0.0) - (left.xpp ? *left.xpp : 0.0);
        report.knot_jumps.push_back(jump);
    }
    return report;
}

/// Sampled trajectory on a uniform grid with cubic Hermite dense output.
struct Trajectory {
    double step = 0.0;
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> derivatives;

    double value_at(double t) const { return hermite(t, false); }
    double derivative_at(double t) const { return hermite(t, true); }

private:
    double hermite(double t, bool deriv) const {
        if (times.empty()) throw InvalidParameter("empty trajectory");
        if (t <= times.front()) return deriv ? derivatives.front() : values.front();
        if (t >= times.back()) return deriv ? derivatives.back() : values.back();
        auto j = static_cast<std::size_t>(std::floor((t - times.front()) / step));
        if (j >= times.size() - 1) j = times.size() - 2;
        const double th = (t - times[j]) / step;
        const double x0 = values[j], x1 = values[j + 1];
        const double v0 = derivatives[j], v1 = derivatives[j + 1];
        if (!deriv) {
            const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
            const double h10 = th * (1.0 - th) * (1.0 - th);
            const double h01 = th * th * (3.0 - 2.0 * th);
            const double h11 = th * th * (th - 1.0);
            return h00 * x0 + h10 * step * v0 + h01 * x1 + h11 * step * v1;
        }
        const double d00 = 6.0 * th * (th - 1.0) / step;
        const double d10 = (3.0 * th - 1.0) * (th - 1.0);
        const double d01 = -6.0 * th * (th - 1.0) / step;
        const double d11 = th * (3.0 * th - 2.0);
        return d00 * x0 + d10 * v0 + d01 * x1 + d11 * v1;
    }
};

/// Classical RK4 marched interval by interval over [0, K*tau]. The step is
/// rounded so it divides tau exactly and no step straddles a knot; the
/// delayed value comes from phi on the first interval and from cubic Hermite
/// interpolation of stored samples afterwards. Stage times are half-step
/// aligned, so delayed lookups hit either stored nodes or panel midpoints.
inline Trajectory rk_reference(const DelayIvp& ivp, double h) {
    if (!(h > 0.0)) throw InvalidParameter("rk_reference: step must be positive");
    if (ivp.tau / h < 10.0 - 1e-9) {
        throw InvalidParameter("rk_reference: step too large, need h <= tau/10");
    }
    if (!ivp.history || !ivp.history_slope) {
        throw InvalidParameter("rk_reference: history and history_slope are required");
    }
    const auto per_interval = static_cast<std::size_t>(std::ceil(ivp.tau / h - 1e-12));
    const double step = ivp.tau / static_cast<double>(per_interval);
    const std::size_t total = per_interval * static_cast<std::size_t>(ivp.intervals);

    Trajectory traj;
    traj.step = step;
    traj.times.reserve(total + 1);
    traj.values.reserve(total + 1);
    traj.derivatives.reserve(total + 1);
    traj.times.push_back(0.0);
    traj.values.push_back(ivp.history(0.0));
    traj.derivatives.push_back(ivp.history_slope(0.0));

    const double w1sq = ivp.omega1 * ivp.omega1;
    const double w2sq = ivp.omega2 * ivp.omega2;

    // delayed value at half-step index hs (time hs * step / 2)
    auto delayed = [&](long hs) {
        const long full = hs / 2;
        if (hs < 0) return ivp.history(static_cast<double>(hs) * 0.5 * step);
        if (hs % 2 == 0) return traj.values[static_cast<std::size_t>(full)];
        const std::size_t j = static_cast<std::size_t>(full);
        const double x0 = traj.values[j], x1 = traj.values[j + 1];
        const double v0 = traj.derivatives[j], v1 = traj.derivatives[j + 1];
        // Hermite midpoint
        return 0.5 * (x0 + x1) + 0.125 * step * (v0 - v1);
    };

    const long lag = 2 * static_cast<long>(per_interval);  // tau in half-steps
    for (std::size_t i = 0; i < total; ++i) {
        const double t = static_cast<double>(i) * step;
        const double x = traj.values[i];
        const double v = traj.derivatives[i];
        const long hs0 = 2 * static_cast<long>(i) - lag;

        auto accel = [&](double xs, double ts, long hs) {
            const double f = ivp.forcing ? ivp.forcing(ts) : 0.0;
            return f - w1sq * xs - w2sq * delayed(hs);
        };

        const double k1x = v;
        const double k1v = accel(x, t, hs0);
        const double k2x = v + 0.5 * step * k1v;
        const double k2v = accel(x + 0.5 * step * k1x, t + 0.5 * step, hs0 + 1);
        const double k3x = v + 0.5 * step * k2v;
        const double k3v = accel(x + 0.5 * step * k2x, t + 0.5 * step, hs0 + 1);
        const double k4x = v + step * k3v;
        const double k4v = accel(x + step * k3x, t + step, hs0 + 2);

        traj.times.push_back(static_cast<double>(i + 1) * step);
        traj.values.push_back(x + step / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x));
        traj.derivatives.push_back(v + step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v));
    }
    return traj;
}

/// max |a(t) - b(t)| over the grid.
template <typename Fa, typename Fb>
double compare(Fa&& a, Fb&& b, const std::vector<double>& grid) {
    double worst = 0.0;
    for (double t : grid) {
        const double d = std::abs(a(t) - b(t));
        if (d > worst) worst = d;
    }
    return worst;
}

}  // namespace delayosc
