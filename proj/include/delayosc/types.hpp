#pragma once

#include <functional>

namespace delayosc {

/// Which one-sided limit to take at a piecewise knot.
enum class Side { Left, Right };

/// A delay initial-value problem reduced to plain callables.
/// This is the lingua franca between the analytic solver and the
/// independent verification code: no symbolic types cross this boundary.
struct DelayIvp {
    double omega1 = 0.0;  // frequency of the undelayed restoring term
    double omega2 = 0.0;  // frequency of the delayed restoring term
    double tau = 1.0;     // delay, > 0
    int intervals = 1;    // horizon = intervals * tau

    std::function<double(double)> history;        // phi on [-tau, 0]
    std::function<double(double)> history_slope;  // phi'
    std::function<double(double)> forcing;        // f on [0, horizon]; null means 0
};

}  // namespace delayosc
