#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "delayosc/errors.hpp"

namespace delayosc {

/// Gauss-Legendre rule on [-1, 1]. Nodes are Legendre roots found by Newton
/// iteration from the Chebyshev initial guess; converges to machine
/// precision in a handful of steps and is fully deterministic.
class GaussLegendre {
public:
    static constexpr int kMinNodes = 2;
    static constexpr int kMaxNodes = 64;

    explicit GaussLegendre(int n) {
        if (n < kMinNodes || n > kMaxNodes) {
            throw InvalidParameter("GaussLegendre: node count must be in [2, 64]");
        }
        nodes_.resize(static_cast<std::size_t>(n));
        weights_.resize(static_cast<std::size_t>(n));
        const int half = (n + 1) / 2;
        for (int i = 0; i < half; ++i) {
            double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                // Legendre recurrence for P_n(x) and P_n'(x)
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            // one clean polish step for the weight's derivative value
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes_[static_cast<std::size_t>(i)] = -x;
            weights_[static_cast<std::size_t>(i)] = w;
            nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
            weights_[static_cast<std::size_t>(n - 1 - i)] = w;
        }
    }

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    template <typename F>
    double integrate(F&& f, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double hw = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            acc += weights_[i] * f(mid + hw * nodes_[i]);
        }
        return acc * hw;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Composite integral of f over [a, b], split at the given breakpoints so
/// each panel sees a smooth integrand. Breakpoints outside (a, b) are
/// ignored; duplicates are merged.
template <typename F>
double integrate_split(F&& f, double a, double b, std::vector<double> splits,
                       const GaussLegendre& rule) {
    if (!(b > a)) return 0.0;
    splits.erase(std::remove_if(splits.begin(), splits.end(),
                                [&](double s) { return !(s > a && s < b); }),
                 splits.end());
    std::sort(splits.begin(), splits.end());
    const double tol = 1e-14 * (std::abs(a) + std::abs(b) + 1.0);
    double acc = 0.0;
    double lo = a;
    for (double s : splits) {
        if (s - lo > tol) {
            acc += rule.integrate(f, lo, s);
            lo = s;
        }
    }
    acc += rule.integrate(f, lo, b);
    return acc;
}

}  // namespace delayosc
