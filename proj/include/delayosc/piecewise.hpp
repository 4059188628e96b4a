#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "delayosc/errors.hpp"
#include "delayosc/precision.hpp"
#include "delayosc/trig_poly.hpp"
#include "delayosc/types.hpp"

namespace delayosc {

enum class FundamentalKind { X1, X2 };

/// Horizon cap: polynomial degree grows by ~1 per interval and the
/// coefficient growth eventually exhausts even the wide working precision.
inline constexpr int kMaxIntervals = 64;
inline constexpr int kConditioningWarnIntervals = 32;

/// A fundamental solution x1 or x2 of
///     x''(t) + omega1^2 x(t) + omega2^2 x(t - tau) = 0
/// built by the method of steps: a prelude segment carrying the initial data
/// on [-tau, 0) and one exact trig-polynomial per interval [(k-1)tau, k*tau).
///
/// Segments are stored in local time u = t - start, which keeps coefficients
/// as small as the representation allows; the public evaluation interface is
/// global time throughout. Construction runs in wide precision; each segment
/// also keeps a double mirror plus a condition estimate, and evaluation uses
/// the double mirror whenever it is accurate to ~1e-13 relative, falling
/// back to the wide coefficients otherwise.
class PiecewiseSolution {
public:
    using WideTrig = BasicTrigPoly<Wide>;

    struct Segment {
        double start = 0.0;      // global time of the local origin
        TrigPoly value;          // f(u), u = t - start (double mirror)
        TrigPoly slope;          // f'
        TrigPoly curvature;      // f''
        WideTrig wide_value;
        WideTrig wide_slope;
        WideTrig wide_curvature;
        double condition = 1.0;  // max coefficient magnitude / value scale
    };

    /// Fundamental solution with the unit initial data: prelude 1 (X1) or
    /// t + tau (X2), the step ICs at 0 following by continuity.
    PiecewiseSolution(FundamentalKind kind, double omega1, double omega2,
                      double tau, int intervals)
        : PiecewiseSolution(kind, omega1, omega2, tau, intervals,
                            kind == FundamentalKind::X1
                                ? WideTrig::pure(BasicPolynomial<Wide>{Wide(1)})
                                : WideTrig::pure(BasicPolynomial<Wide>{Wide(0), Wide(1)}),
                            kind == FundamentalKind::X1 ? 1.0 : tau,
                            kind == FundamentalKind::X1 ? 0.0 : 1.0) {}

    /// General method-of-steps build from an arbitrary prelude (in local
    /// time u = t + tau on [-tau, 0)) and explicit state (x0, xp0) at t = 0.
    /// The Cauchy-formula kernels use this with a zero prelude, where the
    /// slope is deliberately discontinuous at 0.
    PiecewiseSolution(FundamentalKind kind, double omega1, double omega2, double tau,
                      int intervals, WideTrig prelude_local, double x0, double xp0)
        : kind_(kind), omega1_(omega1), omega2_(omega2), tau_(tau) {
        if (tau <= 0.0) throw InvalidParameter("build_fundamental: tau must be > 0");
        if (intervals < 1) throw InvalidParameter("build_fundamental: need at least one interval");
        if (intervals > kMaxIntervals) {
            throw InvalidParameter("build_fundamental: interval count exceeds cap of " +
                                   std::to_string(kMaxIntervals));
        }
        if (omega1 < 0.0 || omega2 < 0.0) {
            throw InvalidParameter("build_fundamental: frequencies must be >= 0");
        }

        const Wide wtau(tau);
        const Wide w1(omega1);

        // The initial data is held as a segment, so the delayed term on the
        // first interval is evaluated through the same machinery.
        prelude_ = make_segment(-tau, std::move(prelude_local), wtau);

        // Method of steps. In local time the delayed previous segment needs
        // no re-expansion: x_{k-1}(t - tau) at local u is just S_{k-1}(u).
        const Wide neg_w2sq = -Wide(omega2) * Wide(omega2);
        const WideTrig* prev = &prelude_.wide_value;
        Wide prev_end_value(x0);
        Wide prev_end_slope(xp0);
        segments_.reserve(static_cast<std::size_t>(intervals));
        for (int k = 1; k <= intervals; ++k) {
            WideTrig rhs = neg_w2sq * *prev;
            WideTrig part = solve_particular(rhs, w1);
            WideTrig part_slope = part.derivative();
            WideTrig hom = homogeneous_with_ic(w1, prev_end_value - part(Wide(0)),
                                               prev_end_slope - part_slope(Wide(0)), Wide(0));
            segments_.push_back(make_segment((k - 1) * tau, hom + part, wtau));
            const Segment& s = segments_.back();
            prev = &s.wide_value;
            prev_end_value = s.wide_value(wtau);
            prev_end_slope = s.wide_slope(wtau);
        }
    }

    FundamentalKind kind() const { return kind_; }
    double omega1() const { return omega1_; }
    double omega2() const { return omega2_; }
    double tau() const { return tau_; }
    int intervals() const { return static_cast<int>(segments_.size()); }
    double horizon() const { return static_cast<double>(intervals()) * tau_; }
    const Segment& prelude() const { return prelude_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// Worst coefficient-cancellation factor across segments. Evaluation is
    /// accurate to roughly (working epsilon) * condition_estimate() relative
    /// to the local solution scale; beyond ~1e34 even the wide build is
    /// saturated and results degrade (documented omega1 -> 0 behavior).
    double condition_estimate() const {
        double worst = prelude_.condition;
        for (const auto& s : segments_) worst = std::max(worst, s.condition);
        return worst;
    }

    /// Value (order 0) or exact derivative (order 1, 2) at global time t.
    /// Zero identically for t < -tau; intervals own their left knot.
    double eval(double t, int order = 0) const {
        check_order(order);
        if (t < -tau_) return 0.0;
        if (t >= horizon()) throw OutOfHorizon("evaluation at t >= K*tau");
        return eval_segment(locate(t), t, order);
    }

    /// One-sided limit at t; exact at knots via analytic continuation of the
    /// adjacent segment. Left limits are defined on (-tau, K*tau], right
    /// limits on [-tau, K*tau).
    double eval_limit(double t, int order, Side side) const {
        check_order(order);
        if (side == Side::Right) {
            if (t < -tau_) return 0.0;
            if (t >= horizon()) throw OutOfHorizon("right limit at t >= K*tau");
            return eval_segment(locate(t), t, order);
        }
        if (t <= -tau_) return 0.0;
        if (t > horizon()) throw OutOfHorizon("left limit beyond K*tau");
        // left limit: evaluate the segment owning t - 0+
        int idx;
        if (t <= 0.0) {
            idx = -1;
        } else {
            const double ratio = t / tau_;
            double f = std::floor(ratio);
            if (f == ratio) f -= 1.0;  // a representable knot belongs to its left segment
            idx = static_cast<int>(f);
            if (idx >= intervals()) idx = intervals() - 1;
        }
        return eval_segment(idx, t, order);
    }

private:
    // double evaluation keeps ~1e-13 relative headroom below this
    static constexpr double kDoublePathConditionCap = 5e2;

    static void check_order(int order) {
        if (order < 0 || order > 2) throw InvalidParameter("derivative order must be 0, 1 or 2");
    }

    static double round_trig(const WideTrig& w, TrigPoly& out) {
        auto round_poly = [](const BasicPolynomial<Wide>& p, double& max_coeff) {
            std::vector<double> c;
            c.reserve(p.coeffs().size());
            for (const Wide& v : p.coeffs()) {
                const double d = to_double(v);
                max_coeff = std::max(max_coeff, std::abs(d));
                c.push_back(d);
            }
            return Polynomial(std::move(c));
        };
        double max_coeff = 0.0;
        Polynomial p = round_poly(w.pure_part(), max_coeff);
        Polynomial q = round_poly(w.cos_part(), max_coeff);
        Polynomial r = round_poly(w.sin_part(), max_coeff);
        out = w.is_pure() ? TrigPoly::pure(std::move(p))
                          : TrigPoly(to_double(w.omega()), std::move(p), std::move(q),
                                     std::move(r));
        return max_coeff;
    }

    Segment make_segment(double start, WideTrig f, const Wide& wtau) const {
        Segment s;
        s.start = start;
        s.wide_value = std::move(f);
        s.wide_slope = s.wide_value.derivative();
        s.wide_curvature = s.wide_slope.derivative();
        double max_coeff = round_trig(s.wide_value, s.value);
        max_coeff = std::max(max_coeff, round_trig(s.wide_slope, s.slope));
        max_coeff = std::max(max_coeff, round_trig(s.wide_curvature, s.curvature));
        double scale = 1.0;
        for (const Wide& u : {Wide(0), wtau / 2, wtau}) {
            scale = std::max(scale, std::abs(to_double(s.wide_value(u))));
        }
        s.condition = std::max(1.0, max_coeff / scale);
        return s;
    }

    // Index -1 = prelude, 0..K-1 = step segments. Assumes -tau <= t < K*tau.
    int locate(double t) const {
        if (t < 0.0) return -1;
        int idx = static_cast<int>(std::floor(t / tau_));
        if (idx >= intervals()) idx = intervals() - 1;  // guard t = K*tau - ulp
        return idx;
    }

    double eval_segment(int idx, double t, int order) const {
        if (idx < -1) return 0.0;
        const Segment& s = idx < 0 ? prelude_ : segments_[static_cast<std::size_t>(idx)];
        const double u = t - s.start;
        if (s.condition < kDoublePathConditionCap) {
            switch (order) {
                case 0: return s.value(u);
                case 1: return s.slope(u);
                default: return s.curvature(u);
            }
        }
        const Wide wu(u);
        switch (order) {
            case 0: return to_double(s.wide_value(wu));
            case 1: return to_double(s.wide_slope(wu));
            default: return to_double(s.wide_curvature(wu));
        }
    }

    FundamentalKind kind_;
    double omega1_;
    double omega2_;
    double tau_;
    Segment prelude_{};
    std::vector<Segment> segments_;
};

inline PiecewiseSolution build_fundamental(FundamentalKind kind, double omega1,
                                           double omega2, double tau, int intervals) {
    return PiecewiseSolution(kind, omega1, omega2, tau, intervals);
}

namespace detail {

// Shared evaluator for the delay cosine (odd = false) and sine (odd = true)
// piecewise polynomials. Interval k >= 0 covers [(k-1)tau, k*tau) and sums
// terms j = 0..k; term j vanishes at the knot that introduces it, so the
// functions are continuous there by construction.
inline double delay_trig(double omega, double tau, double t, bool odd, int interval) {
    double acc = 0.0;
    double sign = 1.0;
    for (int j = 0; j <= interval; ++j) {
        const double base = t - (static_cast<double>(j) - 1.0) * tau;
        const int power = odd ? 2 * j + 1 : 2 * j;
        double term = 1.0;  // omega^power * base^power / power!
        for (int i = 1; i <= power; ++i) {
            term *= omega * base / static_cast<double>(i);
        }
        acc += sign * term;
        sign = -sign;
    }
    return acc;
}

inline int delay_interval(double tau, double t, Side side) {
    // interval index: 0 on [-tau, 0), k on [(k-1)tau, k*tau)
    const double ratio = t / tau;
    double k = std::floor(ratio) + 1.0;
    if (side == Side::Left && std::round(ratio) == ratio) k -= 1.0;
    if (k < 0.0) k = 0.0;
    return static_cast<int>(k);
}

}  // namespace detail

/// Delay cosine: piecewise 2k-degree polynomial solving x'' = -omega^2 x(t-tau)
/// with x = 1 on [-tau, 0); 0 for t < -tau.
inline double delay_cosine(double omega, double tau, double t) {
    if (tau <= 0.0) throw InvalidParameter("delay_cosine: tau must be > 0");
    if (omega < 0.0) throw InvalidParameter("delay_cosine: omega must be >= 0");
    if (t < -tau) return 0.0;
    return detail::delay_trig(omega, tau, t, false, detail::delay_interval(tau, t, Side::Right));
}

/// Delay sine: piecewise (2k+1)-degree polynomial, omega*(t+tau) on [-tau, 0).
inline double delay_sine(double omega, double tau, double t) {
    if (tau <= 0.0) throw InvalidParameter("delay_sine: tau must be > 0");
    if (omega < 0.0) throw InvalidParameter("delay_sine: omega must be >= 0");
    if (t < -tau) return 0.0;
    return detail::delay_trig(omega, tau, t, true, detail::delay_interval(tau, t, Side::Right));
}

/// One-sided limits at knots (adjacent-interval polynomial evaluation).
inline double delay_cosine_limit(double omega, double tau, double t, Side side) {
    if (tau <= 0.0) throw InvalidParameter("delay_cosine: tau must be > 0");
    if (t < -tau || (t == -tau && side == Side::Left)) return 0.0;
    return detail::delay_trig(omega, tau, t, false, detail::delay_interval(tau, t, side));
}

inline double delay_sine_limit(double omega, double tau, double t, Side side) {
    if (tau <= 0.0) throw InvalidParameter("delay_sine: tau must be > 0");
    if (t < -tau || (t == -tau && side == Side::Left)) return 0.0;
    return detail::delay_trig(omega, tau, t, true, detail::delay_interval(tau, t, side));
}

}  // namespace delayosc
