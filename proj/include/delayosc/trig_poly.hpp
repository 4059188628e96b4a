#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "delayosc/errors.hpp"
#include "delayosc/polynomial.hpp"

namespace delayosc {

/// Exact value of the form  p(t) + q(t)*cos(omega*t) + r(t)*sin(omega*t).
///
/// The space is closed under differentiation, argument shift, and particular
/// solutions of y'' + omega^2 y = g, so every step-interval segment of the
/// delayed oscillator lives here exactly; the only error anywhere is
/// round-off at the working precision. Values are immutable; every
/// operation returns a new value.
///
/// Canonical form: omega >= 0, polynomials trimmed, and omega == 0 whenever
/// both trig factors are zero (the pure part absorbs everything).
template <typename T>
class BasicTrigPoly {
public:
    using Poly = BasicPolynomial<T>;

    BasicTrigPoly() = default;  // zero

    static BasicTrigPoly pure(Poly p) {
        BasicTrigPoly tp;
        tp.p_ = std::move(p);
        return tp;
    }

    BasicTrigPoly(const T& omega, Poly p, Poly q, Poly r)
        : omega_(omega), p_(std::move(p)), q_(std::move(q)), r_(std::move(r)) {
        if (omega < T(0)) throw InvalidParameter("TrigPoly: omega must be >= 0");
        if (omega == T(0) && !(q_.is_zero() && r_.is_zero())) {
            throw InvalidParameter("TrigPoly: omega = 0 requires zero trig factors");
        }
        normalize();
    }

    const T& omega() const { return omega_; }
    const Poly& pure_part() const { return p_; }
    const Poly& cos_part() const { return q_; }
    const Poly& sin_part() const { return r_; }

    bool is_zero() const { return p_.is_zero() && q_.is_zero() && r_.is_zero(); }
    bool is_pure() const { return q_.is_zero() && r_.is_zero(); }

    T operator()(const T& t) const {
        using std::cos;
        using std::sin;
        T acc = p_(t);
        if (omega_ != T(0)) {
            const T w = omega_ * t;
            if (!q_.is_zero()) acc += q_(t) * cos(w);
            if (!r_.is_zero()) acc += r_(t) * sin(w);
        }
        return acc;
    }

    /// Exact derivative: the trig factors exchange polynomials with a
    /// factor of omega (q <- q' + omega*r, r <- r' - omega*q).
    BasicTrigPoly derivative() const {
        if (is_pure()) return pure(p_.derivative());
        BasicTrigPoly out;
        out.omega_ = omega_;
        out.p_ = p_.derivative();
        out.q_ = q_.derivative() + omega_ * r_;
        out.r_ = r_.derivative() + (-omega_) * q_;
        out.normalize();
        return out;
    }

    /// u with u(t) = (*this)(t + c): polynomials shift by binomial
    /// expansion, trig parts rotate by the angle-addition formulas.
    BasicTrigPoly shifted(const T& c) const {
        using std::cos;
        using std::sin;
        if (c == T(0)) return *this;
        BasicTrigPoly out;
        out.omega_ = omega_;
        out.p_ = p_.shifted(c);
        if (!is_pure()) {
            const T cw = cos(omega_ * c);
            const T sw = sin(omega_ * c);
            const Poly qs = q_.shifted(c);
            const Poly rs = r_.shifted(c);
            out.q_ = cw * qs + sw * rs;
            out.r_ = cw * rs + (-sw) * qs;
        }
        out.normalize();
        return out;
    }

    friend BasicTrigPoly operator+(const BasicTrigPoly& a, const BasicTrigPoly& b) {
        if (!a.is_pure() && !b.is_pure() && a.omega_ != b.omega_) {
            throw FrequencyMismatch("TrigPoly add: frequencies differ");
        }
        BasicTrigPoly out;
        out.omega_ = a.is_pure() ? b.omega_ : a.omega_;
        out.p_ = a.p_ + b.p_;
        out.q_ = a.q_ + b.q_;
        out.r_ = a.r_ + b.r_;
        out.normalize();
        return out;
    }

    friend BasicTrigPoly operator*(const T& c, const BasicTrigPoly& tp) {
        BasicTrigPoly out;
        out.omega_ = tp.omega_;
        out.p_ = c * tp.p_;
        out.q_ = c * tp.q_;
        out.r_ = c * tp.r_;
        out.normalize();
        return out;
    }

    BasicTrigPoly scaled(const T& c) const { return c * *this; }

private:
    void normalize() {
        if (q_.is_zero() && r_.is_zero()) omega_ = T(0);
    }

    T omega_ = T(0);
    Poly p_;
    Poly q_;
    Poly r_;
};

using TrigPoly = BasicTrigPoly<double>;

/// Particular solution y of  y'' + omega1^2 y = rhs.
///
/// The rhs frequency must be 0 or omega1 (the only cases the step recursion
/// produces). A trig rhs at omega1 is resonant, so its ansatz raises the
/// polynomial degree by one; for omega1 = 0 the solution is the double
/// antiderivative with zero integration constants.
template <typename T>
BasicTrigPoly<T> solve_particular(const BasicTrigPoly<T>& rhs, const T& omega1) {
    using Poly = BasicPolynomial<T>;
    if (omega1 < T(0)) throw InvalidParameter("solve_particular: omega1 must be >= 0");
    if (!rhs.is_pure() && rhs.omega() != omega1) {
        throw FrequencyMismatch("solve_particular: rhs frequency is neither 0 nor omega1");
    }

    if (omega1 == T(0)) {
        return BasicTrigPoly<T>::pure(rhs.pure_part().antiderivative().antiderivative());
    }

    const T w2 = omega1 * omega1;

    // Pure part: same-degree polynomial ansatz, solved top-down.
    Poly ppart;
    if (!rhs.pure_part().is_zero()) {
        const std::vector<T>& pc = rhs.pure_part().coeffs();
        const int n = static_cast<int>(pc.size()) - 1;
        std::vector<T> a(static_cast<std::size_t>(n) + 1, T(0));
        for (int j = n; j >= 0; --j) {
            T rhs_j = pc[static_cast<std::size_t>(j)];
            if (j + 2 <= n) {
                rhs_j -= T((j + 2) * (j + 1)) * a[static_cast<std::size_t>(j + 2)];
            }
            a[static_cast<std::size_t>(j)] = rhs_j / w2;
        }
        ppart = Poly(std::move(a));
    }

    // Resonant trig part: ansatz Q(t)cos + R(t)sin with deg raised by one and
    // zero constant terms; y'' + w^2 y = (Q'' + 2wR')cos + (R'' - 2wQ')sin.
    Poly qpart, rpart;
    if (!rhs.is_pure()) {
        const std::vector<T>& qc = rhs.cos_part().coeffs();
        const std::vector<T>& rc = rhs.sin_part().coeffs();
        const int d = static_cast<int>(std::max(qc.size(), rc.size())) - 1;
        std::vector<T> Q(static_cast<std::size_t>(d) + 2, T(0));
        std::vector<T> R(static_cast<std::size_t>(d) + 2, T(0));
        auto coef = [](const std::vector<T>& v, int i) {
            return i < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(i)] : T(0);
        };
        for (int j = d; j >= 0; --j) {
            const T denom = T(2) * omega1 * T(j + 1);
            T qj = coef(qc, j);
            T rj = coef(rc, j);
            if (j + 2 <= d + 1) {
                qj -= T((j + 2) * (j + 1)) * Q[static_cast<std::size_t>(j + 2)];
                rj -= T((j + 2) * (j + 1)) * R[static_cast<std::size_t>(j + 2)];
            }
            R[static_cast<std::size_t>(j + 1)] = qj / denom;
            Q[static_cast<std::size_t>(j + 1)] = -rj / denom;
        }
        qpart = Poly(std::move(Q));
        rpart = Poly(std::move(R));
    }

    if (qpart.is_zero() && rpart.is_zero()) return BasicTrigPoly<T>::pure(std::move(ppart));
    return BasicTrigPoly<T>(omega1, std::move(ppart), std::move(qpart), std::move(rpart));
}

/// Solution of y'' + omega1^2 y = 0 with y(t0) = y0, y'(t0) = y0p,
/// expanded into the global-time basis.
template <typename T>
BasicTrigPoly<T> homogeneous_with_ic(const T& omega1, const T& y0, const T& y0p, const T& t0) {
    using Poly = BasicPolynomial<T>;
    if (omega1 < T(0)) throw InvalidParameter("homogeneous_with_ic: omega1 must be >= 0");
    if (omega1 == T(0)) {
        return BasicTrigPoly<T>::pure(Poly{y0 - y0p * t0, y0p});
    }
    BasicTrigPoly<T> base(omega1, {}, Poly{y0}, Poly{y0p / omega1});
    return t0 == T(0) ? base : base.shifted(-t0);
}

}  // namespace delayosc
