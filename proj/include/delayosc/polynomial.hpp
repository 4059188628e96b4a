#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace delayosc {

/// Dense univariate polynomial over scalar T, coefficient index = power of t.
/// Canonical form: no trailing zero coefficient is ever stored; the zero
/// polynomial is the empty coefficient list.
///
/// The scalar is a template parameter because late step segments are
/// evaluated in extended precision: their exact coefficients grow like
/// (omega2^2 / 2 omega1)^k while the segment values stay moderate, so the
/// working precision, not the algorithm, decides how many intervals are
/// representable.
template <typename T>
class BasicPolynomial {
public:
    BasicPolynomial() = default;

    BasicPolynomial(std::initializer_list<T> coeffs) : coeffs_(coeffs) { trim(); }

    explicit BasicPolynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static BasicPolynomial zero() { return BasicPolynomial{}; }

    bool is_zero() const { return coeffs_.empty(); }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    const std::vector<T>& coeffs() const { return coeffs_; }

    T operator()(const T& t) const {
        T acc(0);
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            acc = acc * t + coeffs_[i];
        }
        return acc;
    }

    BasicPolynomial derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<T> out(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) {
            out[i - 1] = coeffs_[i] * T(static_cast<int>(i));
        }
        return BasicPolynomial(std::move(out));
    }

    /// Antiderivative with zero integration constant.
    BasicPolynomial antiderivative() const {
        if (coeffs_.empty()) return {};
        std::vector<T> out(coeffs_.size() + 1, T(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            out[i + 1] = coeffs_[i] / T(static_cast<int>(i) + 1);
        }
        return BasicPolynomial(std::move(out));
    }

    /// p(t + c), expanded by the binomial theorem.
    BasicPolynomial shifted(const T& c) const {
        if (coeffs_.empty() || c == T(0)) return *this;
        const std::size_t n = coeffs_.size();
        std::vector<T> out(n, T(0));
        for (std::size_t i = 0; i < n; ++i) {
            // distribute coeffs_[i] * (t + c)^i
            T binom(1);  // C(i, j) built from the top power down
            const T& term = coeffs_[i];
            out[i] += term;
            T cpow(1);
            for (std::size_t j = i; j-- > 0;) {
                binom *= T(static_cast<int>(j) + 1) / T(static_cast<int>(i - j));
                cpow *= c;
                out[j] += term * binom * cpow;
            }
        }
        return BasicPolynomial(std::move(out));
    }

    friend BasicPolynomial operator+(const BasicPolynomial& a, const BasicPolynomial& b) {
        std::vector<T> out(std::max(a.coeffs_.size(), b.coeffs_.size()), T(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[i] += b.coeffs_[i];
        return BasicPolynomial(std::move(out));
    }

    friend BasicPolynomial operator*(const T& c, const BasicPolynomial& p) {
        if (c == T(0)) return {};
        std::vector<T> out(p.coeffs_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * p.coeffs_[i];
        return BasicPolynomial(std::move(out));
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
    }

    std::vector<T> coeffs_;
};

using Polynomial = BasicPolynomial<double>;

}  // namespace delayosc
