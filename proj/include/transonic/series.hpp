#pragma once

// Truncated bivariate Taylor series in (t - t0, x - x0) with complex
// coefficients, closed under arithmetic at a fixed total-degree cap N.
//
// Grading contract: every operation computes the coefficient at total degree d
// from input coefficients of total degree <= d only, with a fixed summation
// order per output coefficient.  Consequently solving/operating at cap N and
// then truncating to N' <= N reproduces the cap-N' result bit for bit, and
// real inputs stay exactly real through +, -, *, /.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "transonic/error.hpp"

namespace transonic {

class BivariateSeries {
public:
    using value_type = std::complex<double>;

    BivariateSeries() : t0_(0), x0_(0), deg_(0), c_(1, value_type{}) {}

    BivariateSeries(double t0, double x0, int degree)
        : t0_(t0), x0_(x0), deg_(degree) {
        require(degree >= 0 && degree <= 64, "series",
                "series degree must lie in [0, 64], got " + std::to_string(degree));
        c_.assign(static_cast<std::size_t>(deg_ + 1) * (deg_ + 1), value_type{});
    }

    static BivariateSeries constant(double t0, double x0, int degree, value_type v) {
        BivariateSeries s(t0, x0, degree);
        s.at(0, 0) = v;
        return s;
    }

    /// Series whose t = t0 slice is the polynomial sum_n coeffs[n] (x-x0)^n.
    static BivariateSeries from_univariate(double t0, double x0, int degree,
                                           const std::vector<value_type>& coeffs) {
        BivariateSeries s(t0, x0, degree);
        require(static_cast<int>(coeffs.size()) <= degree + 1, "series",
                "initial data degree exceeds the series truncation cap");
        for (std::size_t n = 0; n < coeffs.size(); ++n) s.at(0, static_cast<int>(n)) = coeffs[n];
        return s;
    }

    double t0() const { return t0_; }
    double x0() const { return x0_; }
    int degree() const { return deg_; }

    value_type& at(int m, int n) {
        check_index(m, n);
        return c_[static_cast<std::size_t>(m) * (deg_ + 1) + n];
    }
    value_type at(int m, int n) const {
        check_index(m, n);
        return c_[static_cast<std::size_t>(m) * (deg_ + 1) + n];
    }
    /// Coefficient access that reads 0 beyond the truncation triangle.
    value_type coeff(int m, int n) const {
        if (m < 0 || n < 0 || m + n > deg_) return value_type{};
        return c_[static_cast<std::size_t>(m) * (deg_ + 1) + n];
    }

    double max_abs_coeff() const {
        double r = 0.0;
        for (int m = 0; m <= deg_; ++m)
            for (int n = 0; n + m <= deg_; ++n) r = std::max(r, std::abs(coeff(m, n)));
        return r;
    }

    /// Smallest t-order m carrying a coefficient above tol (degree+1 if none).
    int min_t_order(double tol = 0.0) const {
        for (int m = 0; m <= deg_; ++m)
            for (int n = 0; n + m <= deg_; ++n)
                if (std::abs(coeff(m, n)) > tol) return m;
        return deg_ + 1;
    }

    BivariateSeries truncated(int new_degree) const {
        require(new_degree <= deg_, "series", "truncated() cannot raise the degree");
        BivariateSeries s(t0_, x0_, new_degree);
        for (int m = 0; m <= new_degree; ++m)
            for (int n = 0; n + m <= new_degree; ++n) s.at(m, n) = coeff(m, n);
        return s;
    }

    /// Same coefficients viewed at a larger cap (upper coefficients zero).
    BivariateSeries extended(int new_degree) const {
        require(new_degree >= deg_, "series", "extended() cannot lower the degree");
        BivariateSeries s(t0_, x0_, new_degree);
        for (int m = 0; m <= deg_; ++m)
            for (int n = 0; n + m <= deg_; ++n) s.at(m, n) = coeff(m, n);
        return s;
    }

    /// Horner evaluation at (t, x); complex arguments are allowed.
    value_type evaluate(value_type t, value_type x) const {
        value_type dt = t - t0_, dx = x - x0_;
        value_type acc = row_eval(deg_, dx);
        for (int m = deg_ - 1; m >= 0; --m) acc = acc * dt + row_eval(m, dx);
        return acc;
    }

    BivariateSeries d_dt() const {
        BivariateSeries s(t0_, x0_, deg_ > 0 ? deg_ - 1 : 0);
        if (deg_ == 0) return s;
        for (int m = 0; m + 1 <= deg_; ++m)
            for (int n = 0; m + 1 + n <= deg_ && m + n <= s.deg_; ++n)
                s.at(m, n) = static_cast<double>(m + 1) * coeff(m + 1, n);
        return s;
    }

    BivariateSeries d_dx() const {
        BivariateSeries s(t0_, x0_, deg_ > 0 ? deg_ - 1 : 0);
        if (deg_ == 0) return s;
        for (int m = 0; m <= s.deg_; ++m)
            for (int n = 0; m + n + 1 <= deg_ && m + n <= s.deg_; ++n)
                s.at(m, n) = static_cast<double>(n + 1) * coeff(m, n + 1);
        return s;
    }

    /// Quotient by (t - t0); requires the t^0 row to vanish within tol.
    BivariateSeries shift_down_t(double tol = 1e-12) const {
        for (int n = 0; n <= deg_; ++n)
            require(std::abs(coeff(0, n)) <= tol, "series",
                    "shift_down_t: series is not divisible by (t - t0)");
        BivariateSeries s(t0_, x0_, deg_ > 0 ? deg_ - 1 : 0);
        for (int m = 0; m <= s.deg_; ++m)
            for (int n = 0; m + n <= s.deg_; ++n) s.at(m, n) = coeff(m + 1, n);
        return s;
    }

    /// Series with coefficients Re(a_mn) (resp. Im(a_mn)); for real arguments
    /// these are the pointwise real/imaginary parts of the series value.
    BivariateSeries real_coeffs() const {
        BivariateSeries s(t0_, x0_, deg_);
        for (int m = 0; m <= deg_; ++m)
            for (int n = 0; n + m <= deg_; ++n) s.at(m, n) = coeff(m, n).real();
        return s;
    }
    BivariateSeries imag_coeffs() const {
        BivariateSeries s(t0_, x0_, deg_);
        for (int m = 0; m <= deg_; ++m)
            for (int n = 0; n + m <= deg_; ++n) s.at(m, n) = coeff(m, n).imag();
        return s;
    }

    /// The t = t0 slice as univariate coefficients in (x - x0).
    std::vector<value_type> restrict_t0() const {
        std::vector<value_type> r(static_cast<std::size_t>(deg_) + 1);
        for (int n = 0; n <= deg_; ++n) r[n] = coeff(0, n);
        return r;
    }

private:
    void check_index(int m, int n) const {
        require(m >= 0 && n >= 0 && m + n <= deg_, "series",
                "series coefficient index (" + std::to_string(m) + "," + std::to_string(n) +
                    ") exceeds the total-degree cap " + std::to_string(deg_));
    }

    value_type row_eval(int m, value_type dx) const {
        int top = deg_ - m;
        value_type acc = coeff(m, top);
        for (int n = top - 1; n >= 0; --n) acc = acc * dx + coeff(m, n);
        return acc;
    }

    double t0_, x0_;
    int deg_;
    std::vector<value_type> c_;
};

namespace detail {
inline void check_compatible(const BivariateSeries& a, const BivariateSeries& b) {
    require(a.t0() == b.t0() && a.x0() == b.x0(), "series",
            "series arithmetic requires matching expansion points");
}
}  // namespace detail

inline BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b) {
    detail::check_compatible(a, b);
    int deg = std::min(a.degree(), b.degree());
    BivariateSeries s(a.t0(), a.x0(), deg);
    for (int m = 0; m <= deg; ++m)
        for (int n = 0; n + m <= deg; ++n) s.at(m, n) = a.coeff(m, n) + b.coeff(m, n);
    return s;
}

inline BivariateSeries operator-(const BivariateSeries& a, const BivariateSeries& b) {
    detail::check_compatible(a, b);
    int deg = std::min(a.degree(), b.degree());
    BivariateSeries s(a.t0(), a.x0(), deg);
    for (int m = 0; m <= deg; ++m)
        for (int n = 0; n + m <= deg; ++n) s.at(m, n) = a.coeff(m, n) - b.coeff(m, n);
    return s;
}

inline BivariateSeries operator-(const BivariateSeries& a) {
    BivariateSeries s(a.t0(), a.x0(), a.degree());
    for (int m = 0; m <= a.degree(); ++m)
        for (int n = 0; n + m <= a.degree(); ++n) s.at(m, n) = -a.coeff(m, n);
    return s;
}

inline BivariateSeries operator*(const BivariateSeries& a, std::complex<double> k) {
    BivariateSeries s(a.t0(), a.x0(), a.degree());
    for (int m = 0; m <= a.degree(); ++m)
        for (int n = 0; n + m <= a.degree(); ++n) s.at(m, n) = a.coeff(m, n) * k;
    return s;
}
inline BivariateSeries operator*(std::complex<double> k, const BivariateSeries& a) { return a * k; }
inline BivariateSeries operator*(const BivariateSeries& a, double k) {
    return a * std::complex<double>(k, 0.0);
}
inline BivariateSeries operator*(double k, const BivariateSeries& a) {
    return a * std::complex<double>(k, 0.0);
}

inline BivariateSeries operator+(const BivariateSeries& a, std::complex<double> k) {
    BivariateSeries s = a;
    s.at(0, 0) += k;
    return s;
}
inline BivariateSeries operator-(const BivariateSeries& a, std::complex<double> k) {
    return a + (-k);
}

/// Cauchy product truncated at the joint degree cap.  The inner sum for each
/// output coefficient runs in a fixed order independent of the caps, which is
/// what makes truncation consistency exact.
inline BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
    detail::check_compatible(a, b);
    int deg = std::min(a.degree(), b.degree());
    BivariateSeries s(a.t0(), a.x0(), deg);
    for (int m = 0; m <= deg; ++m)
        for (int n = 0; n + m <= deg; ++n) {
            std::complex<double> acc{};
            for (int i = 0; i <= m; ++i)
                for (int j = 0; j <= n; ++j) acc += a.coeff(i, j) * b.coeff(m - i, n - j);
            s.at(m, n) = acc;
        }
    return s;
}

/// Power-series quotient; the divisor's constant coefficient must be nonzero.
inline BivariateSeries operator/(const BivariateSeries& a, const BivariateSeries& b) {
    detail::check_compatible(a, b);
    int deg = std::min(a.degree(), b.degree());
    std::complex<double> b0 = b.coeff(0, 0);
    require(std::abs(b0) > 0.0, "series",
            "series division by a series with vanishing constant coefficient");
    BivariateSeries q(a.t0(), a.x0(), deg);
    for (int d = 0; d <= deg; ++d)
        for (int n = 0; n <= d; ++n) {
            int m = d - n;
            std::complex<double> acc = a.coeff(m, n);
            for (int i = 0; i <= m; ++i)
                for (int j = 0; j <= n; ++j) {
                    if (i == 0 && j == 0) continue;
                    acc -= b.coeff(i, j) * q.coeff(m - i, n - j);
                }
            q.at(m, n) = acc / b0;
        }
    return q;
}

/// Square root with a caller-selected branch for the constant term.  The
/// remaining coefficients follow from grading the identity w * w = s.
inline BivariateSeries series_sqrt(const BivariateSeries& s, std::complex<double> root0) {
    std::complex<double> s0 = s.coeff(0, 0);
    require(std::abs(s0) > 0.0, "series",
            "series square root requires a nonvanishing constant coefficient");
    require(std::abs(root0 * root0 - s0) <= 1e-9 * std::abs(s0), "series",
            "series square root: provided branch is not a root of the constant term");
    BivariateSeries w(s.t0(), s.x0(), s.degree());
    w.at(0, 0) = root0;
    for (int d = 1; d <= s.degree(); ++d)
        for (int n = 0; n <= d; ++n) {
            int m = d - n;
            std::complex<double> acc = s.coeff(m, n);
            for (int i = 0; i <= m; ++i)
                for (int j = 0; j <= n; ++j) {
                    if ((i == 0 && j == 0) || (i == m && j == n)) continue;
                    acc -= w.coeff(i, j) * w.coeff(m - i, n - j);
                }
            w.at(m, n) = acc / (2.0 * root0);
        }
    return w;
}

}  // namespace transonic
