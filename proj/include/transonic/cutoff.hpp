#pragma once

// Infinitely differentiable cutoff bump: identically 1 on the inner half of
// its support radius, identically 0 outside the full radius, with all
// derivatives vanishing at both transition endpoints.  The transition profile
// composes a polynomial smoothstep of selectable order (steepness knob) with
// an exponential flat-ended mollifier, so the result is C-infinity while the
// order parameter still shapes the ramp.

#include <cmath>

#include "transonic/error.hpp"

namespace transonic {

namespace detail {

/// Smoothstep polynomial S_N on [0,1]: degree 2N+1, N vanishing derivatives
/// at both ends, S_N(0)=0, S_N(1)=1.
inline double smoothstep_poly(int N, double u, double* deriv = nullptr) {
    double value = 0.0, dvalue = 0.0;
    double binom_nk = 1.0;  // C(N+k, k)
    // C(2N+1, N-k) for k=0.. start at C(2N+1, N) and step down.
    double binom_top = 1.0;
    for (int j = 0; j < N; ++j) binom_top = binom_top * (2.0 * N + 1.0 - j) / (j + 1.0);
    double upow = std::pow(u, N + 1);
    for (int k = 0; k <= N; ++k) {
        double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        double coeff = sgn * binom_nk * binom_top;
        int deg = N + 1 + k;
        value += coeff * upow;
        dvalue += coeff * deg * ((u != 0.0) ? upow / u : (deg == 1 ? 1.0 : 0.0));
        binom_nk = binom_nk * (N + k + 1.0) / (k + 1.0);
        binom_top = binom_top * (N - k) / (N + 2.0 + k);
        upow *= u;
    }
    if (deriv) *deriv = dvalue;
    return value;
}

/// Flat-ended mollifier ramp on [0,1]: m(0)=1, m(1)=0, all derivatives zero
/// at both ends.  Built from h(y)=exp(-1/y).
inline double mollifier_ramp(double s, double* deriv = nullptr) {
    auto h = [](double y) { return (y > 0.0) ? std::exp(-1.0 / y) : 0.0; };
    auto hp = [&](double y) { return (y > 0.0) ? h(y) / (y * y) : 0.0; };
    double num = h(1.0 - s), den = h(s) + h(1.0 - s);
    if (deriv) *deriv = -(hp(1.0 - s) * h(s) + h(1.0 - s) * hp(s)) / (den * den);
    return num / den;
}

}  // namespace detail

struct CutoffSpec {
    double center = 0.0;
    double radius = 0.3;  // full support radius; plateau covers radius/2
    int order = 8;        // smoothstep steepness of the transition ramp

    void validate() const {
        require(radius > 0.0, "cutoff", "cutoff radius must be positive");
        require(order >= 1 && order <= 32, "cutoff", "cutoff order out of range");
    }

    /// Value of the bump at x: 1 on |x-center| <= radius/2, 0 outside
    /// |x-center| >= radius, smooth monotone ramp between.
    double value(double x) const {
        double u = (std::abs(x - center) - 0.5 * radius) / (0.5 * radius);
        if (u <= 0.0) return 1.0;
        if (u >= 1.0) return 0.0;
        return detail::mollifier_ramp(detail::smoothstep_poly(order, u));
    }

    /// d/dx of value(); supported only on radius/2 <= |x-center| <= radius.
    double derivative(double x) const {
        double d = x - center;
        double u = (std::abs(d) - 0.5 * radius) / (0.5 * radius);
        if (u <= 0.0 || u >= 1.0) return 0.0;
        double dpoly = 0.0;
        double s = detail::smoothstep_poly(order, u, &dpoly);
        double dr = 0.0;
        detail::mollifier_ramp(s, &dr);
        double sign = (d >= 0.0) ? 1.0 : -1.0;
        return dr * dpoly * sign * 2.0 / radius;
    }

    double support_lo() const { return center - radius; }
    double support_hi() const { return center + radius; }
};

}  // namespace transonic
