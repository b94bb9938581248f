#pragma once

// Independent cross-check oracles for the test suite.  These deliberately use
// different algorithms from the library (recursive Simpson instead of
// Gauss-Legendre panels, naive DFT instead of radix-2 FFT, erf closed forms
// instead of quadrature) so agreement is evidence, not tautology.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

using cd = std::complex<double>;

// Adaptive Simpson on the real line (complex-valued integrand).  The first
// `force` levels always subdivide: the error estimate is meaningless while the
// seed samples can still miss a bump that is narrow relative to (b - a).
inline cd simpson_rec(const std::function<cd(double)>& f, double a, double b, cd fa, cd fb, cd fm,
                      double tol, int depth, int force) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    cd flm = f(lm), frm = f(rm);
    cd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    cd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    cd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || (force <= 0 && std::abs(left + right - whole) < 15.0 * tol))
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, fm, flm, tol / 2.0, depth - 1, force - 1) +
           simpson_rec(f, m, b, fm, fb, frm, tol / 2.0, depth - 1, force - 1);
}

inline cd integrate_simpson(const std::function<cd(double)>& f, double a, double b,
                            double tol = 1e-12, int depth = 40, int min_depth = 8) {
    double m = 0.5 * (a + b);
    return simpson_rec(f, a, b, f(a), f(b), f(m), tol, depth, min_depth);
}

// Plain O(n^2) DFT, coefficients c_k = (1/n) sum_j f_j e^{-2 pi i j k / n}.
inline std::vector<cd> naive_dft(const std::vector<cd>& f) {
    std::size_t n = f.size();
    std::vector<cd> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        cd acc{};
        for (std::size_t j = 0; j < n; ++j) {
            double ang = -2.0 * M_PI * static_cast<double>(j) * static_cast<double>(k) /
                         static_cast<double>(n);
            acc += f[j] * cd(std::cos(ang), std::sin(ang));
        }
        c[k] = acc / static_cast<double>(n);
    }
    return c;
}

// Closed form of I = ∫_0^{tau_cap} e^{2 b tau} 2 sqrt(r^2 - delta tau) dtau
// via the substitution y = sqrt(r^2 - delta tau) and erf:
//   I = (4/delta) e^{beta r^2} ∫_{y_cap}^{r} y^2 e^{-beta y^2} dy,  beta = 2b/delta,
//   ∫ y^2 e^{-beta y^2} dy = sqrt(pi) erf(sqrt(beta) y) / (4 beta^{3/2})
//                            - y e^{-beta y^2} / (2 beta)            (b > 0).
inline double region_integral_closed(double b, double r, double delta, double tau_cap) {
    double beta = 2.0 * b / delta;
    double y_cap = std::sqrt(std::max(0.0, r * r - delta * tau_cap));
    if (std::abs(beta) < 1e-12) {  // flat-in-time fallback: 2/(3) (r^3-y^3) * (2/delta)
        return (4.0 / (3.0 * delta)) * (r * r * r - y_cap * y_cap * y_cap);
    }
    auto F = [&](double y) {
        return std::sqrt(M_PI) * std::erf(std::sqrt(beta) * y) / (4.0 * std::pow(beta, 1.5)) -
               y * std::exp(-beta * y * y) / (2.0 * beta);
    };
    return (4.0 / delta) * std::exp(beta * r * r) * (F(r) - F(y_cap));
}

}  // namespace oracles
