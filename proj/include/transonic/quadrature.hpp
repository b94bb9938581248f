#pragma once

// Composite Gauss-Legendre quadrature with self-validating refinement: panel
// counts are doubled until two successive composite values agree within the
// declared absolute tolerance.  Non-convergence is an error, never a silently
// wrong number.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "transonic/error.hpp"

namespace transonic {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
/// recurrence (accurate to machine precision; no tabulated constants).
inline const GaussRule& gauss_legendre(int n = 16) {
    static thread_local std::vector<GaussRule> cache(65);
    require(n >= 2 && n <= 64, "quadrature", "Gauss rule order out of range");
    GaussRule& r = cache[static_cast<std::size_t>(n)];
    if (!r.nodes.empty()) return r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    int mhalf = (n + 1) / 2;
    for (int i = 0; i < mhalf; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

template <typename F>
std::complex<double> integrate_panels(F&& f, double a, double b, int panels, int order = 16) {
    const GaussRule& g = gauss_legendre(order);
    std::complex<double> acc{};
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h, half = 0.5 * h;
        std::complex<double> panel{};
        for (std::size_t k = 0; k < g.nodes.size(); ++k)
            panel += g.weights[k] * f(mid + half * g.nodes[k]);
        acc += panel * half;
    }
    return acc;
}

struct QuadResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    int panels = 0;
};

/// Refine panel count until |I_{2n} - I_n| <= tol (absolute, with a relative
/// floor).  Throws if max_panels is reached without agreement.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, double tol, int init_panels = 4,
                              int max_panels = 1 << 14) {
    require(b >= a, "quadrature", "integration bounds out of order");
    if (a == b) return {std::complex<double>{}, 0.0, 0};
    std::complex<double> prev = integrate_panels(f, a, b, init_panels);
    for (int n = init_panels * 2; n <= max_panels; n *= 2) {
        std::complex<double> cur = integrate_panels(f, a, b, n);
        double diff = std::abs(cur - prev);
        if (diff <= std::max(tol, 1e-15 * std::abs(cur))) return {cur, diff, n};
        prev = cur;
    }
    throw Error("quadrature", "quadrature did not converge to tolerance " + std::to_string(tol) +
                                  " within " + std::to_string(max_panels) + " panels");
}

/// Tensor-product Gauss-Legendre over [ta,tb] x [xa,xb] with simultaneous
/// panel doubling in both directions until self-agreement within tol.
template <typename F>
QuadResult integrate2d_adaptive(F&& f, double ta, double tb, double xa, double xb, double tol,
                                int init_panels = 2, int max_panels = 256) {
    require(tb >= ta && xb >= xa, "quadrature", "integration bounds out of order");
    if (ta == tb || xa == xb) return {std::complex<double>{}, 0.0, 0};
    const GaussRule& g = gauss_legendre(16);
    auto composite = [&](int pt, int px) {
        std::complex<double> acc{};
        double ht = (tb - ta) / pt, hx = (xb - xa) / px;
        for (int i = 0; i < pt; ++i) {
            double tmid = ta + (i + 0.5) * ht;
            for (int j = 0; j < px; ++j) {
                double xmid = xa + (j + 0.5) * hx;
                std::complex<double> cell{};
                for (std::size_t a1 = 0; a1 < g.nodes.size(); ++a1) {
                    double t = tmid + 0.5 * ht * g.nodes[a1];
                    std::complex<double> row{};
                    for (std::size_t a2 = 0; a2 < g.nodes.size(); ++a2)
                        row += g.weights[a2] * f(t, xmid + 0.5 * hx * g.nodes[a2]);
                    cell += g.weights[a1] * row;
                }
                acc += cell * (0.25 * ht * hx);
            }
        }
        return acc;
    };
    std::complex<double> prev = composite(init_panels, init_panels);
    for (int n = init_panels * 2; n <= max_panels; n *= 2) {
        std::complex<double> cur = composite(n, n);
        double diff = std::abs(cur - prev);
        if (diff <= std::max(tol, 1e-15 * std::abs(cur))) return {cur, diff, n};
        prev = cur;
    }
    throw Error("quadrature", "2d quadrature did not converge to tolerance " +
                                  std::to_string(tol));
}

}  // namespace transonic
