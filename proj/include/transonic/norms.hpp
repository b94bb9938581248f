#pragma once

// Sobolev norms via the discrete Fourier transform of tapered window samples,
// and Gevrey norms as weighted suprema of derivative magnitudes.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "transonic/cutoff.hpp"
#include "transonic/error.hpp"

namespace transonic {

/// In-place radix-2 FFT (forward: sign -1 in the exponent).  Length must be a
/// power of two.
inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse = false) {
    std::size_t n = a.size();
    require(n > 0 && (n & (n - 1)) == 0, "illposedness", "FFT length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& c : a) c /= static_cast<double>(n);
}

/// Sobolev norm of order s from uniform periodic samples on a window of
/// length L:  sqrt( L * sum_k (1 + k^2)^s |c_k|^2 ),  c_k the normalized
/// Fourier coefficients, k the signed integer bin.  At s = 0 this is the
/// discrete L^2 norm (the sqrt(L) window normalization makes sin(x) on
/// [0, 2*pi) come out as sqrt(pi)).  Samples must already be periodic on the
/// window or tapered to zero at its edges.
inline double sobolev_norm(const std::vector<std::complex<double>>& samples,
                           double window_length, double s) {
    require(window_length > 0.0, "illposedness", "window length must be positive");
    std::size_t n = samples.size();
    require(n >= 2 && (n & (n - 1)) == 0, "illposedness",
            "sobolev_norm needs a power-of-two number of uniform samples");
    std::vector<std::complex<double>> hat = samples;
    fft_radix2(hat, false);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double ks = (k <= n / 2) ? static_cast<double>(k)
                                 : static_cast<double>(k) - static_cast<double>(n);
        double c = std::abs(hat[k]) / static_cast<double>(n);
        acc += std::pow(1.0 + ks * ks, s) * c * c;
    }
    return std::sqrt(window_length * acc);
}

struct TaperedWindow {
    std::vector<std::complex<double>> samples;
    double window_length = 0.0;
};

/// Restrict a function to the ball |x - x0| <= rbar and taper it to zero at
/// the edges with the smooth bump (plateau on the inner half), producing
/// periodic-compatible samples for sobolev_norm.
inline TaperedWindow restrict_and_taper(const std::function<std::complex<double>(double)>& f,
                                        double x0, double rbar, std::size_t n,
                                        int taper_order = 8) {
    require(rbar > 0.0, "illposedness", "restriction radius must be positive");
    require(n >= 2 && (n & (n - 1)) == 0, "illposedness",
            "sample count must be a power of two");
    CutoffSpec taper{x0, rbar, taper_order};
    TaperedWindow w;
    w.window_length = 2.0 * rbar;
    w.samples.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double x = x0 - rbar + w.window_length * static_cast<double>(j) / static_cast<double>(n);
        w.samples[j] = f(x) * taper.value(x);
    }
    return w;
}

struct GevreyResult {
    double value = 0.0;
    int argmax_beta = 0;
    bool truncation_suspect = false;  // max attained at beta_max
};

/// Gevrey norm from a derivative-supremum oracle:
///   max over beta <= beta_max of  sup|d^beta f| * c^(-beta) * (beta!)^(-1/sigma),
/// computed in log space.  Flags when the max sits at beta_max, since the
/// true supremum over all beta may then be truncated.
inline GevreyResult gevrey_norm(const std::function<double(int)>& deriv_sup, double sigma,
                                double c, int beta_max) {
    require(sigma > 0.0 && sigma < 1.0, "illposedness", "Gevrey index sigma must lie in (0,1)");
    require(c > 0.0, "illposedness", "Gevrey constant c must be positive");
    require(beta_max >= 0, "illposedness", "beta_max must be nonnegative");
    GevreyResult r;
    double best_log = -std::numeric_limits<double>::infinity();
    for (int b = 0; b <= beta_max; ++b) {
        double sup = deriv_sup(b);
        require(sup >= 0.0, "illposedness", "derivative supremum oracle returned a negative value");
        if (sup == 0.0) continue;
        double lg = std::log(sup) - b * std::log(c) - std::lgamma(b + 1.0) / sigma;
        if (lg > best_log) {
            best_log = lg;
            r.argmax_beta = b;
        }
    }
    if (std::isfinite(best_log)) r.value = std::exp(best_log);
    r.truncation_suspect = (r.argmax_beta == beta_max && r.value > 0.0);
    return r;
}

/// Gevrey norm of a univariate polynomial sum_n coeffs[n] (x - x0)^n over the
/// ball |x - x0| <= ball_radius; derivative suprema by exact coefficient
/// differentiation and a dense modulus scan.
inline GevreyResult gevrey_norm(const std::vector<std::complex<double>>& coeffs, double sigma,
                                double c, double ball_radius, int beta_max,
                                int scan_points = 129) {
    require(ball_radius > 0.0, "illposedness", "ball radius must be positive");
    int deg = static_cast<int>(coeffs.size()) - 1;
    auto deriv_sup = [&](int beta) -> double {
        if (beta > deg) return 0.0;
        // Coefficients of the beta-th derivative in (x - x0).
        std::vector<std::complex<double>> d(coeffs.begin() + beta, coeffs.end());
        double fact = 1.0;
        for (std::size_t n = 0; n < d.size(); ++n) {
            fact = 1.0;
            for (int j = 1; j <= beta; ++j) fact *= static_cast<double>(n + j);
            d[n] *= fact;
        }
        double sup = 0.0;
        for (int i = 0; i < scan_points; ++i) {
            double dx = -ball_radius + 2.0 * ball_radius * i / (scan_points - 1.0);
            std::complex<double> acc{};
            for (std::size_t n = d.size(); n-- > 0;) acc = acc * dx + d[n];
            sup = std::max(sup, std::abs(acc));
        }
        return sup;
    };
    return gevrey_norm(deriv_sup, sigma, c, beta_max);
}

}  // namespace transonic
