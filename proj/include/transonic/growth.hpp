#pragma once

// Frozen-coefficient modal solutions, space-time region norms, and the
// norm-ratio growth experiment over a wavenumber ladder.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "transonic/eigen2.hpp"
#include "transonic/error.hpp"
#include "transonic/gas.hpp"
#include "transonic/norms.hpp"
#include "transonic/parallel.hpp"
#include "transonic/quadrature.hpp"

namespace transonic {

/// Plane-wave solution v(t,x) = a exp(i k (x - lambda t)) w of the frozen
/// linearization at a base state, built on the eigenpair with Im(lambda) >= 0.
struct ModalSolution {
    FlowState base{};
    Mat2c frozen{};       // coefficient matrix frozen at the base state
    int k = 1;
    double a = 1.0;
    cd lambda{};          // upper-half-plane eigenvalue
    Vec2c w{};            // matching unit eigenvector
    bool hyperbolic = false;  // real spectrum: no modal amplification

    cd value(int component, double t, double x) const {
        cd phase = std::exp(cd(0.0, 1.0) * static_cast<double>(k) * (x - lambda * t));
        return a * phase * w.v[component];
    }

    /// |v(t, x)| / |v(0, x)|, independent of x.
    double amplitude_factor(double t) const {
        return std::exp(static_cast<double>(k) * lambda.imag() * t);
    }

    std::vector<std::array<cd, 2>> field_on_grid(double t, const std::vector<double>& xs) const {
        std::vector<std::array<cd, 2>> out(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            out[i] = {value(0, t, xs[i]), value(1, t, xs[i])};
        return out;
    }
};

/// Build the modal solution at a base state.  When c2_override > 0 the
/// coefficient matrix uses that squared sound speed directly instead of the
/// barotropic closure, so fixed-speed examples can be reproduced exactly.
inline ModalSolution modal_linear_solution(const GasModel& model, const FlowState& base, int k,
                                           double a, double c2_override = -1.0) {
    require(k >= 1, "illposedness", "wavenumber k must be a positive integer");
    require(a > 0.0, "illposedness", "modal amplitude must be positive");
    Mat2d A = (c2_override > 0.0) ? flux_matrix(base.u1, base.u2, c2_override)
                                  : flux_matrix(model, base);
    ModalSolution sol;
    sol.base = base;
    sol.frozen = Mat2c::from(A);
    sol.k = k;
    sol.a = a;
    EigenDecomposition eig = eigen_decompose(sol.frozen);
    sol.lambda = eig.lambda[0];  // sorted with Im >= 0 first
    sol.w = Vec2c{{eig.S.a[0][0], eig.S.a[1][0]}};
    double scale = sol.frozen.max_abs();
    sol.hyperbolic = std::abs(sol.lambda.imag()) <= 1e-12 * std::max(1.0, scale);
    return sol;
}

/// Largest pointwise residual |d_t v + A d_x v| of a modal solution over a
/// (t, x) grid.  Zero (to rounding) certifies the plug-in identity.
inline double modal_residual_max(const ModalSolution& sol, const std::vector<double>& ts,
                                 const std::vector<double>& xs) {
    // d_t v + A d_x v = i k a e^{ik(x - lambda t)} (A - lambda I) w.
    Vec2c Aw = sol.frozen * sol.w;
    double mismatch = std::hypot(std::abs(Aw.v[0] - sol.lambda * sol.w.v[0]),
                                 std::abs(Aw.v[1] - sol.lambda * sol.w.v[1]));
    double worst = 0.0;
    for (double t : ts) {
        for (double x : xs) {
            cd phase = std::exp(cd(0.0, 1.0) * static_cast<double>(sol.k) * (x - sol.lambda * t));
            double mag = static_cast<double>(sol.k) * sol.a * std::abs(phase) * mismatch;
            worst = std::max(worst, mag);
        }
    }
    return worst;
}

/// Shrinking space-time region {(t, x): |x - x0|^2 + delta (t - T0) < r^2},
/// t >= T0; its time reach is r^2 / delta.
struct GrowthRegion {
    double x0 = 0.0;
    double T0 = 0.0;
    double r = 1.0;
    double delta = 1.0;

    void validate() const {
        require(r > 0.0, "illposedness", "region radius must be positive");
        require(delta > 0.0, "illposedness", "region shrink rate delta must be positive");
        require(r * r / delta > 1e-12, "illposedness",
                "degenerate region: time reach r^2/delta is below resolution");
    }
    bool contains(double t, double x) const {
        double dt = t - T0;
        return dt >= 0.0 && (x - x0) * (x - x0) + delta * dt < r * r;
    }
    double time_reach() const { return r * r / delta; }
};

/// L^2 norm of one modal component over region ∩ {t <= T0 + horizon}:
/// a |w_j| sqrt(I) with I = ∫_0^tau_cap e^{2 b tau} 2 sqrt(r^2 - delta tau) dtau,
/// b = k Im(lambda).  When the cap hits the region tip the square-root
/// endpoint is removed by the substitution tau = tau_cap (1 - s^2).
inline double region_l2_component(const ModalSolution& sol, const GrowthRegion& region,
                                  int component, double horizon, double quad_tol = 1e-12) {
    region.validate();
    require(horizon > 0.0, "illposedness", "time horizon must be positive");
    double tau_cap = std::min(region.time_reach(), horizon);
    double b = static_cast<double>(sol.k) * sol.lambda.imag();
    double top = std::exp(2.0 * b * std::max(tau_cap, 0.0));
    double tol = quad_tol * std::max(1.0, top * 2.0 * region.r * tau_cap);
    cd I;
    if (tau_cap < region.time_reach() - 1e-15 * region.time_reach()) {
        auto f = [&](double tau) -> cd {
            return std::exp(2.0 * b * tau) *
                   2.0 * std::sqrt(std::max(0.0, region.r * region.r - region.delta * tau));
        };
        I = integrate_adaptive(f, 0.0, tau_cap, tol).value;
    } else {
        tau_cap = region.time_reach();
        double r = region.r;
        auto g = [&](double s) -> cd {
            double tau = tau_cap * (1.0 - s * s);
            return std::exp(2.0 * b * tau) * 4.0 * r * tau_cap * s * s;
        };
        I = integrate_adaptive(g, 0.0, 1.0, tol).value;
    }
    return sol.a * std::abs(sol.w.v[component]) * std::sqrt(std::max(0.0, I.real()));
}

inline double growth_radius(const std::string& rule, int k) {
    require(k >= 1, "illposedness", "wavenumber k must be a positive integer");
    double kk = static_cast<double>(k);
    if (rule == "invsqrt") return 1.0 / std::sqrt(kk);
    if (rule == "invquarter") return std::pow(kk, -0.25);
    if (rule.rfind("pow:", 0) == 0) {
        double p = std::stod(rule.substr(4));
        return std::pow(kk, -p);
    }
    if (rule.rfind("const:", 0) == 0) {
        double v = std::stod(rule.substr(6));
        require(v > 0.0, "illposedness", "const radius rule needs a positive value");
        return v;
    }
    throw Error("illposedness", "unknown radius rule '" + rule +
                                    "' (expected invsqrt, invquarter, pow:<p>, const:<v>)");
}

enum class NormKind { Sobolev, Gevrey };

inline const char* to_string(NormKind k) {
    return k == NormKind::Sobolev ? "sobolev" : "gevrey";
}

struct GrowthParams {
    double s = 2.0;            // Sobolev order for the denominator
    double alpha = 0.5;        // denominator exponent, in (0, 1)
    double sigma = 0.4;        // Gevrey index, in (0, 1)
    double c_gevrey = 4.0;     // Gevrey constant
    double delta = 1.0;        // region shrink rate
    std::string r_rule = "invsqrt";
    double horizon = 0.25;     // time horizon T1 - T0
    double rbar = 0.5;         // data restriction ball radius
    double amplitude = 1.0;    // modal amplitude a
    double x0 = 0.0;           // common center of data ball and region
    int taper_order = 8;
    std::size_t n_fft = 1024;
    int beta_max = 24;
    double c2_override = -1.0; // > 0: fixed squared sound speed
    double quad_tol = 1e-12;

    void validate() const {
        require(alpha > 0.0 && alpha < 1.0, "illposedness", "alpha must lie in (0,1)");
        require(horizon > 0.0, "illposedness", "time horizon must be positive");
        require(rbar > 0.0, "illposedness", "data ball radius must be positive");
        require(amplitude > 0.0, "illposedness", "amplitude must be positive");
    }
};

struct GrowthRow {
    int k = 0;
    double r_k = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    bool gevrey_truncation_suspect = false;
};

enum class GrowthVerdict { Increasing, NotIncreasing, Inconclusive };

inline const char* to_string(GrowthVerdict v) {
    switch (v) {
        case GrowthVerdict::Increasing: return "Increasing";
        case GrowthVerdict::NotIncreasing: return "NotIncreasing";
        default: return "Inconclusive";
    }
}

struct GrowthReport {
    std::vector<GrowthRow> rows;
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
    NormKind norm = NormKind::Sobolev;
    bool hyperbolic_base = false;
    std::string family;  // which data family and radius rule produced the rows
};

/// Ratio ladder  ||v_k||_{L^2(region_k)} / ||data_k||^alpha  over increasing
/// wavenumbers.  Numerators integrate the modal solution over the shrinking
/// region up to the horizon; denominators measure the t = T0 data on the
/// fixed ball, either in the Sobolev scale (tapered window + FFT) or the
/// Gevrey scale (exact derivative suprema of the oscillatory data).
inline GrowthReport growth_experiment(const GasModel& model, const FlowState& base,
                                      const std::vector<int>& ks, const GrowthParams& params,
                                      NormKind norm) {
    params.validate();
    require(!ks.empty(), "illposedness", "wavenumber list must not be empty");
    for (std::size_t i = 0; i + 1 < ks.size(); ++i)
        require(ks[i] < ks[i + 1], "illposedness", "wavenumber list must be strictly increasing");

    GrowthReport report;
    report.norm = norm;
    report.rows = parallel_map<GrowthRow>(ks.size(), [&](std::size_t idx) {
        int k = ks[idx];
        ModalSolution sol =
            modal_linear_solution(model, base, k, params.amplitude, params.c2_override);
        GrowthRow row;
        row.k = k;
        row.r_k = growth_radius(params.r_rule, k);
        GrowthRegion region{params.x0, 0.0, row.r_k, params.delta};
        row.numerator = region_l2_component(sol, region, 0, params.horizon, params.quad_tol) +
                        region_l2_component(sol, region, 1, params.horizon, params.quad_tol);
        if (norm == NormKind::Sobolev) {
            double dsum = 0.0;
            for (int comp = 0; comp < 2; ++comp) {
                auto f = [&](double x) { return sol.value(comp, 0.0, x); };
                TaperedWindow win =
                    restrict_and_taper(f, params.x0, params.rbar, params.n_fft, params.taper_order);
                dsum += sobolev_norm(win.samples, win.window_length, params.s);
            }
            row.denominator = std::pow(dsum, params.alpha);
        } else {
            double gsum = 0.0;
            for (int comp = 0; comp < 2; ++comp) {
                double mag = params.amplitude * std::abs(sol.w.v[comp]);
                auto deriv_sup = [&](int beta) {
                    return mag * std::pow(static_cast<double>(k), beta);
                };
                GevreyResult g =
                    gevrey_norm(deriv_sup, params.sigma, params.c_gevrey, params.beta_max);
                gsum += g.value;
                row.gevrey_truncation_suspect = row.gevrey_truncation_suspect || g.truncation_suspect;
            }
            row.denominator = std::pow(gsum, params.alpha);
        }
        require(row.denominator > 0.0, "illposedness", "data norm vanished; cannot form ratio");
        row.ratio = row.numerator / row.denominator;
        return row;
    });

    ModalSolution probe =
        modal_linear_solution(model, base, ks.front(), params.amplitude, params.c2_override);
    report.hyperbolic_base = probe.hyperbolic;

    if (report.rows.size() < 2) {
        report.verdict = GrowthVerdict::Inconclusive;
    } else {
        bool inc = true;
        for (std::size_t i = 0; i + 1 < report.rows.size(); ++i)
            inc = inc && (report.rows[i + 1].ratio > report.rows[i].ratio);
        report.verdict = inc ? GrowthVerdict::Increasing : GrowthVerdict::NotIncreasing;
    }

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "plane-wave data a*exp(ikx)*w+ at base (%.6g, %.6g), radius rule %s, "
                  "denominator %s^alpha",
                  base.u1, base.u2, params.r_rule.c_str(), to_string(norm));
    report.family = buf;
    return report;
}

}  // namespace transonic
