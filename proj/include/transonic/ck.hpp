#pragma once

// Power-series Cauchy solver for the quasilinear velocity system: given
// analytic initial data u(t0, x) as truncated series in (x - x0), the time
// coefficients follow recursively from dT u = -A(u) dx u, one t-order per
// step.  Everything happens in truncated-series arithmetic, so the grading
// contract of series.hpp carries over: solving at cap N and truncating to
// N' <= N equals solving at N' exactly.

#include <array>
#include <cmath>
#include <vector>

#include "transonic/error.hpp"
#include "transonic/gas.hpp"
#include "transonic/series.hpp"

namespace transonic {

/// Nonconstant entries of A(u) as series; the second row is (-1, 0).
struct FluxSeries {
    BivariateSeries a11;
    BivariateSeries a12;
};

/// Squared sound speed as a series in the velocity series.
inline BivariateSeries sound_speed_sq_series(const GasModel& m, const BivariateSeries& u1,
                                             const BivariateSeries& u2) {
    BivariateSeries q2 = u1 * u1 + u2 * u2;
    return -(0.5 * (m.gamma - 1.0)) * q2 + std::complex<double>(m.c0 * m.c0, 0.0);
}

inline FluxSeries flux_series(const GasModel& m, const BivariateSeries& u1,
                              const BivariateSeries& u2, double degen_tol = 1e-12) {
    BivariateSeries c2 = sound_speed_sq_series(m, u1, u2);
    BivariateSeries den = c2 - u1 * u1;
    require(std::abs(den.coeff(0, 0)) > degen_tol, "ck",
            "flux series degenerate at the expansion point: |c^2 - u1^2| below tolerance");
    FluxSeries f{(-2.0) * (u1 * u2) / den, (c2 - u2 * u2) / den};
    return f;
}

struct SeriesSolution {
    GasModel model;
    BivariateSeries u1;
    BivariateSeries u2;
    /// Set when some coefficient magnitude exceeds 1e12: the truncation radius
    /// is effectively zero and evaluations are unreliable.
    bool radius_warning = false;
};

/// Solve the Cauchy problem with data u_i(t0, x) = sum_n data_i[n] (x-x0)^n.
inline SeriesSolution ck_solve(const GasModel& model, double t0, double x0, int degree,
                               const std::vector<std::complex<double>>& data1,
                               const std::vector<std::complex<double>>& data2) {
    SeriesSolution sol{model, BivariateSeries::from_univariate(t0, x0, degree, data1),
                       BivariateSeries::from_univariate(t0, x0, degree, data2), false};

    // Admissibility at the expansion point (real part; synthetic complex data
    // is allowed but the gas-model bound is only meaningful for real states).
    double q0 = std::hypot(std::abs(sol.u1.coeff(0, 0)), std::abs(sol.u2.coeff(0, 0)));
    check_admissible(model, q0, "ck");

    for (int m = 0; m + 1 <= degree; ++m) {
        FluxSeries f = flux_series(model, sol.u1, sol.u2);
        BivariateSeries u1x = sol.u1.d_dx();
        BivariateSeries u2x = sol.u2.d_dx();
        BivariateSeries rhs1 = -(f.a11 * u1x + f.a12 * u2x);
        const BivariateSeries& rhs2 = u1x;  // -(a21 u1x + a22 u2x) with a21 = -1
        double inv = 1.0 / static_cast<double>(m + 1);
        for (int n = 0; m + 1 + n <= degree; ++n) {
            sol.u1.at(m + 1, n) = rhs1.coeff(m, n) * inv;
            sol.u2.at(m + 1, n) = rhs2.coeff(m, n) * inv;
        }
    }
    sol.radius_warning =
        std::max(sol.u1.max_abs_coeff(), sol.u2.max_abs_coeff()) > 1e12;
    return sol;
}

/// Residual series dT u + A(u) dx u of a truncated solution.  With pad = 0 the
/// coefficients through total degree N-1 are the defect (zero to rounding for
/// ck_solve output).  A positive pad recomputes in degree N+pad arithmetic so
/// that the leading *truncation* error of the polynomial solution becomes
/// visible; evaluating the padded residual on frame points then measures the
/// true equation defect of the truncated solution.
inline std::array<BivariateSeries, 2> ck_residual(const SeriesSolution& sol, int pad = 0) {
    require(pad >= 0, "ck", "ck_residual pad must be nonnegative");
    BivariateSeries u1 = sol.u1.extended(sol.u1.degree() + pad);
    BivariateSeries u2 = sol.u2.extended(sol.u2.degree() + pad);
    FluxSeries f = flux_series(sol.model, u1, u2);
    BivariateSeries r1 = u1.d_dt() + f.a11 * u1.d_dx() + f.a12 * u2.d_dx();
    BivariateSeries r2 = u2.d_dt() - u1.d_dx();
    return {r1, r2};
}

}  // namespace transonic
