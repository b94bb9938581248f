#pragma once

// Local conjugation pipeline on a space-time frame around an elliptic point:
// series-valued diagonalizer fields, complex characteristic coordinates,
// a conjugator matrix evolved so that the weighted characteristic components
// satisfy an explicit divergence identity, and the integral decompositions
// used to probe decay of the transformed data.
//
// Conventions.  The returned S has eigenvector columns (A S = S D).  The
// characteristic variable is w = S^{-1} u, so identities written in terms of
// the "left" diagonalizer W (W A = D W) use W = S^{-1}, W^{-1} = S.  The
// conjugator solves
//     dB/dT + d/dx (B D) + B (dW/dT) W^{-1} + B D (dW/dx) W^{-1} = 0,
// which makes d/dT (B w) + d/dx (B D w) = 0 exact, and the Gaussian-weighted
// components obey
//     d/dT [(Bw)_i E_i] + d/dx [(BDw)_i E_i] = 2 mu (zeta_i - z) dx(zeta_i) E_i ([D,B]w)_i
// with E_i = exp(-mu (zeta_i - z)^2); the right side vanishes whenever B
// commutes with D and is the exact source otherwise.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "transonic/ck.hpp"
#include "transonic/cutoff.hpp"
#include "transonic/eigen2.hpp"
#include "transonic/error.hpp"
#include "transonic/fbi.hpp"
#include "transonic/gas.hpp"
#include "transonic/quadrature.hpp"
#include "transonic/series.hpp"

namespace transonic {

// ---------------------------------------------------------------------------
// Series-valued small linear algebra

struct SeriesVec2 {
    BivariateSeries c0, c1;

    const BivariateSeries& operator[](int i) const { return i == 0 ? c0 : c1; }
    BivariateSeries& operator[](int i) { return i == 0 ? c0 : c1; }
};

struct SeriesMat2 {
    BivariateSeries e00, e01, e10, e11;

    static SeriesMat2 zero_like(const BivariateSeries& proto) {
        BivariateSeries z = BivariateSeries::constant(proto.t0(), proto.x0(), proto.degree(), 0.0);
        return {z, z, z, z};
    }
    static SeriesMat2 identity_like(const BivariateSeries& proto) {
        SeriesMat2 m = zero_like(proto);
        BivariateSeries one =
            BivariateSeries::constant(proto.t0(), proto.x0(), proto.degree(), 1.0);
        m.e00 = one;
        m.e11 = one;
        return m;
    }
    static SeriesMat2 diagonal(const BivariateSeries& a, const BivariateSeries& b) {
        SeriesMat2 m = zero_like(a);
        m.e00 = a;
        m.e11 = b;
        return m;
    }

    const BivariateSeries& at(int r, int c) const {
        return r == 0 ? (c == 0 ? e00 : e01) : (c == 0 ? e10 : e11);
    }
    BivariateSeries& at(int r, int c) {
        return r == 0 ? (c == 0 ? e00 : e01) : (c == 0 ? e10 : e11);
    }

    SeriesMat2 operator*(const SeriesMat2& o) const {
        return {e00 * o.e00 + e01 * o.e10, e00 * o.e01 + e01 * o.e11,
                e10 * o.e00 + e11 * o.e10, e10 * o.e01 + e11 * o.e11};
    }
    SeriesVec2 operator*(const SeriesVec2& v) const {
        return {e00 * v.c0 + e01 * v.c1, e10 * v.c0 + e11 * v.c1};
    }
    SeriesMat2 operator+(const SeriesMat2& o) const {
        return {e00 + o.e00, e01 + o.e01, e10 + o.e10, e11 + o.e11};
    }
    SeriesMat2 operator-(const SeriesMat2& o) const {
        return {e00 - o.e00, e01 - o.e01, e10 - o.e10, e11 - o.e11};
    }
    SeriesMat2 operator*(const std::complex<double>& k) const {
        return {e00 * k, e01 * k, e10 * k, e11 * k};
    }
    SeriesMat2 d_dt() const { return {e00.d_dt(), e01.d_dt(), e10.d_dt(), e11.d_dt()}; }
    SeriesMat2 d_dx() const { return {e00.d_dx(), e01.d_dx(), e10.d_dx(), e11.d_dx()}; }
    SeriesMat2 extended(int degree) const {
        return {e00.extended(degree), e01.extended(degree), e10.extended(degree),
                e11.extended(degree)};
    }
    SeriesMat2 inverse() const {
        BivariateSeries det = e00 * e11 - e01 * e10;
        return {e11 / det, -(e01 / det), -(e10 / det), e00 / det};
    }
    double max_abs_coeff() const {
        return std::max(std::max(e00.max_abs_coeff(), e01.max_abs_coeff()),
                        std::max(e10.max_abs_coeff(), e11.max_abs_coeff()));
    }
};

inline SeriesVec2 extended(const SeriesVec2& v, int degree) {
    return {v.c0.extended(degree), v.c1.extended(degree)};
}

/// Real part of (z - w)^2 written in real coordinates:
/// (Re z - Re w)^2 - (Im z - Im w)^2.  Used when sampling lower bounds of the
/// Gaussian weight exponents.
inline double re_square_gap(std::complex<double> z, std::complex<double> w) {
    double dr = z.real() - w.real(), di = z.imag() - w.imag();
    return dr * dr - di * di;
}

// ---------------------------------------------------------------------------
// Frame

/// Space-time box [T0, T1] x [x0 - r0, x0 + r0] around the expansion point,
/// with cutoff radius R and the horizon constraint T1 - T0 <= cbar' R^2.
struct ProblemFrame {
    GasModel model;
    double T0 = 0.0;
    double x0 = 0.0;
    double T1 = 0.1;
    double r0 = 0.7;
    double R = 0.3;
    double cbar_prime = 1.0;
    int cutoff_order = 8;

    void validate() const {
        require(T1 > T0, "conjugation", "time horizon must satisfy T1 > T0");
        require(r0 > 0.0, "conjugation", "frame radius r0 must be positive");
        require(R > 0.0 && R < 0.5 * r0, "conjugation", "cutoff radius must satisfy 0 < R < r0/2");
        require(cbar_prime > 0.0, "conjugation", "horizon constant cbar' must be positive");
        require(T1 - T0 <= cbar_prime * R * R + 1e-15, "conjugation",
                "time horizon too long: T1 - T0 must not exceed cbar' * R^2");
    }

    CutoffSpec cutoff() const { return CutoffSpec{x0, R, cutoff_order}; }
};

namespace detail {

/// Max of |f(t, x)| over an nt x nx sample grid of [T0,T1] x [x0-R, x0+R].
template <typename F2>
double grid_max(const ProblemFrame& fr, int nt, int nx, F2&& f) {
    double m = 0.0;
    for (int i = 0; i < nt; ++i) {
        double t = fr.T0 + (fr.T1 - fr.T0) * (nt == 1 ? 0.0 : double(i) / (nt - 1));
        for (int j = 0; j < nx; ++j) {
            double x = fr.x0 - fr.R + 2.0 * fr.R * (nx == 1 ? 0.0 : double(j) / (nx - 1));
            m = std::max(m, f(t, x));
        }
    }
    return m;
}

inline std::complex<double> gauss_weight(double mu, std::complex<double> dz) {
    std::complex<double> e = -mu * dz * dz;
    if (e.real() > 700.0) e = std::complex<double>(700.0, e.imag());
    return std::exp(e);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Diagonalizer fields

struct DiagonalizerFields {
    SeriesMat2 S;      // eigenvector columns: A S = S D through the cap
    SeriesMat2 S_inv;  // the characteristic-variable matrix w = S_inv u
    BivariateSeries lambda1;  // Im-positive branch at the expansion point
    BivariateSeries lambda2;

    SeriesMat2 D() const { return SeriesMat2::diagonal(lambda1, lambda2); }
};

/// Series-valued spectral decomposition of the flux matrix of a solution over
/// a frame.  Requires an elliptic expansion point and a spectrum that stays
/// simple on the whole frame (checked at sample points).
inline DiagonalizerFields diagonalizer_fields(const SeriesSolution& sol,
                                              const ProblemFrame& frame) {
    frame.validate();
    FluxSeries A = flux_series(sol.model, sol.u1, sol.u2);

    // Point values and regime at the expansion point.
    FlowState state0{sol.u1.coeff(0, 0).real(), sol.u2.coeff(0, 0).real()};
    require(classify(sol.model, state0) == Regime::Elliptic, "conjugation",
            "expansion point must be elliptic (subsonic): complex spectrum required");

    // Spectrum: trace = a11 (a22 = 0), det = a12 (a21 = -1).
    BivariateSeries tr = A.a11;
    BivariateSeries disc = tr * tr - A.a12 * 4.0;
    std::complex<double> d0 = disc.coeff(0, 0);
    require(std::abs(d0) > 1e-12, "conjugation",
            "spectrum degenerate at the expansion point (sonic collision)");
    std::complex<double> root0 = std::sqrt(d0);
    if (root0.imag() < 0.0) root0 = -root0;  // Im-positive branch first
    BivariateSeries sq = series_sqrt(disc, root0);
    BivariateSeries lambda1 = (tr + sq) * 0.5;
    BivariateSeries lambda2 = (tr - sq) * 0.5;

    // Simplicity of the spectrum across the frame (sampled).
    double lam_scale = std::abs(lambda1.coeff(0, 0)) + std::abs(lambda2.coeff(0, 0)) + 1e-30;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 5; ++i) {
        double t = frame.T0 + (frame.T1 - frame.T0) * i / 4.0;
        for (int j = 0; j < 9; ++j) {
            double x = frame.x0 - frame.R + 2.0 * frame.R * j / 8.0;
            min_gap = std::min(min_gap, std::abs(sq.evaluate(t, x)));
        }
    }
    require(min_gap > 1e-6 * lam_scale, "conjugation",
            "spectral collision inside the frame: shrink the frame (frame too large)");

    // Eigenvector columns: v_k = (a12, lambda_k - a11), falling back to
    // (-lambda_k, 1) built from the second matrix row if a12 degenerates at
    // the expansion point.
    EigenDecomposition point = eigen_decompose(Mat2c::from(flux_matrix(sol.model, state0)));
    SeriesMat2 S = SeriesMat2::zero_like(sol.u1);
    const BivariateSeries* lams[2] = {&lambda1, &lambda2};
    for (int k = 0; k < 2; ++k) {
        BivariateSeries v0 = A.a12;
        BivariateSeries v1 = *lams[k] - A.a11;
        if (std::abs(v0.coeff(0, 0)) + std::abs(v1.coeff(0, 0)) < 1e-10 * lam_scale) {
            v0 = -*lams[k];
            v1 = BivariateSeries::constant(v0.t0(), v0.x0(), v0.degree(), 1.0);
        }
        // Rescale so the constant coefficients equal the pointwise-convention
        // eigenvector (unit norm, leading component real positive).
        std::complex<double> tgt0 = point.S.a[0][k], tgt1 = point.S.a[1][k];
        std::complex<double> kappa;
        if (std::abs(v0.coeff(0, 0)) >= std::abs(v1.coeff(0, 0)))
            kappa = tgt0 / v0.coeff(0, 0);
        else
            kappa = tgt1 / v1.coeff(0, 0);
        S.at(0, k) = v0 * kappa;
        S.at(1, k) = v1 * kappa;
    }

    return DiagonalizerFields{S, S.inverse(), lambda1, lambda2};
}

/// Max |coefficient| of A(u) S - S D at the natural cap: vanishes through the
/// series degree by construction, so this measures rounding only.
inline double diagonalizer_residual_coeff(const SeriesSolution& sol,
                                          const DiagonalizerFields& dg) {
    FluxSeries F = flux_series(sol.model, sol.u1, sol.u2);
    SeriesMat2 A = SeriesMat2::zero_like(sol.u1);
    A.e00 = F.a11;
    A.e01 = F.a12;
    A.e10 = BivariateSeries::constant(F.a11.t0(), F.a11.x0(), F.a11.degree(), -1.0);
    SeriesMat2 R = A * dg.S - dg.S * dg.D();
    return R.max_abs_coeff();
}

/// Max of |(A S - S D) entries| evaluated over the frame grid with the inputs
/// zero-extended by `pad` degrees, exposing the genuine truncation tail.
inline double diagonalizer_residual_eval(const SeriesSolution& sol, const DiagonalizerFields& dg,
                                         const ProblemFrame& frame, int pad = 4, int nt = 7,
                                         int nx = 13) {
    const int cap = sol.u1.degree() + pad;
    SeriesSolution lifted{sol.model, sol.u1.extended(cap), sol.u2.extended(cap), false};
    FluxSeries F = flux_series(lifted.model, lifted.u1, lifted.u2);
    SeriesMat2 A = SeriesMat2::zero_like(lifted.u1);
    A.e00 = F.a11;
    A.e01 = F.a12;
    A.e10 = BivariateSeries::constant(F.a11.t0(), F.a11.x0(), F.a11.degree(), -1.0);
    SeriesMat2 Se = dg.S.extended(cap);
    SeriesMat2 De = SeriesMat2::diagonal(dg.lambda1.extended(cap), dg.lambda2.extended(cap));
    SeriesMat2 R = A * Se - Se * De;
    return detail::grid_max(frame, nt, nx, [&](double t, double x) {
        double m = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m = std::max(m, std::abs(R.at(r, c).evaluate(t, x)));
        return m;
    });
}

// ---------------------------------------------------------------------------
// Complex characteristic coordinates

struct CharacteristicPair {
    BivariateSeries zeta1, zeta2;

    const BivariateSeries& operator[](int i) const { return i == 0 ? zeta1 : zeta2; }
};

/// Solve d/dt zeta_i + lambda_i d/dx zeta_i = 0 with zeta_i(T0, x) = x by the
/// degree-graded time recursion.
inline CharacteristicPair solve_zeta(const DiagonalizerFields& dg, const ProblemFrame& frame) {
    auto solve_one = [&](const BivariateSeries& lam) {
        const int N = lam.degree();
        BivariateSeries z = BivariateSeries::constant(lam.t0(), lam.x0(), N, frame.x0);
        if (N >= 1) z.at(0, 1) = 1.0;
        for (int m = 0; m < N; ++m) {
            BivariateSeries rhs = -(lam * z.d_dx());
            for (int n = 0; m + 1 + n <= N; ++n) z.at(m + 1, n) = rhs.coeff(m, n) / (m + 1.0);
        }
        return z;
    };
    return {solve_one(dg.lambda1), solve_one(dg.lambda2)};
}

/// Max |coefficient| of zeta_i(T0, x) - x (zero by construction).
inline double zeta_initial_defect(const CharacteristicPair& zeta, const ProblemFrame& frame) {
    double m = 0.0;
    for (int i = 0; i < 2; ++i) {
        std::vector<std::complex<double>> row = zeta[i].restrict_t0();
        row[0] -= frame.x0;
        if (row.size() > 1) row[1] -= 1.0;
        for (auto& c : row) m = std::max(m, std::abs(c));
    }
    return m;
}

/// Max |coefficient| of (degree-1 time row of zeta_i) + lambda_i(T0, .): the
/// first-order time coefficient must equal -lambda_i(T0, .) exactly.
inline double zeta_first_order_defect(const CharacteristicPair& zeta,
                                      const DiagonalizerFields& dg) {
    double m = 0.0;
    const BivariateSeries* lams[2] = {&dg.lambda1, &dg.lambda2};
    for (int i = 0; i < 2; ++i) {
        for (int n = 0; n + 1 <= zeta[i].degree(); ++n)
            m = std::max(m, std::abs(zeta[i].coeff(1, n) + lams[i]->coeff(0, n)));
    }
    return m;
}

/// Padded-evaluation transport residual max |d/dt zeta + lambda d/dx zeta|.
inline double zeta_transport_residual(const CharacteristicPair& zeta,
                                      const DiagonalizerFields& dg, const ProblemFrame& frame,
                                      int pad = 4, int nt = 7, int nx = 13) {
    double m = 0.0;
    const BivariateSeries* lams[2] = {&dg.lambda1, &dg.lambda2};
    for (int i = 0; i < 2; ++i) {
        int cap = zeta[i].degree() + pad;
        BivariateSeries ze = zeta[i].extended(cap);
        BivariateSeries le = lams[i]->extended(cap);
        BivariateSeries res = ze.d_dt() + le * ze.d_dx();
        m = std::max(m, detail::grid_max(frame, nt, nx, [&](double t, double x) {
                         return std::abs(res.evaluate(t, x));
                     }));
    }
    return m;
}

/// Minimum order in (t - T0) of the remainder
///   r_i = (Im zeta_i + (t - T0) Im lambda_i(T0, x)) / (t - T0);
/// order >= 1 certifies that sup |r_i| -> 0 with the frame height.
inline int zeta_remainder_order(const CharacteristicPair& zeta, const DiagonalizerFields& dg,
                                int i, double tol = 1e-11) {
    const BivariateSeries& lam = (i == 0) ? dg.lambda1 : dg.lambda2;
    BivariateSeries im_zeta = zeta[i].imag_coeffs();
    BivariateSeries corr = BivariateSeries::constant(lam.t0(), lam.x0(), lam.degree(), 0.0);
    for (int n = 0; n + 1 <= lam.degree(); ++n) corr.at(1, n) = lam.coeff(0, n).imag();
    BivariateSeries num = im_zeta + corr;
    BivariateSeries r = num.shift_down_t(tol);
    return r.min_t_order(tol);
}

// ---------------------------------------------------------------------------
// Conjugator

struct ConjugatorField {
    SeriesMat2 B;
    SeriesMat2 B_data;  // initial-slice data (time-constant rows)
};

/// Evolve the conjugator from analytic data on the initial slice:
///   dB/dT = -[ d/dx (B D) + B P + (B D) Q ],
///   P = (dW/dT) S,  Q = (dW/dx) S,  W = S_inv.
/// The equation is linear in B, so solve_B(k B_d) = k solve_B(B_d) exactly.
inline ConjugatorField solve_B(const DiagonalizerFields& dg, const SeriesMat2& B_data,
                               const ProblemFrame& frame) {
    frame.validate();
    const int N = dg.lambda1.degree();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            for (int m = 1; m <= N; ++m)
                for (int n = 0; m + n <= N; ++n)
                    require(std::abs(B_data.at(r, c).coeff(m, n)) == 0.0, "conjugation",
                            "conjugator data must be constant in time (initial-slice data)");

    SeriesMat2 P = dg.S_inv.d_dt() * dg.S;
    SeriesMat2 Q = dg.S_inv.d_dx() * dg.S;
    SeriesMat2 Dm = dg.D();
    SeriesMat2 B = B_data;
    for (int m = 0; m < N; ++m) {
        SeriesMat2 F = B * Dm;
        SeriesMat2 rhs = (F.d_dx() + B * P + F * Q) * std::complex<double>(-1.0, 0.0);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                for (int n = 0; m + 1 + n <= N; ++n)
                    B.at(r, c).at(m + 1, n) = rhs.at(r, c).coeff(m, n) / (m + 1.0);
    }
    return {B, B_data};
}

/// Max |coefficient| of the conjugator equation residual at the natural cap
/// (vanishes through degree N-1 by construction).
inline double conjugator_residual_coeff(const DiagonalizerFields& dg, const SeriesMat2& B) {
    SeriesMat2 P = dg.S_inv.d_dt() * dg.S;
    SeriesMat2 Q = dg.S_inv.d_dx() * dg.S;
    SeriesMat2 F = B * dg.D();
    SeriesMat2 R = B.d_dt() + F.d_dx() + B * P + F * Q;
    return R.max_abs_coeff();
}

/// Padded-evaluation residual of the conjugator equation over the frame.
inline double conjugator_residual_eval(const DiagonalizerFields& dg, const SeriesMat2& B,
            const ProblemFrame& frame, int pad = 4, int nt = 7, int nx = 13) {
    const int cap = dg.lambda1.degree() + pad;
    SeriesMat2 Se = dg.S.extended(cap), We = dg.S_inv.extended(cap), Be = B.extended(cap);
    SeriesMat2 De = SeriesMat2::diagonal(dg.lambda1.extended(cap), dg.lambda2.extended(cap));
    SeriesMat2 F = Be * De;
    SeriesMat2 R = Be.d_dt() + F.d_dx() + Be * (We.d_dt() * Se) + F * (We.d_dx() * Se);
    return detail::grid_max(frame, nt, nx, [&](double t, double x) {
        double m = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m = std::max(m, std::abs(R.at(r, c).evaluate(t, x)));
        return m;
    });
}

// ---------------------------------------------------------------------------
// Weighted conservation identity

struct ConservationReport {
    double max_defect = 0.0;   // max over grid and components of |identity defect|
    double field_scale = 0.0;  // max weighted field magnitude on the same grid
    double normalized = 0.0;   // max_defect / field_scale
};

/// Evaluate, over a frame sample grid, the pointwise defect of
///   d/dT[(Bw)_i E_i] + d/dx[(BDw)_i E_i] = 2 mu (zeta_i - z) dx(zeta_i) E_i ([D,B]w)_i,
/// where w = S_inv u and E_i = exp(-mu (zeta_i - z)^2).  All series are
/// zero-extended by `pad` degrees so the defect tracks genuine truncation.
inline ConservationReport conservation_residual(const DiagonalizerFields& dg, const SeriesMat2& B,
                                                const SeriesSolution& sol,
                                                const CharacteristicPair& zeta,
                                                const ProblemFrame& frame, double mu,
                                                std::complex<double> z, int pad = 4, int nt = 7,
                                                int nx = 13) {
    require(mu >= 1.0, "conjugation", "weight scale mu must be >= 1");
    using cplx = std::complex<double>;
    const int cap = sol.u1.degree() + pad;

    SeriesVec2 u{sol.u1.extended(cap), sol.u2.extended(cap)};
    SeriesMat2 We = dg.S_inv.extended(cap);
    SeriesMat2 Be = B.extended(cap);
    BivariateSeries lam[2] = {dg.lambda1.extended(cap), dg.lambda2.extended(cap)};
    BivariateSeries zt[2] = {zeta.zeta1.extended(cap), zeta.zeta2.extended(cap)};

    SeriesVec2 w = We * u;
    SeriesVec2 g = Be * w;                                   // (Bw)_i
    SeriesVec2 Dw{lam[0] * w.c0, lam[1] * w.c1};             // (Dw)_i
    SeriesVec2 F = Be * Dw;                                  // (BDw)_i

    ConservationReport rep;
    for (int i = 0; i < 2; ++i) {
        BivariateSeries dg_dt = g[i].d_dt(), dF_dx = F[i].d_dx();
        BivariateSeries dz_dt = zt[i].d_dt(), dz_dx = zt[i].d_dx();
        double local = detail::grid_max(frame, nt, nx, [&](double t, double x) {
            cplx zv = zt[i].evaluate(t, x);
            cplx E = detail::gauss_weight(mu, zv - z);
            cplx gv = g[i].evaluate(t, x), Fv = F[i].evaluate(t, x);
            cplx lv = lam[i].evaluate(t, x);
            cplx bracket = dg_dt.evaluate(t, x) + dF_dx.evaluate(t, x) -
                           2.0 * mu * (zv - z) *
                               (dz_dt.evaluate(t, x) * gv + dz_dx.evaluate(t, x) * Fv) -
                           2.0 * mu * (zv - z) * dz_dx.evaluate(t, x) * (lv * gv - Fv);
            rep.field_scale = std::max(rep.field_scale,
                                       std::max(std::abs(gv * E), std::abs(Fv * E)));
            return std::abs(E * bracket);
        });
        rep.max_defect = std::max(rep.max_defect, local);
    }
    rep.normalized = rep.max_defect / std::max(rep.field_scale, 1e-300);
    return rep;
}

// ---------------------------------------------------------------------------
// Boundary integral decomposition

struct BoundaryIntegralReport {
    std::array<std::complex<double>, 2> lhs{};           // T=T0 slice integral
    std::array<std::complex<double>, 2> term_I{};        // T=T1 slice integral
    std::array<std::complex<double>, 2> term_II_flux{};  // -∬ (BDw)_i E_i chi'
    std::array<std::complex<double>, 2> term_II_comm{};  // -∬ commutator source chi
    std::array<std::complex<double>, 2> term_II{};       // flux + commutator parts
    std::array<std::complex<double>, 2> term_III{};      // flux part over [T0, T0+s]
    std::array<double, 2> defect{};                      // |lhs - (I + II)|
    double s_hat = 0.0;                                  // III time reach
    double quad_tol = 0.0;
};

/// Integrated form of the weighted conservation identity against the cutoff:
///   ∫ (Bw)_i E_i chi dx |_{T0} = ∫ (Bw)_i E_i chi dx |_{T1}
///                               - ∬ (BDw)_i E_i chi' dx dT - ∬ src_i chi dx dT.
/// The flux part (II_flux) integrates only over supp chi' where
/// R/2 <= |x - x0| <= R; the commutator source spans supp chi.  Term III is
/// the flux part truncated to the short horizon s = min(cbar' R^2, T1 - T0).
inline BoundaryIntegralReport boundary_integrals(const DiagonalizerFields& dg,
                                                 const SeriesMat2& B, const SeriesSolution& sol,
                                                 const CharacteristicPair& zeta,
                                                 const CutoffSpec& chi, double mu,
                                                 std::complex<double> z,
                                                 const ProblemFrame& frame,
                                                 double quad_tol = 1e-10, int pad = 4) {
    require(mu >= 1.0, "conjugation", "weight scale mu must be >= 1");
    require(chi.support_lo() >= frame.x0 - frame.r0 && chi.support_hi() <= frame.x0 + frame.r0,
            "conjugation", "cutoff must be supported inside the frame");
    using cplx = std::complex<double>;
    const int cap = sol.u1.degree() + pad;

    SeriesVec2 u{sol.u1.extended(cap), sol.u2.extended(cap)};
    SeriesMat2 We = dg.S_inv.extended(cap);
    SeriesMat2 Be = B.extended(cap);
    BivariateSeries lam[2] = {dg.lambda1.extended(cap), dg.lambda2.extended(cap)};
    BivariateSeries zt[2] = {zeta.zeta1.extended(cap), zeta.zeta2.extended(cap)};
    SeriesVec2 w = We * u;
    SeriesVec2 g = Be * w;
    SeriesVec2 Dw{lam[0] * w.c0, lam[1] * w.c1};
    SeriesVec2 F = Be * Dw;
    BivariateSeries dz_dx[2] = {zt[0].d_dx(), zt[1].d_dx()};

    BoundaryIntegralReport rep;
    rep.quad_tol = quad_tol;
    rep.s_hat = std::min(frame.cbar_prime * frame.R * frame.R, frame.T1 - frame.T0);

    const double a = chi.support_lo(), b = chi.support_hi();
    const double in_lo = frame.x0 - 0.5 * chi.radius, in_hi = frame.x0 + 0.5 * chi.radius;

    for (int i = 0; i < 2; ++i) {
        auto weighted_g = [&](double t, double x) {
            cplx E = detail::gauss_weight(mu, zt[i].evaluate(t, x) - z);
            return g[i].evaluate(t, x) * E * chi.value(x);
        };
        auto flux_chi_prime = [&](double t, double x) {
            cplx E = detail::gauss_weight(mu, zt[i].evaluate(t, x) - z);
            return F[i].evaluate(t, x) * E * chi.derivative(x);
        };
        auto comm_source = [&](double t, double x) {
            cplx zv = zt[i].evaluate(t, x);
            cplx E = detail::gauss_weight(mu, zv - z);
            cplx gv = g[i].evaluate(t, x), Fv = F[i].evaluate(t, x);
            cplx src = 2.0 * mu * (zv - z) * dz_dx[i].evaluate(t, x) * E *
                       (lam[i].evaluate(t, x) * gv - Fv);
            return src * chi.value(x);
        };

        rep.lhs[i] = integrate_adaptive([&](double x) { return weighted_g(frame.T0, x); }, a, b,
                                        quad_tol)
                         .value;
        rep.term_I[i] = integrate_adaptive([&](double x) { return weighted_g(frame.T1, x); }, a,
                                           b, quad_tol)
                            .value;
        // chi' support: two strips on either side of the plateau.
        cplx flux = integrate2d_adaptive(flux_chi_prime, frame.T0, frame.T1, a, in_lo, quad_tol)
                        .value +
                    integrate2d_adaptive(flux_chi_prime, frame.T0, frame.T1, in_hi, b, quad_tol)
                        .value;
        rep.term_II_flux[i] = -flux;
        rep.term_II_comm[i] =
            -integrate2d_adaptive(comm_source, frame.T0, frame.T1, a, b, quad_tol).value;
        rep.term_II[i] = rep.term_II_flux[i] + rep.term_II_comm[i];
        cplx flux_short =
            integrate2d_adaptive(flux_chi_prime, frame.T0, frame.T0 + rep.s_hat, a, in_lo,
                                 quad_tol)
                .value +
            integrate2d_adaptive(flux_chi_prime, frame.T0, frame.T0 + rep.s_hat, in_hi, b,
                                 quad_tol)
                .value;
        rep.term_III[i] = -flux_short;
        rep.defect[i] = std::abs(rep.lhs[i] - (rep.term_I[i] + rep.term_II[i]));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Decay of the transformed characteristic data

struct ComponentDecay {
    double eps_hat = 0.0;
    double fit_residual = 0.0;  // relative RMS over the fit window
    bool flagged_zero = false;
    bool underflow_clamped = false;
    bool fit_valid = false;
    bool floor_clipped = false;
    double xi0 = 0.0;
    std::complex<double> z_center{};
    std::vector<double> mus;
    std::vector<double> weighted_log_abs;
};

/// Fit the decay rate of |T[chi (Bw)_i(T0, .)]| e^{-mu (Im z)^2 / 2} over a mu
/// grid, probing a disc of z around x0 - i (t0 - T0) Im lambda_i(T0, x0).
/// Analytic (series-manufactured) inputs should give eps_hat above the
/// calibrated floor; an identically zero component is flagged, not fitted.
inline std::array<ComponentDecay, 2> est_basic_check(
    const DiagonalizerFields& dg, const SeriesMat2& B, const SeriesSolution& sol,
    const ProblemFrame& frame, const std::vector<double>& mus, double t0_offset,
    double disc_radius = -1.0, double quad_tol = 1e-12) {
    require(mus.size() >= 8, "conjugation", "decay fit needs a mu grid with >= 8 points");
    for (std::size_t i = 1; i < mus.size(); ++i)
        require(mus[i] > mus[i - 1], "conjugation", "mu grid must be increasing");
    require(t0_offset > 0.0 && t0_offset <= frame.T1 - frame.T0, "conjugation",
            "t0 offset must lie in (0, T1 - T0]");

    SeriesVec2 u{sol.u1, sol.u2};
    SeriesVec2 g = B * (dg.S_inv * u);
    CutoffSpec chi = frame.cutoff();
    const BivariateSeries* lams[2] = {&dg.lambda1, &dg.lambda2};

    std::array<ComponentDecay, 2> out;
    for (int i = 0; i < 2; ++i) {
        ComponentDecay& cd_i = out[static_cast<std::size_t>(i)];
        cd_i.mus = mus;

        std::vector<std::complex<double>> poly = g[i].restrict_t0();
        Datum1D datum = Datum1D::from_function(
            [poly, chi, x0 = frame.x0](double x) {
                std::complex<double> acc{};
                double dx = x - x0;
                for (std::size_t n = poly.size(); n-- > 0;) acc = acc * dx + poly[n];
                return acc * chi.value(x);
            },
            chi.support_lo(), chi.support_hi());

        double sup = datum.sup_abs_estimate();
        double u_scale = std::max(sol.u1.max_abs_coeff(), sol.u2.max_abs_coeff());
        if (sup <= 1e-13 * (1.0 + u_scale)) {
            cd_i.flagged_zero = true;
            continue;
        }

        double im_lam = lams[i]->coeff(0, 0).imag();
        cd_i.xi0 = t0_offset * im_lam;
        cd_i.z_center = std::complex<double>(frame.x0, -cd_i.xi0);
        double rad = (disc_radius >= 0.0) ? disc_radius : 0.25 * std::abs(cd_i.xi0);

        std::vector<char> clamped(mus.size(), 0);
        cd_i.weighted_log_abs = parallel_map<double>(mus.size(), [&](std::size_t j) {
            bool c = false;
            double L = detail::weighted_log_max(datum, cd_i.z_center, rad, mus[j], quad_tol, 1.0,
                                                &c);
            clamped[j] = c ? 1 : 0;
            return L;
        });
        for (char c : clamped) cd_i.underflow_clamped |= (c != 0);

        std::vector<double> floors(mus.size());
        for (std::size_t j = 0; j < mus.size(); ++j)
            floors[j] = detail::quadrature_floor_log(datum, sup, frame.x0, rad, mus[j]);

        FitWindow win;
        FitResult fit = fit_decay_rate_windowed(cd_i.mus, cd_i.weighted_log_abs, floors, win);
        cd_i.eps_hat = fit.eps_hat;
        cd_i.fit_residual = fit.rms_rel;
        cd_i.fit_valid = win.valid;
        cd_i.floor_clipped = win.floor_clipped;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Recovery identity for the physical variable

struct URecoveryReport {
    std::array<std::complex<double>, 2> lhs{};       // ∫ u_j w(x) chi dx at T0
    std::array<std::complex<double>, 2> term_i{};    // same at T1
    std::array<std::complex<double>, 2> term_ii{};   // -∬ (A u)_j w chi'
    std::array<std::complex<double>, 2> term_iii{};  // -∬ [((dA/dx) u)_j - 2 mu (x-z)(A u)_j] w chi
    std::array<double, 2> defect{};
    double bound_factor = 0.0;    // p_part + mu * q_part
    double bound_factor_p = 0.0;  // sup-sampled ∫ sum |dA/dx| dT
    double bound_factor_q = 0.0;  // sup-sampled ∫ 2 |x-z| sum |A| dT
    double quad_tol = 0.0;
};

/// Integrated identity for u itself against the real-space Gaussian weight
/// w(x) = exp(-mu (x-z)^2), with A reconstructed as S D S_inv:
///   ∫ u_j w chi |_{T0} = ∫ u_j w chi |_{T1} - ∬ (Au)_j w chi'
///                        - ∬ [((dA/dx)u)_j - 2 mu (x-z)(Au)_j] w chi.
/// Also reports the sampled factor bounding term iii against the transformed
/// field magnitudes; the factor is affine in mu (p + mu q).
inline URecoveryReport u_recovery_integrals(const DiagonalizerFields& dg,
                                            const SeriesSolution& sol, const CutoffSpec& chi,
                                            double mu, std::complex<double> z,
                                            const ProblemFrame& frame, double quad_tol = 1e-10,
                                            int pad = 4) {
    require(mu >= 1.0, "conjugation", "weight scale mu must be >= 1");
    using cplx = std::complex<double>;
    const int cap = sol.u1.degree() + pad;

    SeriesVec2 u{sol.u1.extended(cap), sol.u2.extended(cap)};
    SeriesMat2 Se = dg.S.extended(cap), We = dg.S_inv.extended(cap);
    SeriesMat2 De = SeriesMat2::diagonal(dg.lambda1.extended(cap), dg.lambda2.extended(cap));
    SeriesMat2 A = Se * De * We;
    SeriesMat2 dA = A.d_dx();
    SeriesVec2 Au = A * u;
    SeriesVec2 dAu = dA * u;

    URecoveryReport rep;
    rep.quad_tol = quad_tol;
    const double a = chi.support_lo(), b = chi.support_hi();
    const double in_lo = frame.x0 - 0.5 * chi.radius, in_hi = frame.x0 + 0.5 * chi.radius;

    auto weight = [&](double x) { return detail::gauss_weight(mu, cplx(x, 0.0) - z); };

    for (int j = 0; j < 2; ++j) {
        auto slice = [&](double t, double x) {
            return u[j].evaluate(t, x) * weight(x) * chi.value(x);
        };
        auto flux = [&](double t, double x) {
            return Au[j].evaluate(t, x) * weight(x) * chi.derivative(x);
        };
        auto volume = [&](double t, double x) {
            cplx val = dAu[j].evaluate(t, x) - 2.0 * mu * (cplx(x, 0.0) - z) * Au[j].evaluate(t, x);
            return val * weight(x) * chi.value(x);
        };
        rep.lhs[j] =
            integrate_adaptive([&](double x) { return slice(frame.T0, x); }, a, b, quad_tol)
                .value;
        rep.term_i[j] =
            integrate_adaptive([&](double x) { return slice(frame.T1, x); }, a, b, quad_tol)
                .value;
        rep.term_ii[j] =
            -(integrate2d_adaptive(flux, frame.T0, frame.T1, a, in_lo, quad_tol).value +
              integrate2d_adaptive(flux, frame.T0, frame.T1, in_hi, b, quad_tol).value);
        rep.term_iii[j] =
            -integrate2d_adaptive(volume, frame.T0, frame.T1, a, b, quad_tol).value;
        rep.defect[j] =
            std::abs(rep.lhs[j] - (rep.term_i[j] + rep.term_ii[j] + rep.term_iii[j]));
    }

    // Sampled sup factor for term iii: sum of entry magnitudes of dA/dx and
    // 2|x-z| A, integrated in time by the trapezoid rule on samples.
    const int nt = 9, nx = 33;
    double p_acc = 0.0, q_acc = 0.0;
    for (int it = 0; it < nt; ++it) {
        double t = frame.T0 + (frame.T1 - frame.T0) * it / (nt - 1.0);
        double p_sup = 0.0, q_sup = 0.0;
        for (int ix = 0; ix < nx; ++ix) {
            double x = frame.x0 - frame.R + 2.0 * frame.R * ix / (nx - 1.0);
            double sum_dA = 0.0, sum_A = 0.0;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    sum_dA += std::abs(dA.at(r, c).evaluate(t, x));
                    sum_A += std::abs(A.at(r, c).evaluate(t, x));
                }
            p_sup = std::max(p_sup, sum_dA);
            q_sup = std::max(q_sup, 2.0 * std::abs(cplx(x, 0.0) - z) * sum_A);
        }
        double wgt = (it == 0 || it == nt - 1) ? 0.5 : 1.0;
        p_acc += wgt * p_sup;
        q_acc += wgt * q_sup;
    }
    double dt = (frame.T1 - frame.T0) / (nt - 1.0);
    rep.bound_factor_p = p_acc * dt;
    rep.bound_factor_q = q_acc * dt;
    rep.bound_factor = rep.bound_factor_p + mu * rep.bound_factor_q;
    return rep;
}

}  // namespace transonic
