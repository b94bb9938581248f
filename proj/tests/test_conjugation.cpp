#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "transonic/conjugation.hpp"

using namespace transonic;
using Catch::Approx;
using cd = std::complex<double>;

namespace {

ProblemFrame small_frame() {
    return ProblemFrame{GasModel{1.4, 1.0}, 0.0, 0.0, 0.09, 0.7, 0.3, 1.0, 8};
}

SeriesSolution solved(int N, std::vector<cd> d1 = {cd{0.0}},
                      std::vector<cd> d2 = {cd{0.3}, cd{0.09}}) {
    ProblemFrame fr = small_frame();
    return ck_solve(fr.model, fr.T0, fr.x0, N, d1, d2);
}

}  // namespace

TEST_CASE("frame validation enforces the geometry contract", "[conjugation]") {
    ProblemFrame ok = small_frame();
    CHECK_NOTHROW(ok.validate());

    ProblemFrame tall = ok;
    tall.T1 = ok.T0 + ok.cbar_prime * ok.R * ok.R * 1.5;  // exceeds cbar' R^2
    CHECK_THROWS_AS(tall.validate(), Error);

    ProblemFrame wide = ok;
    wide.R = 0.5 * ok.r0;  // cutoff must fit strictly inside half the frame
    CHECK_THROWS_AS(wide.validate(), Error);
}

TEST_CASE("spectral factorization is exact through the cap", "[conjugation]") {
    SeriesSolution sol = solved(8);
    DiagonalizerFields dg = diagonalizer_fields(sol, small_frame());
    CHECK(diagonalizer_residual_coeff(sol, dg) < 1e-13);
    // Branch convention: Im-positive eigenvalue first at the expansion point.
    CHECK(dg.lambda1.coeff(0, 0).imag() > 0.0);
    CHECK(dg.lambda2.coeff(0, 0).imag() < 0.0);
    // S_inv really inverts S through the cap.
    SeriesMat2 id = dg.S * dg.S_inv;
    double defect = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            BivariateSeries e = id.at(r, c);
            if (r == c) e = e - cd{1.0};
            defect = std::max(defect, e.max_abs_coeff());
        }
    CHECK(defect < 1e-12);
}

TEST_CASE("hyperbolic expansion points are rejected", "[conjugation]") {
    ProblemFrame fr = small_frame();
    // u2 = 0.95 is supersonic for gamma=1.4, c0=1.
    SeriesSolution sol = ck_solve(fr.model, fr.T0, fr.x0, 6, {cd{0.0}}, {cd{0.95}});
    CHECK_THROWS_AS(diagonalizer_fields(sol, fr), Error);
}

TEST_CASE("constant base state makes every field constant and exact", "[conjugation]") {
    ProblemFrame fr = small_frame();
    SeriesSolution sol = ck_solve(fr.model, fr.T0, fr.x0, 6, {cd{0.0}}, {cd{0.4}});
    DiagonalizerFields dg = diagonalizer_fields(sol, fr);

    cd lam = dg.lambda1.coeff(0, 0);
    for (int m = 0; m <= 6; ++m)
        for (int n = 0; m + n <= 6; ++n)
            if (m + n > 0) CHECK(std::abs(dg.lambda1.coeff(m, n)) < 1e-14);

    CharacteristicPair zeta = solve_zeta(dg, fr);
    // zeta = x - lambda (t - T0) exactly: linear coefficients only.
    CHECK(std::abs(zeta.zeta1.coeff(0, 0) - fr.x0) < 1e-14);
    CHECK(std::abs(zeta.zeta1.coeff(0, 1) - 1.0) < 1e-14);
    CHECK(std::abs(zeta.zeta1.coeff(1, 0) + lam) < 1e-14);
    for (int m = 0; m <= 6; ++m)
        for (int n = 0; m + n <= 6; ++n)
            if (m + n >= 2) CHECK(std::abs(zeta.zeta1.coeff(m, n)) < 1e-14);

    CHECK(zeta_transport_residual(zeta, dg, fr) < 1e-13);
    CHECK(zeta_remainder_order(zeta, dg, 0) >= 2);
}

TEST_CASE("characteristic expansion properties on generic data", "[conjugation]") {
    ProblemFrame fr = small_frame();
    SeriesSolution sol = solved(9);
    DiagonalizerFields dg = diagonalizer_fields(sol, fr);
    CharacteristicPair zeta = solve_zeta(dg, fr);

    CHECK(zeta_initial_defect(zeta, fr) == 0.0);
    CHECK(zeta_first_order_defect(zeta, dg) < 1e-13);
    CHECK(zeta_remainder_order(zeta, dg, 0) >= 1);
    CHECK(zeta_remainder_order(zeta, dg, 1) >= 1);
    // The padded transport residual is truncation-sized, far below the
    // coefficient scale but genuinely nonzero.
    double res = zeta_transport_residual(zeta, dg, fr);
    CHECK(res < 1e-9);
}

TEST_CASE("conjugator solve is linear in its data", "[conjugation]") {
    ProblemFrame fr = small_frame();
    SeriesSolution sol = solved(7);
    DiagonalizerFields dg = diagonalizer_fields(sol, fr);

    SeriesMat2 I = SeriesMat2::identity_like(dg.lambda1);
    ConjugatorField one = solve_B(dg, I, fr);
    ConjugatorField two = solve_B(dg, I * cd{2.0}, fr);
    double diff = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            BivariateSeries d = two.B.at(r, c) - one.B.at(r, c) * cd{2.0};
            diff = std::max(diff, d.max_abs_coeff());
        }
    CHECK(diff < 1e-13);
    CHECK(conjugator_residual_coeff(dg, one.B) < 1e-13);
}

TEST_CASE("corrupting the conjugator is detected by the evaluated residual", "[conjugation]") {
    ProblemFrame fr = small_frame();
    SeriesSolution sol = solved(7);
    DiagonalizerFields dg = diagonalizer_fields(sol, fr);
    ConjugatorField good = solve_B(dg, SeriesMat2::identity_like(dg.lambda1), fr);

    double base = conjugator_residual_eval(dg, good.B, fr);
    SeriesMat2 bad = good.B;
    bad.at(0, 0).at(1, 0) += cd{1e-3, 0.0};
    double corrupted = conjugator_residual_eval(dg, bad, fr);
    CHECK(corrupted > 1e3 * std::max(base, 1e-12));
    CHECK(conjugator_residual_coeff(dg, bad) > 1e-5);
}

TEST_CASE("conservation and boundary defects are truncation-sized", "[conjugation]") {
    ProblemFrame fr = small_frame();
    SeriesSolution sol = solved(9);
    DiagonalizerFields dg = diagonalizer_fields(sol, fr);
    CharacteristicPair zeta = solve_zeta(dg, fr);
    ConjugatorField conj = solve_B(dg, SeriesMat2::identity_like(dg.lambda1), fr);

    cd z{fr.x0, -0.05};
    ConservationReport cons = conservation_residual(dg, conj.B, sol, zeta, fr, 16.0, z, 4);
    CHECK(cons.max_defect < 1e-9);
    CHECK(cons.field_scale > 0.0);

    BoundaryIntegralReport b = boundary_integrals(dg, conj.B, sol, zeta, fr.cutoff(), 16.0, z, fr);
    CHECK(b.defect[0] < 1e-9);
    CHECK(b.defect[1] < 1e-9);
    CHECK(b.s_hat > 0.0);
    // The short-time flux bookkeeping term is genuinely present.
    CHECK(std::abs(b.term_II[0]) + std::abs(b.term_III[0]) > 0.0);

    URecoveryReport u = u_recovery_integrals(dg, sol, fr.cutoff(), 16.0, z, fr);
    CHECK(u.defect[0] < 1e-9);
    CHECK(u.defect[1] < 1e-9);
    CHECK(u.bound_factor == Approx(u.bound_factor_p + 16.0 * u.bound_factor_q));
}

TEST_CASE("weight scale below one is rejected", "[conjugation]") {
    ProblemFrame fr = small_frame();
    SeriesSolution sol = solved(6);
    DiagonalizerFields dg = diagonalizer_fields(sol, fr);
    CharacteristicPair zeta = solve_zeta(dg, fr);
    ConjugatorField conj = solve_B(dg, SeriesMat2::identity_like(dg.lambda1), fr);
    CHECK_THROWS_AS(
        conservation_residual(dg, conj.B, sol, zeta, fr, 0.5, cd{0.0, -0.05}, 4), Error);
}

TEST_CASE("transformed data decay fit runs and flags zero components", "[conjugation]") {
    ProblemFrame fr = small_frame();
    SeriesSolution sol = solved(6);
    DiagonalizerFields dg = diagonalizer_fields(sol, fr);
    ConjugatorField conj = solve_B(dg, SeriesMat2::identity_like(dg.lambda1), fr);
    auto mus = geometric_mu_grid(16.0, 4096.0, 12);

    auto decay = est_basic_check(dg, conj.B, sol, fr, mus, 0.8 * (fr.T1 - fr.T0));
    for (int i = 0; i < 2; ++i) {
        CHECK_FALSE(decay[i].flagged_zero);
        CHECK(decay[i].fit_valid);
        CHECK(decay[i].eps_hat > 1e-3);
    }
    // Opposite branches probe opposite phase-space directions.
    CHECK(decay[0].xi0 * decay[1].xi0 < 0.0);

    // A zero conjugator kills the data; that must be flagged, not fitted.
    auto zeroed = est_basic_check(dg, SeriesMat2::zero_like(dg.lambda1), sol, fr, mus,
                                  0.8 * (fr.T1 - fr.T0));
    CHECK(zeroed[0].flagged_zero);
    CHECK(zeroed[1].flagged_zero);

    CHECK_THROWS_AS(est_basic_check(dg, conj.B, sol, fr, mus, 10.0 * (fr.T1 - fr.T0)), Error);
}
