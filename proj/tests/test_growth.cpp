#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "support/oracles.hpp"
#include "transonic/ck.hpp"
#include "transonic/growth.hpp"

using namespace transonic;
using Catch::Approx;
using cd = std::complex<double>;

namespace {
const GasModel kModel{1.4, 1.0};
const FlowState kEllipticBase{0.0, 0.5};  // with c2_override = 1: lambda = i sqrt(0.75)
}

TEST_CASE("modal solution reproduces the closed-form amplification", "[growth]") {
    ModalSolution sol = modal_linear_solution(kModel, kEllipticBase, 8, 1.0, 1.0);
    CHECK_FALSE(sol.hyperbolic);
    CHECK(sol.lambda.real() == Approx(0.0).margin(1e-14));
    CHECK(sol.lambda.imag() == Approx(std::sqrt(0.75)).epsilon(1e-13));

    double t_four = 4.0 / (8.0 * std::sqrt(0.75));
    CHECK(sol.amplitude_factor(t_four) == Approx(std::exp(4.0)).epsilon(1e-12));
    CHECK(sol.amplitude_factor(0.0) == 1.0);

    // |v(t,x)| / |v(0,x)| really is x-independent and matches the factor.
    for (double x : {-0.3, 0.0, 0.7}) {
        double ratio = std::abs(sol.value(0, t_four, x)) / std::abs(sol.value(0, 0.0, x));
        CHECK(ratio == Approx(sol.amplitude_factor(t_four)).epsilon(1e-12));
    }

    // Initial data modulus is flat in x: |v(0, x)| = a |w_c|.
    for (int comp = 0; comp < 2; ++comp)
        CHECK(std::abs(sol.value(comp, 0.0, 1.7)) ==
              Approx(sol.a * std::abs(sol.w.v[comp])).epsilon(1e-13));

    std::vector<double> ts{0.0, 0.1, 0.2}, xs{-1.0, 0.0, 0.5};
    CHECK(modal_residual_max(sol, ts, xs) < 1e-12);

    CHECK_THROWS_AS(modal_linear_solution(kModel, kEllipticBase, 0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(modal_linear_solution(kModel, kEllipticBase, 4, -1.0, 1.0), Error);
}

TEST_CASE("hyperbolic base states carry no modal amplification", "[growth]") {
    ModalSolution sol = modal_linear_solution(kModel, FlowState{0.0, 1.2}, 8, 1.0, 1.0);
    CHECK(sol.hyperbolic);
    CHECK(sol.amplitude_factor(5.0) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("nonlinear series solution linearizes onto the modal ansatz", "[growth]") {
    // Plant modal plane-wave data in the full quasilinear solver; the
    // discrepancy from the frozen-coefficient solution must scale like a^2.
    const FlowState base{0.0, 0.4};
    const int N = 12;

    auto ck_error = [&](double a) {
        ModalSolution sol = modal_linear_solution(kModel, base, 1, a);
        std::vector<cd> d1(N + 1), d2(N + 1);
        cd ipow{1.0, 0.0};
        double fact = 1.0;
        for (int n = 0; n <= N; ++n) {
            if (n > 0) fact *= n;
            d1[n] = a * sol.w.v[0] * ipow / fact;
            d2[n] = a * sol.w.v[1] * ipow / fact;
            ipow *= cd{0.0, 1.0};
        }
        d2[0] += base.u2;
        SeriesSolution nl = ck_solve(kModel, 0.0, 0.0, N, d1, d2);
        double t = 0.05, x = 0.02;
        cd e1 = nl.u1.evaluate(t, x) - (base.u1 + sol.value(0, t, x));
        cd e2 = nl.u2.evaluate(t, x) - (base.u2 + sol.value(1, t, x));
        return std::max(std::abs(e1), std::abs(e2));
    };

    double big = ck_error(1e-4), small = ck_error(1e-5);
    CHECK(big > 1e-13);  // the quadratic term is resolved, not rounding noise
    double ratio = big / small;
    CHECK(ratio > 30.0);
    CHECK(ratio < 300.0);
}

TEST_CASE("region L2 norms match the closed form", "[growth]") {
    ModalSolution sol = modal_linear_solution(kModel, kEllipticBase, 4, 1.0, 1.0);
    double b = 4.0 * sol.lambda.imag();
    GrowthRegion region{0.0, 0.0, 0.5, 1.0};
    CHECK(region.time_reach() == Approx(0.25));

    // Horizon shorter than the reach: the cap is the horizon.
    double I_short = oracles::region_integral_closed(b, 0.5, 1.0, 0.1);
    for (int comp = 0; comp < 2; ++comp)
        CHECK(region_l2_component(sol, region, comp, 0.1) ==
              Approx(sol.a * std::abs(sol.w.v[comp]) * std::sqrt(I_short)).epsilon(1e-9));

    // Horizon beyond the reach: integrate to the shrinking tip.
    double I_full = oracles::region_integral_closed(b, 0.5, 1.0, 0.25);
    CHECK(region_l2_component(sol, region, 0, 1.0) ==
          Approx(sol.a * std::abs(sol.w.v[0]) * std::sqrt(I_full)).epsilon(1e-9));

    // Flat-in-time branch via a real-spectrum state (b = 0).
    ModalSolution flat = modal_linear_solution(kModel, FlowState{0.0, 1.2}, 4, 1.0, 1.0);
    double I_flat = oracles::region_integral_closed(0.0, 0.5, 1.0, 0.25);
    CHECK(region_l2_component(flat, region, 0, 1.0) ==
          Approx(flat.a * std::abs(flat.w.v[0]) * std::sqrt(I_flat)).epsilon(1e-9));

    CHECK_THROWS_AS(region_l2_component(sol, region, 0, -1.0), Error);
}

TEST_CASE("growth region geometry", "[growth]") {
    GrowthRegion region{0.2, 0.1, 0.5, 2.0};
    CHECK(region.time_reach() == Approx(0.125));
    CHECK(region.contains(0.1, 0.2));
    CHECK(region.contains(0.15, 0.4));
    CHECK_FALSE(region.contains(0.05, 0.2));   // before T0
    CHECK_FALSE(region.contains(0.3, 0.2));    // past the reach
    CHECK_FALSE(region.contains(0.1, 0.71));   // past the spatial boundary

    GrowthRegion degenerate{0.0, 0.0, 1e-7, 1e6};
    CHECK_THROWS_AS(degenerate.validate(), Error);
    CHECK_THROWS_AS((GrowthRegion{0.0, 0.0, -1.0, 1.0}).validate(), Error);
}

TEST_CASE("radius rules", "[growth]") {
    CHECK(growth_radius("invsqrt", 4) == Approx(0.5));
    CHECK(growth_radius("invquarter", 16) == Approx(0.5));
    CHECK(growth_radius("pow:0.5", 9) == Approx(growth_radius("invsqrt", 9)));
    CHECK(growth_radius("const:0.37", 123) == Approx(0.37));
    CHECK_THROWS_AS(growth_radius("cubic", 4), Error);
    CHECK_THROWS_AS(growth_radius("const:-1", 4), Error);
    CHECK_THROWS_AS(growth_radius("invsqrt", 0), Error);
}

TEST_CASE("ratio ladder grows for elliptic data in both scales", "[growth]") {
    GrowthParams params;
    params.r_rule = "invquarter";
    params.c2_override = 1.0;
    std::vector<int> ks{8, 16, 32, 64};

    for (NormKind norm : {NormKind::Sobolev, NormKind::Gevrey}) {
        GrowthReport rep = growth_experiment(kModel, kEllipticBase, ks, params, norm);
        REQUIRE(rep.rows.size() == 4);
        CHECK(rep.verdict == GrowthVerdict::Increasing);
        CHECK_FALSE(rep.hyperbolic_base);
        for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
            CHECK(rep.rows[i + 1].ratio > rep.rows[i].ratio);
        for (const GrowthRow& row : rep.rows) {
            CHECK(row.numerator > 0.0);
            CHECK(row.denominator > 0.0);
            CHECK_FALSE(row.gevrey_truncation_suspect);
        }
        CHECK_FALSE(rep.family.empty());
    }
}

TEST_CASE("ratio ladder degenerates on a vanishing horizon", "[growth]") {
    // With almost no time to amplify, the shrinking region loses against the
    // k-growth of the data norm and the ladder decreases.
    GrowthParams params;
    params.r_rule = "invsqrt";
    params.c2_override = 1.0;
    params.horizon = 1e-3;
    params.alpha = 0.9;
    std::vector<int> ks{8, 16, 32, 64};
    GrowthReport rep = growth_experiment(kModel, kEllipticBase, ks, params, NormKind::Sobolev);
    CHECK(rep.verdict == GrowthVerdict::NotIncreasing);
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
        CHECK(rep.rows[i + 1].ratio < rep.rows[i].ratio);
}

TEST_CASE("experiment guards", "[growth]") {
    GrowthParams params;
    params.c2_override = 1.0;

    GrowthReport single =
        growth_experiment(kModel, kEllipticBase, {8}, params, NormKind::Sobolev);
    CHECK(single.verdict == GrowthVerdict::Inconclusive);

    GrowthReport hyper = growth_experiment(kModel, FlowState{0.0, 1.2}, {8, 16}, params,
                                           NormKind::Sobolev);
    CHECK(hyper.hyperbolic_base);

    CHECK_THROWS_AS(growth_experiment(kModel, kEllipticBase, {}, params, NormKind::Sobolev),
                    Error);
    CHECK_THROWS_AS(
        growth_experiment(kModel, kEllipticBase, {16, 8}, params, NormKind::Sobolev), Error);
    GrowthParams bad = params;
    bad.alpha = 1.5;
    CHECK_THROWS_AS(growth_experiment(kModel, kEllipticBase, {8, 16}, bad, NormKind::Sobolev),
                    Error);
}
