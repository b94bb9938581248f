#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "transonic/ck.hpp"
#include "transonic/series.hpp"

using namespace transonic;
using Catch::Approx;
using cd = std::complex<double>;

TEST_CASE("total-degree triangle access contract", "[series]") {
    BivariateSeries s(0.0, 0.0, 3);
    s.at(1, 2) = cd{2.0, 0.0};
    CHECK(s.coeff(1, 2) == cd{2.0, 0.0});
    CHECK(s.coeff(2, 2) == cd{});     // outside the triangle reads zero
    CHECK(s.coeff(-1, 0) == cd{});
    CHECK_THROWS_AS(s.at(2, 2), Error);  // writing outside is an error
    CHECK_THROWS_AS(BivariateSeries(0.0, 0.0, 65), Error);
}

TEST_CASE("product matches hand expansion and truncates by total degree", "[series]") {
    // p = 1 + t + x about (0,0), cap 2: p^2 = 1 + 2t + 2x + t^2 + 2tx + x^2
    BivariateSeries p(0.0, 0.0, 2);
    p.at(0, 0) = 1.0;
    p.at(1, 0) = 1.0;
    p.at(0, 1) = 1.0;
    BivariateSeries q = p * p;
    CHECK(q.coeff(0, 0) == cd{1.0});
    CHECK(q.coeff(1, 0) == cd{2.0});
    CHECK(q.coeff(0, 1) == cd{2.0});
    CHECK(q.coeff(2, 0) == cd{1.0});
    CHECK(q.coeff(1, 1) == cd{2.0});
    CHECK(q.coeff(0, 2) == cd{1.0});

    // Cap 1 drops every quadratic term.
    BivariateSeries r = p.truncated(1) * p.truncated(1);
    CHECK(r.degree() == 1);
    CHECK(r.coeff(1, 0) == cd{2.0});
}

TEST_CASE("mixed-center evaluation matches direct summation", "[series]") {
    BivariateSeries s(0.5, -1.0, 4);
    int val = 1;
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; m + n <= 4; ++n) {
            s.at(m, n) = cd(val * 0.01, -0.003 * (val + 1));
            ++val;
        }
    cd t{0.7, 0.0}, x{-0.6, 0.0};
    cd direct{};
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; m + n <= 4; ++n)
            direct += s.at(m, n) * std::pow(t - 0.5, m) * std::pow(x + 1.0, n);
    CHECK(std::abs(s.evaluate(t, x) - direct) < 1e-14);
}

TEST_CASE("derivatives act on the right slots", "[series]") {
    BivariateSeries s(0.0, 0.0, 3);
    s.at(2, 1) = cd{3.0};
    BivariateSeries st = s.d_dt();
    BivariateSeries sx = s.d_dx();
    CHECK(st.coeff(1, 1) == cd{6.0});
    CHECK(sx.coeff(2, 0) == cd{3.0});
    CHECK(st.degree() == 2);
}

TEST_CASE("division and square root invert through the cap", "[series]") {
    BivariateSeries a(0.0, 0.0, 5);
    a.at(0, 0) = cd{2.0};
    a.at(1, 0) = cd{-0.4};
    a.at(0, 1) = cd{0.3};
    a.at(0, 2) = cd{0.05};
    BivariateSeries b(0.0, 0.0, 5);
    b.at(0, 0) = cd{1.0, 0.2};
    b.at(0, 1) = cd{-0.5};
    b.at(1, 1) = cd{0.25};

    BivariateSeries q = a / b;
    BivariateSeries back = q * b;
    double diff = 0.0;
    for (int m = 0; m <= 5; ++m)
        for (int n = 0; m + n <= 5; ++n) diff = std::max(diff, std::abs(back.coeff(m, n) - a.coeff(m, n)));
    CHECK(diff < 1e-13);

    BivariateSeries root = series_sqrt(a, std::sqrt(cd{2.0}));
    BivariateSeries sq = root * root;
    diff = 0.0;
    for (int m = 0; m <= 5; ++m)
        for (int n = 0; m + n <= 5; ++n) diff = std::max(diff, std::abs(sq.coeff(m, n) - a.coeff(m, n)));
    CHECK(diff < 1e-13);

    // The branch choice is honored.
    BivariateSeries neg = series_sqrt(a, -std::sqrt(cd{2.0}));
    CHECK(neg.coeff(0, 0).real() < 0.0);

    // Division by a zero-constant series is rejected.
    BivariateSeries z(0.0, 0.0, 5);
    z.at(0, 1) = cd{1.0};
    CHECK_THROWS_AS(a / z, Error);
}

TEST_CASE("shift by the time factor requires divisibility", "[series]") {
    BivariateSeries s(0.0, 0.0, 3);
    s.at(1, 0) = cd{4.0};
    s.at(2, 1) = cd{-1.0};
    BivariateSeries d = s.shift_down_t();
    CHECK(d.coeff(0, 0) == cd{4.0});
    CHECK(d.coeff(1, 1) == cd{-1.0});

    s.at(0, 0) = cd{1.0};
    CHECK_THROWS_AS(s.shift_down_t(), Error);
}

TEST_CASE("initial-slice round trip", "[series]") {
    std::vector<cd> data{cd{0.1}, cd{0.2}, cd{0.0, 0.3}};
    BivariateSeries s = BivariateSeries::from_univariate(1.0, 2.0, 6, data);
    auto back = s.restrict_t0();
    REQUIRE(back.size() == 7);
    CHECK(back[0] == data[0]);
    CHECK(back[1] == data[1]);
    CHECK(back[2] == data[2]);
    CHECK(back[3] == cd{});
}

TEST_CASE("constant admissible data is a stationary solution", "[series][ck]") {
    GasModel m{1.4, 1.0};
    SeriesSolution sol = ck_solve(m, 0.0, 0.0, 8, {cd{0.0}}, {cd{0.4}});
    for (int o = 1; o <= 8; ++o)
        for (int n = 0; o + n <= 8; ++n) {
            CHECK(std::abs(sol.u1.coeff(o, n)) < 1e-15);
            CHECK(std::abs(sol.u2.coeff(o, n)) < 1e-15);
        }
    CHECK_FALSE(sol.radius_warning);
}

TEST_CASE("solver residual vanishes through the guaranteed degree", "[series][ck]") {
    GasModel m{1.4, 1.0};
    for (int N : {6, 9, 12}) {
        SeriesSolution sol = ck_solve(m, 0.0, 0.1, N, {cd{0.05}, cd{-0.1}}, {cd{0.3}, cd{0.2}});
        auto res = ck_residual(sol);
        double rmax = 0.0;
        for (const auto& comp : res)
            for (int d = 0; d + 1 <= N; ++d)
                for (int mm = 0; mm <= d; ++mm)
                    rmax = std::max(rmax, std::abs(comp.coeff(mm, d - mm)));
        CHECK(rmax < 1e-12);
    }
}

TEST_CASE("padded residual exposes the genuine truncation tail", "[series][ck]") {
    GasModel m{1.4, 1.0};
    int N = 6;
    SeriesSolution sol = ck_solve(m, 0.0, 0.0, N, {cd{0.0}}, {cd{0.3}, cd{0.2}});
    auto res = ck_residual(sol, 3);
    double tail = 0.0;
    for (const auto& comp : res)
        for (int mm = 0; mm <= comp.degree(); ++mm)
            for (int n = 0; mm + n <= comp.degree(); ++n)
                if (mm + n >= N) tail = std::max(tail, std::abs(comp.coeff(mm, n)));
    CHECK(tail > 1e-12);  // a truncated solution of a nonlinear system is not exact
}

TEST_CASE("raising the cap refines without rewriting lower coefficients", "[series][ck]") {
    GasModel m{1.4, 1.0};
    SeriesSolution lo = ck_solve(m, 0.0, 0.0, 6, {cd{0.0}}, {cd{0.3}, cd{0.2}});
    SeriesSolution hi = ck_solve(m, 0.0, 0.0, 12, {cd{0.0}}, {cd{0.3}, cd{0.2}});
    double diff = 0.0;
    for (int mm = 0; mm <= 6; ++mm)
        for (int n = 0; mm + n <= 6; ++n) {
            diff = std::max(diff, std::abs(hi.u1.coeff(mm, n) - lo.u1.coeff(mm, n)));
            diff = std::max(diff, std::abs(hi.u2.coeff(mm, n) - lo.u2.coeff(mm, n)));
        }
    CHECK(diff == 0.0);  // graded recursions agree exactly, not just approximately
}

TEST_CASE("runaway coefficient growth sets the radius warning", "[series][ck]") {
    GasModel m{1.4, 1.0};
    SeriesSolution steep = ck_solve(m, 0.0, 0.0, 12, {cd{0.0}}, {cd{0.3}, cd{30.0}});
    CHECK(steep.radius_warning);
    // Inadmissible expansion state is rejected outright.
    CHECK_THROWS_AS(ck_solve(m, 0.0, 0.0, 6, {cd{0.0}}, {cd{5.0}}), Error);
}
