#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "support/oracles.hpp"
#include "transonic/fbi.hpp"

using namespace transonic;
using Catch::Approx;

namespace {

Datum1D unit_gaussian() {
    return Datum1D::from_function([](double x) { return cd{std::exp(-0.5 * x * x), 0.0}; }, -16.0,
                                  16.0);
}

cd closed_form_gaussian(cd z, double mu) {
    return std::sqrt(2.0 * M_PI / (mu + 1.0)) * std::exp(-mu * z * z / (2.0 * (mu + 1.0)));
}

}  // namespace

TEST_CASE("transform of the unit gaussian matches the closed form", "[fbi]") {
    Datum1D f = unit_gaussian();
    for (double mu : {1.0, 7.0, 64.0, 256.0}) {
        for (cd z : {cd{0.0, 0.0}, cd{0.8, -0.3}, cd{-1.5, 0.4}}) {
            FBIResult r = fbi_transform(f, FBIQuery{z, mu});
            cd want = closed_form_gaussian(z, mu);
            // The value is recovered from a damped integral scaled back up by
            // exp(mu Im^2 z / 2); that factor times roundoff in the oscillatory
            // damped integral is the attainable precision floor.
            double amp = std::exp(0.5 * mu * z.imag() * z.imag());
            CHECK(std::abs(r.value - want) <= 1e-9 * std::abs(want) + 2e-15 * amp);
            CHECK_FALSE(r.overflow);
        }
    }
}

TEST_CASE("translation covariance", "[fbi]") {
    double a = 1.3;
    Datum1D f = unit_gaussian();
    Datum1D g = Datum1D::from_function(
        [a](double x) { return cd{std::exp(-0.5 * (x - a) * (x - a)), 0.0}; }, -16.0 + a, 16.0 + a);
    for (double mu : {2.0, 32.0}) {
        cd z{0.4, -0.2};
        cd lhs = fbi_transform(g, FBIQuery{z + a, mu}).value;
        cd rhs = fbi_transform(f, FBIQuery{z, mu}).value;
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
    }
}

TEST_CASE("real data gives conjugate-symmetric transforms", "[fbi]") {
    Datum1D f = make_preset_datum("lorentzian");
    cd z{0.6, -0.35};
    double mu = 24.0;
    cd plus = fbi_transform(f, FBIQuery{z, mu}).value;
    cd minus = fbi_transform(f, FBIQuery{std::conj(z), mu}).value;
    CHECK(std::abs(minus - std::conj(plus)) <= 1e-10 * std::abs(plus));
}

TEST_CASE("general quadratic form rescales the transform scale", "[fbi]") {
    Datum1D f = unit_gaussian();
    cd z{0.3, -0.4};
    FBIResult two = generalized_fbi(f, FBIQuery{z, 8.0, 2.0});
    FBIResult one = fbi_transform(f, FBIQuery{z, 16.0, 1.0});
    CHECK(std::abs(two.value - one.value) <= 1e-10 * std::abs(one.value));
}

TEST_CASE("kink datum agrees with an independent integrator", "[fbi]") {
    Datum1D f = make_preset_datum("abs");
    REQUIRE(f.breakpoints() == std::vector<double>{0.0});
    cd z{0.0, -0.5};
    for (double mu : {4.0, 16.0, 64.0}) {
        cd lib = fbi_weighted(f, z, mu, 1e-13);
        auto integrand = [&](double x) {
            cd dz = z - x;
            return std::exp(-(0.5 * mu) * (dz * dz + 0.25)) * std::abs(x);
        };
        // Split at the kink so Simpson converges cleanly on each side.
        cd want = oracles::integrate_simpson(integrand, -20.0, 0.0, 1e-14) +
                  oracles::integrate_simpson(integrand, 0.0, 20.0, 1e-14);
        CHECK(std::abs(lib - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("support clipping and empty windows", "[fbi]") {
    Datum1D f = make_preset_datum("step");
    CHECK(f.support_lo() == 0.0);
    CHECK(f.support_hi() == 20.0);
    // Far from the support the clipped window is empty and the value exact zero.
    CHECK(fbi_weighted(f, cd{-50.0, -1.0}, 1.0) == cd{});
}

TEST_CASE("overflow and underflow are reported, not produced", "[fbi]") {
    Datum1D f = unit_gaussian();
    FBIResult r = generalized_fbi(f, FBIQuery{cd{0.0, -30.0}, 16.0});
    CHECK(r.overflow);
    CHECK(std::isfinite(r.value.real()));
    CHECK(std::isfinite(r.log_abs));

    // An identically zero datum underflows every query.
    Datum1D zero = Datum1D::from_function([](double) { return cd{}; }, -1.0, 1.0);
    FBIResult u = fbi_transform(zero, FBIQuery{cd{0.0, -0.1}, 4.0});
    CHECK(u.underflow);
}

TEST_CASE("geometric grid spans endpoints with constant ratio", "[fbi]") {
    auto mus = geometric_mu_grid(1.0, 256.0, 16);
    REQUIRE(mus.size() == 16);
    CHECK(mus.front() == Approx(1.0));
    CHECK(mus.back() == Approx(256.0));
    double ratio = mus[1] / mus[0];
    for (std::size_t i = 1; i + 1 < mus.size(); ++i)
        CHECK(mus[i + 1] / mus[i] == Approx(ratio).epsilon(1e-12));
    CHECK_THROWS_AS(geometric_mu_grid(8.0, 4.0, 16), Error);
}

TEST_CASE("decay profile separates smooth from kinked data", "[fbi]") {
    auto mus = geometric_mu_grid(1.0, 256.0, 16);
    DecayProfile smooth = decay_profile(make_preset_datum("gaussian"), 0.0, 1.0, mus);
    DecayProfile kinked = decay_profile(make_preset_datum("abs"), 0.0, 1.0, mus);
    CHECK(smooth.verdict == WfClass::NotInWFA);
    CHECK(kinked.verdict == WfClass::InWFA);
    CHECK(smooth.eps_hat > 10.0 * std::abs(kinked.eps_hat));
    CHECK(smooth.fit_valid);
    CHECK(smooth.floor_clipped);  // exponential decay bottoms out on this grid
    CHECK_FALSE(kinked.floor_clipped);
}

TEST_CASE("noise-floored samples are excluded from the fit", "[fbi]") {
    // Samples that decay straight into the floor leave too few trusted points:
    // the fit must refuse rather than report the floor's slope.
    std::vector<double> mus = geometric_mu_grid(1.0, 256.0, 16);
    std::vector<double> Ls(16), floors(16, -34.0);
    for (std::size_t i = 0; i < 16; ++i) Ls[i] = std::max(-0.5 * mus[i], -34.0);
    FitWindow win;
    FitResult fit = fit_decay_rate_windowed(mus, Ls, floors, win);
    CHECK(win.valid);
    CHECK(win.floor_clipped);
    CHECK(win.lo == 6);
    CHECK(win.hi == 12);  // samples from mu ~ 84 onward sit in the floor band
    CHECK(fit.eps_hat == Approx(1.0).epsilon(1e-6));

    std::vector<double> flat(16, -35.0);
    FitWindow bad;
    fit_decay_rate_windowed(mus, flat, floors, bad);
    CHECK_FALSE(bad.valid);
}

TEST_CASE("pointwise verdict needs both direction signs", "[fbi]") {
    Datum1D f = make_preset_datum("gaussian");
    auto mus = geometric_mu_grid(1.0, 256.0, 16);
    CHECK_THROWS_AS(analyticity_test(f, 0.0, 0.25, {1.0, 2.0}, mus), Error);

    AnalyticityReport ok = analyticity_test(f, 0.0, 0.25, {1.0, -1.0}, mus);
    CHECK(ok.verdict == PointClass::Analytic);
    AnalyticityReport bad = analyticity_test(make_preset_datum("step"), 0.0, 0.25, {1.0, -1.0}, mus);
    CHECK(bad.verdict == PointClass::NotAnalytic);
}

TEST_CASE("sampled data carries knots as quadrature breakpoints", "[fbi]") {
    std::vector<double> xs{-2.0, -1.0, 0.0, 1.0, 2.0};
    std::vector<cd> fs{cd{0.0}, cd{1.0}, cd{0.0}, cd{1.0}, cd{0.0}};
    Datum1D d = Datum1D::from_samples(xs, fs, 1);
    CHECK(d.breakpoints() == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(std::abs(d(-0.5) - cd{0.5}) < 1e-15);
    CHECK(d(3.0) == cd{});  // zero extension outside the window

    CHECK_THROWS_AS(Datum1D::from_samples({0.0, 0.0}, {cd{1.0}, cd{1.0}}), Error);
}
