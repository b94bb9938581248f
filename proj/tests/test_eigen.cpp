#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "transonic/eigen2.hpp"
#include "transonic/gas.hpp"

using namespace transonic;
using Catch::Approx;

namespace {

double residual_AS_SD(const Mat2c& A, const EigenDecomposition& e) {
    Mat2c D{};
    D.a[0][0] = e.lambda[0];
    D.a[1][1] = e.lambda[1];
    Mat2c r = A * e.S - e.S * D;
    return r.max_abs();
}

}  // namespace

TEST_CASE("eigenvalues of a triangular matrix are its diagonal", "[eigen]") {
    Mat2c m{};
    m.a[0][0] = 2.0;
    m.a[0][1] = 1.0;
    m.a[1][1] = 3.0;
    auto ev = eigenvalues2(m);
    double lo = std::min(ev[0].real(), ev[1].real());
    double hi = std::max(ev[0].real(), ev[1].real());
    CHECK(lo == Approx(2.0).margin(1e-14));
    CHECK(hi == Approx(3.0).margin(1e-14));
}

TEST_CASE("decomposition reconstructs random matrices", "[eigen]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int done = 0;
    while (done < 50) {
        Mat2c m{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m.a[i][j] = cd{u(rng), u(rng)};
        EigenDecomposition e;
        try {
            e = eigen_decompose(m);
        } catch (const Error&) {
            continue;  // skip (near-)defective draws
        }
        ++done;
        CHECK(residual_AS_SD(m, e) <= 1e-12 * std::max(1.0, m.max_abs()));
        Mat2c recon = e.S * Mat2c{{{e.lambda[0], 0.0}, {0.0, e.lambda[1]}}} * e.S_inv;
        CHECK((recon - m).max_abs() <= 1e-10 * std::max(1.0, m.max_abs()));
    }
}

TEST_CASE("elliptic flux matrices give a conjugate pair, upper branch first", "[eigen]") {
    GasModel gm{1.4, 1.0};
    Mat2d A = flux_matrix(gm, FlowState{0.1, 0.3});
    EigenDecomposition e = eigen_decompose(A);
    CHECK(e.lambda[0].imag() > 0.0);
    CHECK(e.lambda[1].imag() < 0.0);
    CHECK(std::abs(e.lambda[1] - std::conj(e.lambda[0])) < 1e-14);
    // trace / determinant consistency
    cd tr = e.lambda[0] + e.lambda[1];
    cd det = e.lambda[0] * e.lambda[1];
    CHECK(tr.real() == Approx(A.a[0][0] + A.a[1][1]).margin(1e-13));
    CHECK(det.real() ==
          Approx(A.a[0][0] * A.a[1][1] - A.a[0][1] * A.a[1][0]).margin(1e-13));
}

TEST_CASE("defective matrices are rejected", "[eigen]") {
    Mat2c jordan{};
    jordan.a[0][0] = 1.0;
    jordan.a[0][1] = 1.0;
    jordan.a[1][1] = 1.0;
    CHECK_THROWS_AS(eigen_decompose(jordan), Error);
}

TEST_CASE("eigenvector normalization is scale invariant", "[eigen]") {
    Vec2c v{{cd{0.3, -0.4}, cd{1.2, 0.7}}};
    Vec2c w{{v.v[0] * cd{0.7, -0.2}, v.v[1] * cd{0.7, -0.2}}};
    Vec2c nv = detail::normalize_convention(v);
    Vec2c nw = detail::normalize_convention(w);
    CHECK(std::abs(nv.v[0] - nw.v[0]) < 1e-14);
    CHECK(std::abs(nv.v[1] - nw.v[1]) < 1e-14);
}

TEST_CASE("matrix inverse round trip and singular rejection", "[eigen]") {
    Mat2c m{{{cd{1.0, 0.5}, cd{0.2, -0.1}}, {cd{-0.3, 0.0}, cd{0.8, 0.2}}}};
    Mat2c id = m * inverse(m);
    CHECK(std::abs(id.a[0][0] - 1.0) < 1e-14);
    CHECK(std::abs(id.a[1][1] - 1.0) < 1e-14);
    CHECK(std::abs(id.a[0][1]) < 1e-14);
    CHECK(std::abs(id.a[1][0]) < 1e-14);

    Mat2c sing{};
    sing.a[0][0] = 1.0;
    sing.a[0][1] = 2.0;
    sing.a[1][0] = 2.0;
    sing.a[1][1] = 4.0;
    CHECK_THROWS_AS(inverse(sing), Error);
}

TEST_CASE("branch tracking keeps eigenvalue paths continuous", "[eigen]") {
    // A(t) = [[0, 1 - 2t], [-1, 0]]: eigenvalues +/- i sqrt(1-2t) collide at
    // t = 0.5 and turn real beyond.
    std::vector<double> ts;
    std::vector<Mat2c> ms;
    for (int i = 0; i <= 100; ++i) {
        double t = i / 100.0;
        ts.push_back(t);
        Mat2c m{};
        m.a[0][1] = 1.0 - 2.0 * t;
        m.a[1][0] = -1.0;
        ms.push_back(m);
    }
    BranchPath path = track_eigenpairs(ts, ms);
    REQUIRE(path.lambdas[0].size() == ts.size());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        for (int b = 0; b < 2; ++b)
            CHECK(std::abs(path.lambdas[b][i + 1] - path.lambdas[b][i]) < 0.25);
    // Endpoints: pure imaginary at t=0, pure real at t=1.
    CHECK(std::abs(path.lambdas[0][0].real()) < 1e-12);
    CHECK(std::abs(path.lambdas[0].back().imag()) < 1e-12);
    // The collision at t = 0.5 must be flagged.
    CHECK_FALSE(path.cluster_samples.empty());
}
