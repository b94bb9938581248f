#pragma once

// Closed-form spectral machinery for 2x2 (generally complex) matrices:
// quadratic-formula eigenvalues, explicit eigenvectors, and continuous branch
// tracking along one-parameter matrix paths with collision (cluster) flagging.
// Deliberately specialized to n = 2; no general eigensolver is wanted here.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "transonic/error.hpp"
#include "transonic/gas.hpp"

namespace transonic {

using cd = std::complex<double>;

struct Vec2c {
    cd v[2];
};

struct Mat2c {
    cd a[2][2];

    static Mat2c identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

    static Mat2c from(const Mat2d& r) {
        Mat2c m;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m.a[i][j] = r.a[i][j];
        return m;
    }

    cd trace() const { return a[0][0] + a[1][1]; }
    cd det() const { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

    double max_abs() const {
        double m = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a[i][j]));
        return m;
    }
};

inline Mat2c operator*(const Mat2c& x, const Mat2c& y) {
    Mat2c z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            z.a[i][j] = x.a[i][0] * y.a[0][j] + x.a[i][1] * y.a[1][j];
    return z;
}

inline Vec2c operator*(const Mat2c& x, const Vec2c& v) {
    return {{x.a[0][0] * v.v[0] + x.a[0][1] * v.v[1],
             x.a[1][0] * v.v[0] + x.a[1][1] * v.v[1]}};
}

inline Mat2c operator-(const Mat2c& x, const Mat2c& y) {
    Mat2c z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) z.a[i][j] = x.a[i][j] - y.a[i][j];
    return z;
}

inline Mat2c inverse(const Mat2c& m, const char* who = "eigen") {
    cd d = m.det();
    require(std::abs(d) > 0.0, who, "2x2 matrix not invertible");
    Mat2c r;
    r.a[0][0] = m.a[1][1] / d;
    r.a[0][1] = -m.a[0][1] / d;
    r.a[1][0] = -m.a[1][0] / d;
    r.a[1][1] = m.a[0][0] / d;
    return r;
}

/// Both eigenvalues by the quadratic formula, lambda = (tr +- sqrt(tr^2 - 4 det))/2.
/// Ordered with the larger imaginary part first, so real matrices with complex
/// spectrum list the upper (positive-imaginary) branch before its conjugate.
inline std::array<cd, 2> eigenvalues2(const Mat2c& m) {
    cd tr = m.trace();
    cd disc = tr * tr - 4.0 * m.det();
    cd root = std::sqrt(disc);
    std::array<cd, 2> lam{0.5 * (tr + root), 0.5 * (tr - root)};
    // Complex products of real inputs can leave disc with a negative-zero
    // imaginary part, and the principal square root then lands in the lower
    // half-plane; sort explicitly instead of trusting the sign of Im(root).
    if (lam[0].imag() < lam[1].imag()) std::swap(lam[0], lam[1]);
    return lam;
}

namespace detail {

// Eigenvector for a given eigenvalue from the larger row of (A - lambda I);
// both rows of that singular matrix are proportional, and v is chosen
// orthogonal to the larger one.  Returns false when A - lambda I vanishes
// (scalar matrix: every vector is an eigenvector).
inline bool eigvec_raw(const Mat2c& m, cd lambda, double scale, Vec2c& out) {
    cd r1[2] = {m.a[0][0] - lambda, m.a[0][1]};
    cd r2[2] = {m.a[1][0], m.a[1][1] - lambda};
    double n1 = std::abs(r1[0]) + std::abs(r1[1]);
    double n2 = std::abs(r2[0]) + std::abs(r2[1]);
    if (std::max(n1, n2) <= 1e-14 * scale) return false;
    if (n1 >= n2)
        out = {{r1[1], -r1[0]}};
    else
        out = {{r2[1], -r2[0]}};
    return true;
}

// Unit Euclidean length with the first component of magnitude above tol made
// real and positive.
inline Vec2c normalize_convention(Vec2c v) {
    double n = std::sqrt(std::norm(v.v[0]) + std::norm(v.v[1]));
    require(n > 0.0, "eigen", "zero eigenvector candidate");
    v.v[0] /= n;
    v.v[1] /= n;
    cd lead = (std::abs(v.v[0]) > 1e-12) ? v.v[0] : v.v[1];
    cd phase = lead / std::abs(lead);
    v.v[0] /= phase;
    v.v[1] /= phase;
    return v;
}

}  // namespace detail

/// Full decomposition A = S D S^-1 with D = diag(lambda[0], lambda[1]) and the
/// columns of S the unit-normalized eigenvectors.  Throws for (numerically)
/// defective input.
struct EigenDecomposition {
    cd lambda[2];
    Mat2c S;
    Mat2c S_inv;
};

inline EigenDecomposition eigen_decompose(const Mat2c& m, double defect_tol = 1e-12) {
    double scale = std::max(1.0, m.max_abs());
    auto lam = eigenvalues2(m);
    EigenDecomposition d;
    d.lambda[0] = lam[0];
    d.lambda[1] = lam[1];

    Vec2c v[2];
    for (int k = 0; k < 2; ++k) {
        Vec2c raw;
        if (!detail::eigvec_raw(m, lam[k], scale, raw)) {
            // Scalar matrix: the coordinate directions serve.
            raw = (k == 0) ? Vec2c{{1.0, 0.0}} : Vec2c{{0.0, 1.0}};
        }
        v[k] = detail::normalize_convention(raw);
    }
    for (int k = 0; k < 2; ++k) {
        d.S.a[0][k] = v[k].v[0];
        d.S.a[1][k] = v[k].v[1];
    }
    double dets = std::abs(d.S.det());
    require(dets > defect_tol, "eigen",
            "matrix is defective (eigenvectors do not span): |det S| = " +
                std::to_string(dets));
    d.S_inv = inverse(d.S);
    return d;
}

inline EigenDecomposition eigen_decompose(const Mat2d& m, double defect_tol = 1e-12) {
    return eigen_decompose(Mat2c::from(m), defect_tol);
}

/// Two eigenvalue/eigenvector branches followed continuously along a sampled
/// matrix path.  cluster_samples lists the sample indices where the two
/// eigenvalues collide within tolerance (branch labels are unreliable across
/// such an event; the assignment still minimizes total displacement).
struct BranchPath {
    std::vector<double> ts;
    std::array<std::vector<cd>, 2> lambdas;
    std::array<std::vector<Vec2c>, 2> vectors;
    std::vector<std::size_t> cluster_samples;
};

inline BranchPath track_eigenpairs(const std::vector<double>& ts,
                                   const std::vector<Mat2c>& path,
                                   double collision_tol = 1e-8) {
    require(ts.size() == path.size() && !ts.empty(), "eigen",
            "matrix path and parameter samples must align and be nonempty");
    BranchPath out;
    out.ts = ts;
    for (int k = 0; k < 2; ++k) {
        out.lambdas[k].reserve(ts.size());
        out.vectors[k].reserve(ts.size());
    }

    auto overlap = [](const Vec2c& a, const Vec2c& b) {
        return std::abs(std::conj(a.v[0]) * b.v[0] + std::conj(a.v[1]) * b.v[1]);
    };

    for (std::size_t j = 0; j < path.size(); ++j) {
        const Mat2c& m = path[j];
        double scale = std::max(1.0, m.max_abs());
        auto lam = eigenvalues2(m);
        Vec2c v[2];
        for (int k = 0; k < 2; ++k)
            if (detail::eigvec_raw(m, lam[k], scale, v[k]))
                v[k] = detail::normalize_convention(v[k]);
            else
                v[k] = (k == 0) ? Vec2c{{1.0, 0.0}} : Vec2c{{0.0, 1.0}};

        if (std::abs(lam[0] - lam[1]) <= collision_tol * scale)
            out.cluster_samples.push_back(j);

        int order[2] = {0, 1};
        if (j > 0) {
            cd p0 = out.lambdas[0].back(), p1 = out.lambdas[1].back();
            double keep = std::abs(lam[0] - p0) + std::abs(lam[1] - p1);
            double swap = std::abs(lam[1] - p0) + std::abs(lam[0] - p1);
            if (std::abs(keep - swap) <= 1e-14 * scale) {
                // Displacement tie: prefer the assignment with larger
                // eigenvector overlap against the previous sample.
                double keep_ov = overlap(out.vectors[0].back(), v[0]) +
                                 overlap(out.vectors[1].back(), v[1]);
                double swap_ov = overlap(out.vectors[0].back(), v[1]) +
                                 overlap(out.vectors[1].back(), v[0]);
                if (swap_ov > keep_ov) {
                    order[0] = 1;
                    order[1] = 0;
                }
            } else if (swap < keep) {
                order[0] = 1;
                order[1] = 0;
            }
        }

        for (int k = 0; k < 2; ++k) {
            Vec2c w = v[order[k]];
            if (j > 0) {
                // Phase continuity: rotate so the overlap with the previous
                // sample's vector is real and nonnegative.
                const Vec2c& prev = out.vectors[k].back();
                cd ov = std::conj(prev.v[0]) * w.v[0] + std::conj(prev.v[1]) * w.v[1];
                if (std::abs(ov) > 1e-12) {
                    cd phase = ov / std::abs(ov);
                    w.v[0] /= phase;
                    w.v[1] /= phase;
                }
            }
            out.lambdas[k].push_back(lam[order[k]]);
            out.vectors[k].push_back(w);
        }
    }
    return out;
}

inline BranchPath track_eigenpairs(const std::vector<double>& ts,
                                   const std::vector<Mat2d>& path,
                                   double collision_tol = 1e-8) {
    std::vector<Mat2c> cpath;
    cpath.reserve(path.size());
    for (const auto& m : path) cpath.push_back(Mat2c::from(m));
    return track_eigenpairs(ts, cpath, collision_tol);
}

}  // namespace transonic
