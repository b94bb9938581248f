#pragma once

// Steady two-dimensional isentropic irrotational flow of a polytropic gas,
// written as a first-order quasilinear system for the velocity components
// u = (u1, u2):
//
//     dT u + A(u) dx u = 0,
//     A(u) = [ -2 u1 u2 / (c^2 - u1^2)   (c^2 - u2^2) / (c^2 - u1^2) ]
//            [ -1                         0                          ]
//
// with Bernoulli closure rho(q) = (1 - (g-1) q^2 / (2 c0^2))^(1/(g-1)) and
// local sound speed c^2 = c0^2 - (g-1) q^2 / 2, q = |u|.  The system type
// (elliptic / hyperbolic) switches across the sonic locus q = c.

#include <cmath>
#include <string>
#include <vector>

#include "transonic/error.hpp"

namespace transonic {

/// Polytropic gas: adiabatic exponent gamma > 1 and stagnation sound speed c0 > 0.
struct GasModel {
    double gamma;
    double c0;

    GasModel(double gamma_, double c0_) : gamma(gamma_), c0(c0_) {
        require(std::isfinite(gamma) && gamma > 1.0, "gas",
                "gas model requires gamma > 1, got " + std::to_string(gamma));
        require(std::isfinite(c0) && c0 > 0.0, "gas",
                "gas model requires c0 > 0, got " + std::to_string(c0));
    }

    /// Vacuum (cavitation) speed: density reaches zero at q = q_max.
    double q_max() const { return c0 * std::sqrt(2.0 / (gamma - 1.0)); }
};

/// Velocity state at a point.
struct FlowState {
    double u1 = 0.0;
    double u2 = 0.0;

    double speed() const { return std::hypot(u1, u2); }
};

inline void check_admissible(const GasModel& m, double q, const char* who) {
    require(std::isfinite(q) && q >= 0.0, who, "speed must be finite and nonnegative");
    require(q < m.q_max(), who,
            "state exceeds the vacuum speed limit: q = " + std::to_string(q) +
                " >= q_max = " + std::to_string(m.q_max()));
}

/// Bernoulli density rho(q), normalized to rho(0) = 1.  Requires q < q_max.
inline double density(const GasModel& m, double q) {
    check_admissible(m, q, "gas");
    double g = m.gamma;
    double base = 1.0 - (g - 1.0) * q * q / (2.0 * m.c0 * m.c0);
    return std::pow(base, 1.0 / (g - 1.0));
}

/// Squared local sound speed c^2(q) = c0^2 - (gamma-1) q^2 / 2.
inline double sound_speed_sq(const GasModel& m, double q) {
    check_admissible(m, q, "gas");
    return m.c0 * m.c0 - 0.5 * (m.gamma - 1.0) * q * q;
}

inline double sound_speed(const GasModel& m, const FlowState& s) {
    return std::sqrt(sound_speed_sq(m, s.speed()));
}

/// Local Mach number M = q / c(q).
inline double mach(const GasModel& m, const FlowState& s) {
    double q = s.speed();
    return q / std::sqrt(sound_speed_sq(m, q));
}

/// Speed at which q = c (the sonic speed), q_sonic = c0 sqrt(2/(gamma+1)).
inline double sonic_speed(const GasModel& m) {
    return m.c0 * std::sqrt(2.0 / (m.gamma + 1.0));
}

struct Mat2d {
    double a[2][2];
};

/// Coefficient matrix of the quasilinear system for given velocity and given
/// squared sound speed.  Degenerate when c^2 == u1^2 (the x-direction is
/// characteristic); rejected below tolerance.
inline Mat2d flux_matrix(double u1, double u2, double c2, double tol = 1e-12) {
    double den = c2 - u1 * u1;
    require(std::abs(den) > tol, "gas",
            "flux matrix degenerate: |c^2 - u1^2| = " + std::to_string(std::abs(den)) +
                " below tolerance");
    Mat2d A;
    A.a[0][0] = -2.0 * u1 * u2 / den;
    A.a[0][1] = (c2 - u2 * u2) / den;
    A.a[1][0] = -1.0;
    A.a[1][1] = 0.0;
    return A;
}

inline Mat2d flux_matrix(const GasModel& m, const FlowState& s) {
    return flux_matrix(s.u1, s.u2, sound_speed_sq(m, s.speed()));
}

enum class Regime { Elliptic, Hyperbolic, Sonic };

inline char regime_letter(Regime r) {
    switch (r) {
        case Regime::Elliptic: return 'E';
        case Regime::Hyperbolic: return 'H';
        default: return 'S';
    }
}

/// Pointwise type of the system: elliptic iff q^2 < c^2 - tol, hyperbolic iff
/// q^2 > c^2 + tol, sonic in the tolerance band.  tol is absolute on q^2 - c^2;
/// a negative tol requests the default 1e-9 * c0^2.
inline Regime classify(const GasModel& m, const FlowState& s, double tol = -1.0) {
    if (tol < 0.0) tol = 1e-9 * m.c0 * m.c0;
    double q = s.speed();
    check_admissible(m, q, "gas");
    double diff = q * q - sound_speed_sq(m, q);
    if (diff < -tol) return Regime::Elliptic;
    if (diff > tol) return Regime::Hyperbolic;
    return Regime::Sonic;
}

/// Rectangular sampled velocity field: states[it][ix] at (T = ts[it], x = xs[ix]).
struct VelocityField {
    std::vector<double> xs;
    std::vector<double> ts;
    std::vector<std::vector<FlowState>> states;

    void validate() const {
        require(!xs.empty() && !ts.empty(), "gas", "velocity field grid is empty");
        for (std::size_t i = 1; i < xs.size(); ++i)
            require(xs[i] > xs[i - 1], "gas", "x coordinates must be strictly increasing");
        for (std::size_t i = 1; i < ts.size(); ++i)
            require(ts[i] > ts[i - 1], "gas", "T coordinates must be strictly increasing");
        require(states.size() == ts.size(), "gas", "velocity field row count mismatch");
        for (const auto& row : states)
            require(row.size() == xs.size(), "gas", "velocity field column count mismatch");
    }
};

/// One grid edge whose endpoints classify on opposite sides of the sonic band.
/// Endpoints are given by (column, row) node indices into the field grid.
struct SonicEdge {
    std::size_t ix_a, it_a;
    std::size_t ix_b, it_b;
};

/// All grid edges (horizontal and vertical neighbors) straddling the sonic
/// locus: one endpoint elliptic, the other hyperbolic.
inline std::vector<SonicEdge> sonic_line(const GasModel& m, const VelocityField& f,
                                         double tol = -1.0) {
    f.validate();
    std::vector<std::vector<Regime>> r(f.ts.size(), std::vector<Regime>(f.xs.size()));
    for (std::size_t it = 0; it < f.ts.size(); ++it)
        for (std::size_t ix = 0; ix < f.xs.size(); ++ix)
            r[it][ix] = classify(m, f.states[it][ix], tol);

    auto straddles = [](Regime a, Regime b) {
        return (a == Regime::Elliptic && b == Regime::Hyperbolic) ||
               (a == Regime::Hyperbolic && b == Regime::Elliptic);
    };
    std::vector<SonicEdge> edges;
    for (std::size_t it = 0; it < f.ts.size(); ++it)
        for (std::size_t ix = 0; ix + 1 < f.xs.size(); ++ix)
            if (straddles(r[it][ix], r[it][ix + 1]))
                edges.push_back({ix, it, ix + 1, it});
    for (std::size_t it = 0; it + 1 < f.ts.size(); ++it)
        for (std::size_t ix = 0; ix < f.xs.size(); ++ix)
            if (straddles(r[it][ix], r[it + 1][ix]))
                edges.push_back({ix, it, ix, it + 1});
    return edges;
}

}  // namespace transonic
