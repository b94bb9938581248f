#pragma once

// Gaussian-windowed phase-space transform of one-dimensional data, plus the
// decay-rate fit that classifies phase-space points by the large-scale
// behavior of the weighted magnitude.
//
// All magnitude work uses the overflow-safe weighted form
//     W(z, mu) = | integral exp(-(mu q/2)((z-x)^2 + (Im z)^2)) f(x) dx |
// whose integrand never exceeds |f|; the unweighted transform is recovered by
// multiplying exp(+(mu q/2)(Im z)^2) and flagged when that factor overflows.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "transonic/error.hpp"
#include "transonic/parallel.hpp"
#include "transonic/quadrature.hpp"

namespace transonic {

using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// Data

/// One-dimensional datum: either a callable with declared effective support,
/// or samples with interpolation (order 1 linear, order 3 natural cubic
/// spline).  Sampled data are extended by zero outside the sample window, so
/// the window edge behaves like a jump unless the data decay there; keep
/// query points several kernel widths away from the edges.
class Datum1D {
public:
    static Datum1D from_function(std::function<cd(double)> f, double lo, double hi,
                                 std::vector<double> breakpoints = {}) {
        require(hi > lo, "microlocal", "datum support must be a nonempty interval");
        Datum1D d;
        d.fn_ = std::move(f);
        d.lo_ = lo;
        d.hi_ = hi;
        d.breaks_ = std::move(breakpoints);
        std::sort(d.breaks_.begin(), d.breaks_.end());
        return d;
    }

    static Datum1D from_samples(std::vector<double> xs, std::vector<cd> fs, int order = 3) {
        require(xs.size() >= 2 && xs.size() == fs.size(), "microlocal",
                "sampled datum needs matching x/f arrays of length >= 2");
        require(order == 1 || order == 3, "microlocal", "interpolation order must be 1 or 3");
        for (std::size_t i = 1; i < xs.size(); ++i)
            require(xs[i] > xs[i - 1], "microlocal", "sample grid must be strictly increasing");
        Datum1D d;
        d.lo_ = xs.front();
        d.hi_ = xs.back();
        d.xs_ = std::move(xs);
        d.fs_ = std::move(fs);
        d.order_ = order;
        if (order == 3) d.build_spline();
        // Knots limit integrand smoothness; expose them as quadrature split
        // points when few enough that splitting stays cheap.
        if (d.xs_.size() <= 64)
            d.breaks_.assign(d.xs_.begin() + 1, d.xs_.end() - 1);
        return d;
    }

    cd operator()(double x) const {
        if (x < lo_ || x > hi_) return cd{};
        if (fn_) return fn_(x);
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t j = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
        if (j >= xs_.size() - 1) j = xs_.size() - 2;
        double h = xs_[j + 1] - xs_[j];
        double a = (xs_[j + 1] - x) / h, b = (x - xs_[j]) / h;
        if (order_ == 1) return a * fs_[j] + b * fs_[j + 1];
        return a * fs_[j] + b * fs_[j + 1] +
               ((a * a * a - a) * m2_[j] + (b * b * b - b) * m2_[j + 1]) * (h * h) / 6.0;
    }

    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }

    /// Interior points where the datum is not smooth (kinks, jumps, knots);
    /// quadrature splits panels there.
    const std::vector<double>& breakpoints() const { return breaks_; }

    /// Coarse scan of sup |f| over the support (zero-field detection).
    double sup_abs_estimate(int samples = 513) const {
        double m = 0.0;
        for (int i = 0; i < samples; ++i) {
            double x = lo_ + (hi_ - lo_) * i / (samples - 1.0);
            m = std::max(m, std::abs((*this)(x)));
        }
        return m;
    }

private:
    void build_spline() {
        std::size_t n = xs_.size();
        m2_.assign(n, cd{});
        if (n < 3) return;  // natural spline on 2 points is linear
        std::vector<double> diag(n, 0.0), sub(n, 0.0), sup(n, 0.0);
        std::vector<cd> rhs(n, cd{});
        diag[0] = diag[n - 1] = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double hl = xs_[i] - xs_[i - 1], hr = xs_[i + 1] - xs_[i];
            sub[i] = hl / 6.0;
            diag[i] = (hl + hr) / 3.0;
            sup[i] = hr / 6.0;
            rhs[i] = (fs_[i + 1] - fs_[i]) / hr - (fs_[i] - fs_[i - 1]) / hl;
        }
        // Thomas algorithm.
        for (std::size_t i = 1; i < n; ++i) {
            double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m2_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m2_[i] = (rhs[i] - sup[i] * m2_[i + 1]) / diag[i];
    }

    std::function<cd(double)> fn_;
    double lo_ = 0.0, hi_ = 0.0;
    std::vector<double> xs_, breaks_;
    std::vector<cd> fs_, m2_;
    int order_ = 1;
};

/// Named datum presets used by the command-line tools and the calibration
/// corpus.  Support windows are chosen so the truncation error at the window
/// edge is far below quadrature tolerance for every query in range.
inline Datum1D make_preset_datum(const std::string& name) {
    if (name == "gaussian")
        return Datum1D::from_function([](double x) { return cd{std::exp(-x * x), 0.0}; }, -8.0, 8.0);
    if (name == "lorentzian")
        return Datum1D::from_function([](double x) { return cd{1.0 / (1.0 + x * x), 0.0}; }, -60.0,
                                      60.0);
    if (name == "abs")
        return Datum1D::from_function([](double x) { return cd{std::abs(x), 0.0}; }, -20.0, 20.0,
                                      {0.0});
    if (name == "step")
        return Datum1D::from_function([](double) { return cd{1.0, 0.0}; }, 0.0, 20.0);
    throw Error("microlocal", "unknown datum preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// Transform

/// Query point for the phase-space transform.  q is the (scalar) positive
/// quadratic form; q = 1 gives the plain kernel exp(-(mu/2)(z-x)^2).
struct FBIQuery {
    cd z{};
    double mu = 1.0;
    double q_form = 1.0;

    void validate() const {
        require(mu >= 1.0, "microlocal", "transform scale mu must be >= 1");
        require(q_form > 0.0, "microlocal", "quadratic form must be positive definite");
    }
};

namespace detail {

/// Integration window: datum support intersected with the region where the
/// kernel modulus exceeds e^{-72} of its peak (|x - Re z| <= 12 / sqrt(mu)).
/// The integrand vanishes outside the support, so clipping loses nothing and
/// pins support-edge discontinuities to integration endpoints, where panel
/// quadrature is clean.  An empty intersection means the transform is zero
/// to well below every tolerance in use.
inline std::pair<double, double> fbi_window(const Datum1D& f, double re_z, double mu_eff) {
    double half = std::max(12.0 / std::sqrt(mu_eff), 1.0);
    double lo = std::max(f.support_lo(), re_z - half);
    double hi = std::min(f.support_hi(), re_z + half);
    return {lo, hi};
}

}  // namespace detail

/// Weighted magnitude-safe transform:
///   integral exp(-(mu q/2)[(z-x)^2 + (Im z)^2]) f(x) dx
/// equal to (transform) * exp(-(mu q/2)(Im z)^2).  The integrand modulus is
/// bounded by |f| for every x, so no overflow occurs for any (z, mu).
inline cd fbi_weighted(const Datum1D& f, cd z, double mu, double quad_tol = 1e-12,
                       double q_form = 1.0) {
    FBIQuery{z, mu, q_form}.validate();
    double mu_eff = mu * q_form;
    auto [lo, hi] = detail::fbi_window(f, z.real(), mu_eff);
    if (!(lo < hi)) return cd{};
    double im2 = z.imag() * z.imag();
    auto integrand = [&](double x) {
        cd dz = z - x;
        cd expo = -(0.5 * mu_eff) * (dz * dz + im2);
        return std::exp(expo) * f(x);
    };
    // Initial panel count resolves both the kernel width 1/sqrt(mu_eff) and
    // the oscillation scale 1/(mu_eff |Im z|).
    double feature = std::max(std::sqrt(mu_eff), mu_eff * std::abs(z.imag()) / (2.0 * M_PI));
    // Split at interior non-smooth points of the datum so each adaptive run
    // sees a smooth integrand.
    std::vector<double> cuts{lo};
    for (double b : f.breakpoints())
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    cd total{};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        int init = std::clamp(static_cast<int>((b - a) * feature / 8.0), 4, 512);
        total += integrate_adaptive(integrand, a, b, quad_tol, init).value;
    }
    return total;
}

struct FBIResult {
    cd value{};          // transform value; saturated if overflow is set
    double log_abs = 0;  // log |transform|, finite even when value overflows
    bool overflow = false;
    bool underflow = false;  // weighted magnitude below representable range
};

/// Transform with general positive scalar form q:
///   integral exp(-(mu q/2)(z-x)^2) f(x) dx.
/// Computed through the weighted form; the exp(+(mu q/2)(Im z)^2) restoration
/// factor is flagged when it exceeds the double range.
inline FBIResult generalized_fbi(const Datum1D& f, const FBIQuery& query,
                                 double quad_tol = 1e-12) {
    query.validate();
    cd w = fbi_weighted(f, query.z, query.mu, quad_tol, query.q_form);
    FBIResult r;
    double lift = 0.5 * query.mu * query.q_form * query.z.imag() * query.z.imag();
    double wabs = std::abs(w);
    if (wabs == 0.0) {
        r.underflow = true;
        r.log_abs = -std::numeric_limits<double>::infinity();
        r.value = cd{};
        return r;
    }
    r.log_abs = std::log(wabs) + lift;
    if (r.log_abs > 700.0) {
        r.overflow = true;
        r.value = std::polar(std::exp(700.0), std::arg(w));
    } else {
        r.value = w * std::exp(lift);
    }
    return r;
}

/// Plain transform (q = 1): integral exp(-(mu/2)(z-x)^2) f(x) dx.
inline FBIResult fbi_transform(const Datum1D& f, const FBIQuery& query, double quad_tol = 1e-12) {
    FBIQuery q1 = query;
    q1.q_form = 1.0;
    return generalized_fbi(f, q1, quad_tol);
}

// ---------------------------------------------------------------------------
// Decay fitting and phase-space classification

/// Geometric grid of n points from lo to hi inclusive.
inline std::vector<double> geometric_mu_grid(double lo = 1.0, double hi = 256.0, int n = 16) {
    require(lo > 0.0 && hi > lo && n >= 2, "microlocal", "bad geometric grid parameters");
    std::vector<double> g(static_cast<std::size_t>(n));
    double ratio = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

struct FitResult {
    double eps_hat = 0.0;    // weighted magnitude ~ exp(-eps_hat * mu / 2)
    double rms_rel = 0.0;    // RMS fit residual / value range over the window
    double rms_abs = 0.0;    // RMS fit residual in log units
    double intercept = 0.0;  // fitted L at mu = 0
};

/// Least-squares line fit of L against mu/2 over indices [lo_index, end).
/// The negated slope is the decay-rate estimate.
inline FitResult fit_decay_rate(const std::vector<double>& mus, const std::vector<double>& Ls,
                                std::size_t lo_index) {
    require(mus.size() == Ls.size(), "microlocal", "fit arrays must have equal length");
    require(lo_index + 2 <= mus.size(), "microlocal", "decay fit needs at least 2 points");
    std::size_t n = mus.size() - lo_index;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (std::size_t i = lo_index; i < mus.size(); ++i) {
        double x = 0.5 * mus[i], y = Ls[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    double denom = n * sxx - sx * sx;
    require(denom > 0.0, "microlocal", "degenerate mu grid in decay fit");
    double slope = (n * sxy - sx * sy) / denom;
    double icept = (sy - slope * sx) / n;
    double ss = 0;
    for (std::size_t i = lo_index; i < mus.size(); ++i) {
        double r = Ls[i] - (icept + slope * 0.5 * mus[i]);
        ss += r * r;
    }
    FitResult fr;
    fr.eps_hat = -slope;
    fr.rms_abs = std::sqrt(ss / n);
    fr.rms_rel = fr.rms_abs / std::max(ymax - ymin, 1e-12);
    fr.intercept = icept;
    return fr;
}

/// Fit window selection against the quadrature noise floor.  Exponentially
/// decaying magnitudes eventually sink below what cancellation-limited panel
/// quadrature can resolve (roughly machine epsilon times the integrated
/// modulus); once L(mu) reaches that floor the samples carry no decay
/// information and must not enter the fit.
struct FitWindow {
    std::size_t lo = 0, hi = 0;  // fitted index range [lo, hi)
    bool valid = false;          // >= 4 trusted points available
    bool floor_clipped = false;  // some large-mu samples were discarded
};

/// Least-squares decay fit over the upper half of the floor-trusted prefix.
/// floors[i] is the per-sample noise-floor estimate in log units; samples
/// with L <= floor + 3 end the trusted prefix.
inline FitResult fit_decay_rate_windowed(const std::vector<double>& mus,
                                         const std::vector<double>& Ls,
                                         const std::vector<double>& floors, FitWindow& win) {
    require(mus.size() == Ls.size() && mus.size() == floors.size(), "microlocal",
            "fit arrays must have equal length");
    std::size_t trusted = mus.size();
    for (std::size_t i = 0; i < mus.size(); ++i) {
        if (Ls[i] <= floors[i] + 3.0) {
            trusted = i;
            break;
        }
    }
    win.floor_clipped = trusted < mus.size();
    if (trusted < 4) {
        win.valid = false;
        win.lo = win.hi = trusted;
        FitResult fr;
        fr.rms_rel = std::numeric_limits<double>::infinity();
        fr.rms_abs = fr.rms_rel;
        return fr;
    }
    win.valid = true;
    win.lo = trusted / 2;
    win.hi = trusted;
    std::vector<double> m(mus.begin(), mus.begin() + static_cast<std::ptrdiff_t>(trusted));
    std::vector<double> l(Ls.begin(), Ls.begin() + static_cast<std::ptrdiff_t>(trusted));
    return fit_decay_rate(m, l, win.lo);
}

/// Classification thresholds.  These are outputs of the brute-force
/// calibration sweep (tools/fbi_calibrate + docs/calibration.md), re-run
/// whenever kernel, window, or fit-window conventions change.  Measured on
/// the default [1, 256] grid: analytic corpus points give eps_hat in
/// [0.58, 0.60] with relative RMS <= 6e-3; singular points give |eps_hat|
/// <= 0.044 with relative RMS >= 0.11.  Each threshold sits >= 3x from the
/// nearest measured value on both sides.
struct DecayThresholds {
    double eps_min = 0.15;   // smallest decay rate certified as exponential
    double eps_flat = 0.10;  // largest |rate| still considered flat
    double fit_tol = 0.03;   // max relative RMS residual for a trusted line fit
};

inline constexpr DecayThresholds calibrated_thresholds{};

/// Decay-rate floor for the transformed characteristic data checked by the
/// conjugation pipeline.  Kept separate from eps_min: the pipeline probes
/// directions xi0 = offset * Im(lambda), two orders of magnitude smaller
/// than the calibration corpus directions, so the observable rates scale
/// down by xi0^2.  Manufactured analytic runs measure eps_hat around 5e-3.
inline constexpr double pipeline_eps_floor = 1e-3;

enum class WfClass { NotInWFA, InWFA, Inconclusive };

inline const char* to_string(WfClass c) {
    switch (c) {
        case WfClass::NotInWFA: return "NotInWFA";
        case WfClass::InWFA: return "InWFA";
        default: return "Inconclusive";
    }
}

struct DecayProfile {
    double x0 = 0.0, xi0 = 0.0;
    cd z0{};
    double disc_radius = 0.0;
    std::vector<double> mus;
    std::vector<double> weighted_log_abs;  // L(mu), max over the z disc
    double eps_hat = 0.0;
    double fit_residual = 0.0;      // relative RMS (fit window)
    double fit_residual_abs = 0.0;  // absolute RMS in log units
    WfClass verdict = WfClass::Inconclusive;
    bool underflow_clamped = false;
    bool fit_valid = false;      // enough floor-trusted samples to fit
    bool floor_clipped = false;  // large-mu samples discarded at the noise floor
    std::size_t fit_points = 0;  // samples entering the least-squares fit
};

namespace detail {

inline constexpr double kLogFloor = -700.0;

/// L(mu) = max over a disc of z samples of log |weighted transform|.
/// Returns the clamped max and sets the clamp flag if every sample
/// underflowed.
inline double weighted_log_max(const Datum1D& f, cd z_center, double disc_radius, double mu,
                               double quad_tol, double q_form, bool* clamped) {
    std::vector<cd> zs;
    zs.push_back(z_center);
    if (disc_radius > 0.0) {
        for (int k = 0; k < 8; ++k) {
            double th = 2.0 * M_PI * k / 8.0;
            zs.push_back(z_center + disc_radius * cd{std::cos(th), std::sin(th)});
        }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (cd z : zs) {
        double a = std::abs(fbi_weighted(f, z, mu, quad_tol, q_form));
        if (a > 0.0) best = std::max(best, std::log(a));
    }
    if (!std::isfinite(best)) {
        if (clamped) *clamped = true;
        return kLogFloor;
    }
    return std::max(best, kLogFloor);
}

/// Log of the smallest weighted magnitude the panel quadrature can still
/// distinguish from cancellation noise: machine-precision times a bound on
/// the integrated modulus (sup |f| times the smaller of the window width and
/// the Gaussian kernel mass).  The disc radius widens the window because the
/// profile takes a max over disc samples.
inline double quadrature_floor_log(const Datum1D& f, double sup_f, double re_z0,
                                   double disc_radius, double mu_eff) {
    auto [lo, hi] = fbi_window(f, re_z0, mu_eff);
    double width = std::max(hi - lo, 0.0) + 2.0 * disc_radius;
    double mass = sup_f * std::min(width, std::sqrt(2.0 * M_PI / mu_eff));
    if (!(mass > 0.0)) return kLogFloor;
    return std::max(std::log(1e-15 * mass), kLogFloor);
}

}  // namespace detail

/// Weighted-magnitude decay profile at the phase-space point (x0, xi0):
/// probes z0 = x0 - i xi0 plus a small disc, fits log-magnitude against mu/2
/// over the upper half of the grid, and classifies.
inline DecayProfile decay_profile(const Datum1D& f, double x0, double xi0,
                                  std::vector<double> mus, double disc_radius = -1.0,
                                  double quad_tol = 1e-12,
                                  const DecayThresholds& th = calibrated_thresholds,
                                  double q_form = 1.0) {
    require(xi0 != 0.0, "microlocal", "phase-space direction xi0 must be nonzero");
    require(mus.size() >= 8, "microlocal", "mu grid needs at least 8 points");
    for (std::size_t i = 1; i < mus.size(); ++i)
        require(mus[i] > mus[i - 1], "microlocal", "mu grid must be increasing");
    require(mus.front() <= 1.0 + 1e-9 && mus.back() >= 256.0 - 1e-9, "microlocal",
            "mu grid must span at least [1, 256]");

    DecayProfile p;
    p.x0 = x0;
    p.xi0 = xi0;
    p.z0 = cd{x0, -xi0 / q_form};
    p.disc_radius = (disc_radius >= 0.0) ? disc_radius : 0.25 * std::abs(xi0) / q_form;
    p.mus = std::move(mus);

    std::vector<char> clamped(p.mus.size(), 0);
    p.weighted_log_abs = parallel_map<double>(p.mus.size(), [&](std::size_t i) {
        bool c = false;
        double L = detail::weighted_log_max(f, p.z0, p.disc_radius, p.mus[i], quad_tol, q_form, &c);
        clamped[i] = c ? 1 : 0;
        return L;
    });
    for (char c : clamped) p.underflow_clamped |= (c != 0);

    double sup_f = f.sup_abs_estimate();
    std::vector<double> floors(p.mus.size());
    for (std::size_t i = 0; i < p.mus.size(); ++i)
        floors[i] = detail::quadrature_floor_log(f, sup_f, p.z0.real(), p.disc_radius,
                                                 p.mus[i] * q_form);

    FitWindow win;
    FitResult fit = fit_decay_rate_windowed(p.mus, p.weighted_log_abs, floors, win);
    p.eps_hat = fit.eps_hat;
    p.fit_residual = fit.rms_rel;
    p.fit_residual_abs = fit.rms_abs;
    p.fit_valid = win.valid;
    p.floor_clipped = win.floor_clipped;
    p.fit_points = win.hi - win.lo;

    if (!win.valid)
        p.verdict = WfClass::Inconclusive;
    else if (p.eps_hat >= th.eps_min && p.fit_residual <= th.fit_tol)
        p.verdict = WfClass::NotInWFA;
    else if (std::abs(p.eps_hat) <= th.eps_flat)
        p.verdict = WfClass::InWFA;
    else
        p.verdict = WfClass::Inconclusive;
    return p;
}

enum class PointClass { Analytic, NotAnalytic, Inconclusive };

inline const char* to_string(PointClass c) {
    switch (c) {
        case PointClass::Analytic: return "Analytic";
        case PointClass::NotAnalytic: return "NotAnalytic";
        default: return "Inconclusive";
    }
}

struct AnalyticityReport {
    PointClass verdict = PointClass::Inconclusive;
    std::vector<DecayProfile> profiles;
};

/// Pointwise test: x0 is declared analytic when every sampled direction with
/// |xi| > lambda_floor shows certified exponential decay; non-analytic when
/// any direction shows flat/polynomial decay; otherwise inconclusive.
inline AnalyticityReport analyticity_test(const Datum1D& f, double x0, double lambda_floor,
                                          const std::vector<double>& xis,
                                          const std::vector<double>& mus = geometric_mu_grid(
                                              1.0, 256.0, 16),
                                          double disc_radius = -1.0, double quad_tol = 1e-12,
                                          const DecayThresholds& th = calibrated_thresholds) {
    require(!xis.empty(), "microlocal", "analyticity test needs at least one direction");
    bool pos = false, neg = false;
    for (double xi : xis) {
        require(std::abs(xi) > lambda_floor, "microlocal",
                "all sampled directions must satisfy |xi| > lambda floor");
        (xi > 0 ? pos : neg) = true;
    }
    require(pos && neg, "microlocal", "direction samples must cover both signs");

    AnalyticityReport rep;
    for (double xi : xis)
        rep.profiles.push_back(decay_profile(f, x0, xi, mus, disc_radius, quad_tol, th));
    bool all_not = true, any_in = false;
    for (const auto& p : rep.profiles) {
        all_not = all_not && (p.verdict == WfClass::NotInWFA);
        any_in = any_in || (p.verdict == WfClass::InWFA);
    }
    if (all_not)
        rep.verdict = PointClass::Analytic;
    else if (any_in)
        rep.verdict = PointClass::NotAnalytic;
    else
        rep.verdict = PointClass::Inconclusive;
    return rep;
}

}  // namespace transonic
