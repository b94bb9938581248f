// Calibration sweep for the decay-verdict thresholds: runs the default-grid
// decay fit over the four-datum corpus at hand-checked analytic and singular
// base points, in both directions, and prints the measured exponents and fit
// residuals.  The frozen thresholds in the library and the table in
// docs/calibration.md come from this tool's output.

#include <cstdio>
#include <string>
#include <vector>

#include "transonic/fbi.hpp"

using namespace transonic;

int main() {
    struct Point {
        const char* datum;
        double x0;
        const char* expected;  // hand classification of the base point
    };
    const std::vector<Point> points = {
        {"gaussian", 0.0, "analytic"}, {"gaussian", 1.0, "analytic"},
        {"lorentzian", 0.0, "analytic"}, {"lorentzian", 2.0, "analytic"},
        {"abs", 0.0, "singular"},      {"abs", 1.0, "analytic"},
        {"abs", -1.0, "analytic"},     {"step", 10.0, "analytic"},
        {"step", 0.0, "singular"},
    };
    const std::vector<double> mus = geometric_mu_grid(1.0, 256.0, 16);

    std::printf("%-11s %7s %5s %12s %12s %12s %4s %5s  %s\n", "datum", "x0", "xi", "eps_hat",
                "rms_rel", "rms_abs", "npts", "clip", "verdict(current thresholds)");
    double min_analytic_eps = 1e300, max_singular_eps = 0.0;
    double max_analytic_rms = 0.0, min_singular_rms = 1e300;
    for (const auto& pt : points) {
        Datum1D f = make_preset_datum(pt.datum);
        for (double xi : {1.0, -1.0}) {
            DecayProfile p = decay_profile(f, pt.x0, xi, mus);
            std::printf("%-11s %7.3f %5.1f %12.5e %12.5e %12.5e %4zu %5s  %s [%s]\n", pt.datum,
                        pt.x0, xi, p.eps_hat, p.fit_residual, p.fit_residual_abs, p.fit_points,
                        p.floor_clipped ? "yes" : "no", to_string(p.verdict), pt.expected);
            if (std::string(pt.expected) == "analytic") {
                min_analytic_eps = std::min(min_analytic_eps, p.eps_hat);
                max_analytic_rms = std::max(max_analytic_rms, p.fit_residual);
            } else {
                max_singular_eps = std::max(max_singular_eps, std::abs(p.eps_hat));
                min_singular_rms = std::min(min_singular_rms, p.fit_residual);
            }
        }
    }
    std::printf("\nanalytic points:  min eps_hat = %.5e, max rms_rel = %.5e\n", min_analytic_eps,
                max_analytic_rms);
    std::printf("singular points:  max |eps_hat| = %.5e, min rms_rel = %.5e\n", max_singular_eps,
                min_singular_rms);
    std::printf("separation (min analytic / max singular eps_hat) = %.2fx\n",
                min_analytic_eps / std::max(max_singular_eps, 1e-300));
    return 0;
}
