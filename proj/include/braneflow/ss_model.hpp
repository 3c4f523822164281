#pragma once

// Exactly solvable companion model on the surface {x y = w}: the flow of
// H = Im(w) for the flat ambient Kaehler structure is the linear system
// xdot = ybar, ydot = xbar, solved in closed form. It serves as an analytic
// oracle for the convergence methodology.

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace braneflow {

struct SurfacePoint {
    std::complex<double> x{0.0, 0.0};
    std::complex<double> y{0.0, 0.0};

    std::complex<double> w() const { return x * y; }

    /// Distance proxy to the unstable locus {y = conj(x)}.
    double unstable_residual() const { return std::abs(y - std::conj(x)); }
    /// Distance proxy to the stable locus {y = -conj(x)}.
    double stable_residual() const { return std::abs(y + std::conj(x)); }
};

/// Closed-form flow of xdot = ybar, ydot = xbar:
/// x(t) = x0 cosh t + conj(y0) sinh t, y(t) = y0 cosh t + conj(x0) sinh t.
inline SurfacePoint ss_flow(const SurfacePoint& p, double t) {
    const double ch = std::cosh(t), sh = std::sinh(t);
    return {p.x * ch + std::conj(p.y) * sh, p.y * ch + std::conj(p.x) * sh};
}

/// The vanishing cycle point (sqrt(eps) e^{is}, sqrt(eps) e^{-is}) evolved by
/// the flow; it stays on the unstable locus with w = eps e^{2t} real positive.
inline SurfacePoint ss_vanishing_cycle(double eps, double s, double t) {
    if (!(eps > 0.0))
        throw std::domain_error("ss_vanishing_cycle: requires eps > 0");
    const double rho = std::sqrt(eps);
    return ss_flow({std::polar(rho, s), std::polar(rho, -s)}, t);
}

/// The cloud model of the T-brane analogue: fiber rays over the vertical base
/// line through w_star < 0, {(x, y) : y in y_samples, x = (w_star + i v)/y}.
inline std::vector<SurfacePoint> ss_make_U(double w_star, const std::vector<double>& v_samples,
                                           const std::vector<double>& y_samples) {
    if (!(w_star < 0.0))
        throw std::invalid_argument("ss_make_U: requires w_star < 0");
    std::vector<SurfacePoint> cloud;
    for (double y : y_samples) {
        if (!(y > 0.0))
            throw std::invalid_argument("ss_make_U: fiber samples must be positive");
        for (double v : v_samples)
            cloud.push_back({std::complex<double>(w_star, v) / y, {y, 0.0}});
    }
    return cloud;
}

/// Intersection of the U cloud surface with the stable locus {y = -conj(x)},
/// located by Newton iteration over (v, y). (The solved point is
/// (x, y) = (-sqrt(|w*|), sqrt(|w*|)) at v = 0.)
inline SurfacePoint ss_stable_intersection(double w_star) {
    if (!(w_star < 0.0))
        throw std::invalid_argument("ss_stable_intersection: requires w_star < 0");
    double v = 0.1, y = 1.0;
    for (int it = 0; it < 100; ++it) {
        // residual g = y + conj(x) = y + (w_star - i v)/y
        const double g_re = y + w_star / y;
        const double g_im = -v / y;
        if (std::hypot(g_re, g_im) < 1e-14) break;
        // Jacobian of (g_re, g_im) in (v, y)
        const double a11 = 0.0, a12 = 1.0 - w_star / (y * y);
        const double a21 = -1.0 / y, a22 = v / (y * y);
        const double det = a11 * a22 - a12 * a21;
        if (det == 0.0)
            throw std::runtime_error("ss_stable_intersection: singular Jacobian");
        v -= (g_re * a22 - g_im * a12) / det;
        y -= (g_im * a11 - g_re * a21) / det;
    }
    return {std::complex<double>(w_star, v) / y, {y, 0.0}};
}

struct SsReportRow {
    double t = 0.0;
    std::optional<double> max_residual;  // max |y - conj(x)| in window; empty if none
    int n_points_in_window = 0;
    double im_w_drift = 0.0;  // max |Im w(t) - Im w(0)| over the whole cloud
};

struct SsReport {
    std::vector<SsReportRow> rows;
    SurfacePoint stable_intersection;
};

/// Evolve the U cloud, restrict to Re(w) in window with |Im(w)| <= margin,
/// and report the residual distance to the thimble {y = conj(x)} per time.
inline SsReport ss_convergence(double w_star, const std::vector<double>& v_samples,
                               const std::vector<double>& y_samples,
                               double window_lo, double window_hi, double margin,
                               const std::vector<double>& times) {
    if (!(window_lo > 0.0 && window_hi > window_lo))
        throw std::invalid_argument("ss_convergence: window must lie on the positive axis");
    const auto cloud = ss_make_U(w_star, v_samples, y_samples);
    SsReport report;
    report.stable_intersection = ss_stable_intersection(w_star);
    for (double t : times) {
        SsReportRow row;
        row.t = t;
        double worst = 0.0;
        int n = 0;
        for (const auto& p0 : cloud) {
            const SurfacePoint p = ss_flow(p0, t);
            row.im_w_drift =
                std::max(row.im_w_drift, std::fabs(p.w().imag() - p0.w().imag()));
            const std::complex<double> w = p.w();
            if (w.real() < window_lo || w.real() > window_hi || std::fabs(w.imag()) > margin)
                continue;
            ++n;
            worst = std::max(worst, p.unstable_residual());
        }
        row.n_points_in_window = n;
        if (n > 0) row.max_residual = worst;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace braneflow
