#pragma once

// Coordinate charts on the local model C_w x C^x_y near a puncture:
// real coordinates (u, v, r, theta) with w = u + i v and y = -e^{i theta}/r,
// the symplectic form, the superpotential W = w y, and the stop locus.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace braneflow {

inline constexpr double pi = std::numbers::pi;

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    double x = std::remainder(a, 2.0 * pi);  // [-pi, pi]
    if (x <= -pi) x = pi;
    return x;
}

/// Chord distance 2 sin(|dtheta|/2) between two angles.
inline double circular_distance(double a, double b) {
    return 2.0 * std::sin(0.5 * std::fabs(wrap_angle(a - b)));
}

/// Raised when a fiber quantity is requested on the boundary stratum r = 0,
/// where y is an ideal point of the cylinder.
struct BoundaryStratumError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A point of the 4-dimensional phase space. The fiber height r lies in
/// (-inf, 0]; r = 0 is the boundary stratum carrying the stops.
struct PhasePoint {
    double u = 0.0;
    double v = 0.0;
    double r = -1.0;
    double theta = 0.0;  // always wrapped to (-pi, pi]

    PhasePoint() = default;
    PhasePoint(double u_, double v_, double r_, double theta_)
        : u(u_), v(v_), r(r_), theta(wrap_angle(theta_)) {
        if (!(std::isfinite(u) && std::isfinite(v) && std::isfinite(r) && std::isfinite(theta)))
            throw std::invalid_argument("PhasePoint: nonfinite coordinate");
        if (r > 0.0)
            throw std::invalid_argument("PhasePoint: r = " + std::to_string(r) + " > 0");
    }

    bool on_boundary() const { return r == 0.0; }

    double R() const { return std::hypot(u, v); }
    double Theta() const { return std::atan2(v, u); }

    std::complex<double> w() const { return {u, v}; }

    /// Fiber coordinate y = -e^{i theta}/r; undefined on the boundary stratum.
    std::complex<double> y() const {
        if (r == 0.0)
            throw BoundaryStratumError("y is an ideal point at r = 0");
        return -std::polar(1.0, theta) / r;
    }
};

/// A tangent vector at a PhasePoint, components in the Cartesian-base chart.
struct TangentVector {
    double du = 0.0;
    double dv = 0.0;
    double dr = 0.0;
    double dtheta = 0.0;

    /// Polar-base components (dR, dTheta); requires R > 0 at the base point.
    std::pair<double, double> polar_base(const PhasePoint& p) const {
        const double R = p.R();
        if (R == 0.0)
            throw std::domain_error("polar tangent components undefined at R = 0");
        return {(p.u * du + p.v * dv) / R, (p.u * dv - p.v * du) / (R * R)};
    }
};

inline std::pair<std::complex<double>, std::complex<double>> to_complex(const PhasePoint& p) {
    return {p.w(), p.y()};
}

inline PhasePoint from_complex(std::complex<double> w, std::complex<double> y) {
    const double ay = std::abs(y);
    if (ay == 0.0 || !std::isfinite(ay))
        throw std::invalid_argument("from_complex: y must lie in C^x");
    const double r = -1.0 / ay;
    // theta = arg(-y r) = arg(y / |y|)
    const double theta = std::arg(y);
    return {w.real(), w.imag(), r, theta};
}

/// The fixed symplectic form du^dv + dr^dtheta, with the complex-chart
/// presentation (i/2)(dw^dwbar + |y|^{-3} dy^dybar) as a cross-check route.
struct SymplecticForm {
    /// Pairing in the real-coordinate chart.
    double eval(const PhasePoint&, const TangentVector& A, const TangentVector& B) const {
        return (A.du * B.dv - A.dv * B.du) + (A.dr * B.dtheta - A.dtheta * B.dr);
    }

    /// Pairing evaluated through the complex chart maps; requires r < 0.
    double eval_complex(const PhasePoint& p, const TangentVector& A, const TangentVector& B) const {
        if (p.r >= 0.0)
            throw BoundaryStratumError("complex-chart evaluation requires r < 0");
        const auto dw = [](const TangentVector& t) {
            return std::complex<double>(t.du, t.dv);
        };
        // y = -e^{i theta}/r: dy = e^{i theta} (dr / r^2 - i dtheta / r)
        const std::complex<double> phase = std::polar(1.0, p.theta);
        const auto dy = [&](const TangentVector& t) {
            return phase * std::complex<double>(t.dr / (p.r * p.r), 0.0) -
                   phase * std::complex<double>(0.0, t.dtheta / p.r);
        };
        const double ay3 = 1.0 / (-p.r * -p.r * -p.r);  // |y|^3, |y| = -1/r
        const double base = -std::imag(dw(A) * std::conj(dw(B)));
        const double fiber = -std::imag(dy(A) * std::conj(dy(B))) / ay3;
        return base + fiber;
    }
};

inline double omega_eval(const PhasePoint& p, const TangentVector& A, const TangentVector& B) {
    return SymplecticForm{}.eval(p, A, B);
}

/// Local superpotential W = w y (local model near a puncture, a = 0).
inline std::complex<double> superpotential(const PhasePoint& p) {
    return p.w() * p.y();
}

/// Fiber angle of the stop over a base point with angle Theta; the stop
/// locus is {r = 0, theta = -Theta}. Undefined over the puncture R = 0.
inline double stop_angle(double Theta) {
    return wrap_angle(-Theta);
}

}  // namespace braneflow
