#pragma once

// The Hamiltonian family driving the brane flow: profile functions a(r), b(r),
// the solved radial profile f(R) R, the closed-form H in three coordinate
// presentations, and the closed-form Hamiltonian vector field with a
// finite-difference omega-dual as an independent cross-check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>

#include "braneflow/coords.hpp"
#include "braneflow/dawson.hpp"

namespace braneflow {

enum class HamiltonianKind { paper, model_Rv, model_v };

struct HamiltonianSpec {
    HamiltonianKind kind = HamiltonianKind::paper;
    std::function<double(double)> a;  // a(0) = 1, a(-inf) = 0
    std::function<double(double)> b;  // b(0) = 0, b(-inf) = 1
    double a_prime0 = 2.0;            // > 0
    double b_prime0 = -1.0;           // < 0
    double C = 0.0;                   // integration constant, fixed 0
    double f_perturbation = 0.0;      // adds f_perturbation * R to f(R); negative-control knob

    static HamiltonianSpec paper() {
        HamiltonianSpec s;
        s.kind = HamiltonianKind::paper;
        s.a = [](double r) { return std::exp(2.0 * r); };
        s.b = [](double r) { return 1.0 - std::exp(r); };
        s.a_prime0 = 2.0;
        s.b_prime0 = -1.0;
        return s;
    }
    static HamiltonianSpec model_Rv() {
        HamiltonianSpec s = paper();
        s.kind = HamiltonianKind::model_Rv;
        return s;
    }
    static HamiltonianSpec model_v() {
        HamiltonianSpec s = paper();
        s.kind = HamiltonianKind::model_v;
        return s;
    }

    /// Worst deviation of the profiles from their boundary conditions.
    double profile_boundary_error() const {
        return std::max({std::fabs(a(0.0) - 1.0), std::fabs(b(0.0)),
                         std::fabs(a(-20.0)), std::fabs(b(-20.0) - 1.0)});
    }
};

/// f(R) R solving f' + (1/R + a'(0) R) f + b'(0) R = 0 with C = 0; reduces to
/// (b'(0)/a'(0)) (F(s)/s - 1) R with s = sqrt(a'(0)/2) R, which for the paper
/// defaults is (R - F(R))/2.
inline double radial_profile(const HamiltonianSpec& spec, double R) {
    if (!(spec.a_prime0 > 0.0))
        throw std::domain_error("radial_profile: requires a'(0) > 0");
    if (!(R >= 0.0))
        throw std::domain_error("radial_profile: requires R >= 0");
    const double s = std::sqrt(0.5 * spec.a_prime0) * R;
    double fR = (spec.b_prime0 / spec.a_prime0) * dawson_over_x_minus_1(s) * R;
    fR += spec.f_perturbation * R * R;
    return fR;
}

/// f(R), i.e. radial_profile / R, extended by 0 at R = 0.
inline double radial_profile_over_R(const HamiltonianSpec& spec, double R) {
    if (!(spec.a_prime0 > 0.0))
        throw std::domain_error("radial_profile_over_R: requires a'(0) > 0");
    const double s = std::sqrt(0.5 * spec.a_prime0) * R;
    return (spec.b_prime0 / spec.a_prime0) * dawson_over_x_minus_1(s) + spec.f_perturbation * R;
}

/// d/dR of f(R) R, by the analytic formula -2 (b'(0)/a'(0)) s F(s).
inline double radial_profile_derivative(const HamiltonianSpec& spec, double R) {
    const double s = std::sqrt(0.5 * spec.a_prime0) * R;
    return -2.0 * (spec.b_prime0 / spec.a_prime0) * s * dawson(s) +
           2.0 * spec.f_perturbation * R;
}

/// Residual of the construction ODE f' + (1/R + a'(0) R) f + b'(0) R at R > 0.
inline double ode_residual(const HamiltonianSpec& spec, double R) {
    const double f = radial_profile_over_R(spec, R);
    const double fprime = (radial_profile_derivative(spec, R) - f) / R;
    return fprime + (1.0 / R + spec.a_prime0 * R) * f + spec.b_prime0 * R;
}

namespace detail {

// H in the polar presentation (a(r) f(R) R + b(r) R) sin(Theta).
inline double h_polar(const HamiltonianSpec& spec, double R, double Theta, double r) {
    return (spec.a(r) * radial_profile(spec, R) + spec.b(r) * R) * std::sin(Theta);
}

// H in the Cartesian presentation (a(r) f(R) + b(r)) v.
inline double h_cartesian(const HamiltonianSpec& spec, double u, double v, double r) {
    const double R = std::hypot(u, v);
    return (spec.a(r) * radial_profile_over_R(spec, R) + spec.b(r)) * v;
}

// H in the complex presentation, a function of (w, |y|) with r = -1/|y|;
// |y| = inf is the boundary stratum r = 0.
inline double h_complex(const HamiltonianSpec& spec, std::complex<double> w, double abs_y) {
    const double r = -1.0 / abs_y;
    const double R = std::abs(w);
    return (spec.a(r) * radial_profile_over_R(spec, R) + spec.b(r)) * w.imag();
}

// Raw Cartesian H for any real r (formulas extend smoothly past r = 0);
// used by the finite-difference oracle.
inline double h_raw(const HamiltonianSpec& spec, double u, double v, double r, double /*theta*/) {
    switch (spec.kind) {
        case HamiltonianKind::model_Rv: return std::hypot(u, v) * v;
        case HamiltonianKind::model_v: return v;
        case HamiltonianKind::paper: return h_cartesian(spec, u, v, r);
    }
    throw std::logic_error("h_raw: unknown kind");
}

}  // namespace detail

/// Hamiltonian value at a phase point. For kind = paper the polar, Cartesian
/// and complex presentations are all evaluated and must agree to 1e-12.
inline double H_value(const HamiltonianSpec& spec, const PhasePoint& p) {
    switch (spec.kind) {
        case HamiltonianKind::model_Rv: return p.R() * p.v;
        case HamiltonianKind::model_v: return p.v;
        case HamiltonianKind::paper: break;
    }
    const double hp = detail::h_polar(spec, p.R(), p.Theta(), p.r);
    const double hc = detail::h_cartesian(spec, p.u, p.v, p.r);
    const double abs_y = p.r == 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / p.r;
    const double hz = detail::h_complex(spec, p.w(), abs_y);
    const double tol = 1e-12 * std::max(1.0, std::fabs(hc));
    if (std::fabs(hp - hc) > tol || std::fabs(hz - hc) > tol)
        throw std::logic_error("H_value: coordinate presentations disagree");
    return hc;
}

/// The paper's closed-form Hamiltonian vector field (kind = paper only).
/// dr is identically 0; the field extends smoothly to R = 0 with limit
/// (1 - e^r) d/du.
inline TangentVector X_H_closed(const HamiltonianSpec& spec, const PhasePoint& p) {
    if (spec.kind != HamiltonianKind::paper)
        throw std::invalid_argument("X_H_closed: closed form is for kind = paper");
    const double E1 = std::exp(p.r);
    const double E2 = std::exp(2.0 * p.r);
    const double R = p.R();
    if (R < 1e-12)
        return {1.0 - E1, 0.0, 0.0, 0.0};
    const double q = dawson_over_x_minus_1(R);     // F(R)/R - 1
    const double F = dawson(R);
    const double g = 1.0 - E1 - 0.5 * E2 * q;      // dH/dv at v = 0 direction
    const double gR_over_R = 0.5 * E2 * (2.0 * F / R + q / (R * R));
    TangentVector X;
    X.du = g + p.v * p.v * gR_over_R;
    X.dv = -p.u * p.v * gR_over_R;
    X.dr = 0.0;
    X.dtheta = (E1 + E2 * q) * p.v;
    return X;
}

/// The field actually integrated; dispatches the closed forms per kind.
inline TangentVector hamiltonian_vector_field(const HamiltonianSpec& spec, const PhasePoint& p) {
    switch (spec.kind) {
        case HamiltonianKind::paper:
            return X_H_closed(spec, p);
        case HamiltonianKind::model_v:
            return {1.0, 0.0, 0.0, 0.0};
        case HamiltonianKind::model_Rv: {
            const double R = p.R();
            if (R == 0.0) return {0.0, 0.0, 0.0, 0.0};
            return {R + p.v * p.v / R, -p.u * p.v / R, 0.0, 0.0};
        }
    }
    throw std::logic_error("hamiltonian_vector_field: unknown kind");
}

/// Independent oracle: the omega-dual of the central finite-difference
/// differential of H, step h. With omega = du^dv + dr^dtheta this is
/// (H_v, -H_u, H_theta, -H_r).
inline TangentVector X_H_from_omega(const HamiltonianSpec& spec, const PhasePoint& p,
                                    double h = 1e-6) {
    if (!(h > 0.0))
        throw std::domain_error("X_H_from_omega: requires h > 0");
    const auto H = [&](double u, double v, double r, double theta) {
        return detail::h_raw(spec, u, v, r, theta);
    };
    const double Hu = (H(p.u + h, p.v, p.r, p.theta) - H(p.u - h, p.v, p.r, p.theta)) / (2 * h);
    const double Hv = (H(p.u, p.v + h, p.r, p.theta) - H(p.u, p.v - h, p.r, p.theta)) / (2 * h);
    const double Hr = (H(p.u, p.v, p.r + h, p.theta) - H(p.u, p.v, p.r - h, p.theta)) / (2 * h);
    const double Ht = (H(p.u, p.v, p.r, p.theta + h) - H(p.u, p.v, p.r, p.theta - h)) / (2 * h);
    return {Hv, -Hu, Ht, -Hr};
}

/// Left side of the stop-rotation condition (1/R) dH/dR + dH/dr at r = 0.
inline double rotation_condition_residual(const HamiltonianSpec& spec, double R, double Theta) {
    if (!(R > 0.0))
        throw std::domain_error("rotation_condition_residual: requires R > 0");
    const double s = std::sin(Theta);
    switch (spec.kind) {
        case HamiltonianKind::model_Rv: return 2.0 * s;
        case HamiltonianKind::model_v: return s / R;
        case HamiltonianKind::paper: break;
    }
    const double fR = radial_profile(spec, R);
    const double dfR = radial_profile_derivative(spec, R);
    const double dH_dR = (spec.a(0.0) * dfR + spec.b(0.0)) * s;
    const double dH_dr = (spec.a_prime0 * fR + spec.b_prime0 * R) * s;
    return dH_dR / R + dH_dr;
}

}  // namespace braneflow
