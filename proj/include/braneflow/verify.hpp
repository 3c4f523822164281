#pragma once

// The runnable invariant suite behind `braneflow verify`: every module-level
// invariant as a named pass/fail check with its measured value and threshold.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "braneflow/branes.hpp"
#include "braneflow/coords.hpp"
#include "braneflow/dawson.hpp"
#include "braneflow/flow.hpp"
#include "braneflow/hamiltonian.hpp"
#include "braneflow/ss_model.hpp"

namespace braneflow {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // the measured quantity
    double threshold = 0.0;  // what it was compared against
    bool want_below = true;  // false for negative controls that must exceed
};

struct VerifyOptions {
    double perturb_f = 0.0;  // forwarded into the paper spec; a negative-control knob
};

namespace detail {

struct CheckList {
    std::vector<CheckResult> results;
    void below(const std::string& name, double value, double threshold) {
        results.push_back({name, value <= threshold, value, threshold, true});
    }
    void above(const std::string& name, double value, double threshold) {
        results.push_back({name, value > threshold, value, threshold, false});
    }
};

}  // namespace detail

inline std::vector<CheckResult> run_verification(const VerifyOptions& opt = {}) {
    detail::CheckList checks;
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    HamiltonianSpec spec = HamiltonianSpec::paper();
    spec.f_perturbation = opt.perturb_f;

    const auto random_point = [&] {
        return PhasePoint(uni(-2, 2), uni(-2, 2), uni(-3, 0), uni(-pi, pi));
    };
    const auto random_tangent = [&] {
        return TangentVector{uni(-1, 1), uni(-1, 1), uni(-1, 1), uni(-1, 1)};
    };

    // ---- coords ----
    {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const PhasePoint p(uni(-5, 5), uni(-5, 5), uni(-10, -1e-3), uni(-pi, pi));
            const auto [w, y] = to_complex(p);
            const PhasePoint q = from_complex(w, y);
            worst = std::max({worst, std::fabs(q.u - p.u), std::fabs(q.v - p.v),
                              std::fabs(q.r - p.r), circular_distance(q.theta, p.theta)});
        }
        checks.below("coords.chart_round_trip", worst, 1e-12);
    }
    {
        double worst = 0.0, worst_cx = 0.0;
        for (int i = 0; i < 100; ++i) {
            const PhasePoint p(uni(-2, 2), uni(-2, 2), uni(-3, -1e-2), uni(-pi, pi));
            const TangentVector A = random_tangent(), B = random_tangent();
            const SymplecticForm omega;
            worst = std::max(worst, std::fabs(omega.eval(p, A, B) + omega.eval(p, B, A)));
            worst_cx = std::max(worst_cx,
                                std::fabs(omega.eval(p, A, B) - omega.eval_complex(p, A, B)));
        }
        checks.below("coords.omega_antisymmetry", worst, 0.0);
        checks.below("coords.omega_chart_agreement", worst_cx, 1e-10);
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double Theta = uni(-3 * pi, 3 * pi);
            worst = std::max(worst,
                             circular_distance(stop_angle(Theta + 2 * pi), stop_angle(Theta)));
        }
        checks.below("coords.stop_angle_wrap_invariance", worst, 0.0);
    }

    // ---- dawson ----
    {
        double worst = 0.0;
        const double h = 1e-5;
        for (double R = h; R <= 10.0; R += 0.173) {
            const double fd = (dawson(R + h) - dawson(R - h)) / (2 * h);
            worst = std::max(worst, std::fabs(fd - (1.0 - 2.0 * R * dawson(R))));
        }
        checks.below("dawson.derivative_identity", worst, 1e-9);
        checks.below("dawson.asymptotic_tail", std::fabs(2.0 * 10.0 * dawson(10.0) - 1.0), 6e-3);
    }

    // ---- hamiltonian ----
    {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const PhasePoint p = random_point();
            const double hp = detail::h_polar(spec, p.R(), p.Theta(), p.r);
            const double hc = detail::h_cartesian(spec, p.u, p.v, p.r);
            const double hz = detail::h_complex(spec, p.w(), -1.0 / p.r);
            worst = std::max({worst, std::fabs(hp - hc), std::fabs(hz - hc)});
        }
        checks.below("hamiltonian.three_presentations", worst, 1e-12);
    }
    {
        double worst = 0.0;
        for (double R : {1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
            worst = std::max(worst, std::fabs(ode_residual(spec, R)));
        checks.below("hamiltonian.ode_residual", worst, 1e-8);
    }
    {
        double worst = 0.0;
        for (double R : {0.1, 1.0, 3.0})
            for (double Theta : {pi / 4, pi / 2, 3 * pi / 4})
                worst = std::max(worst, std::fabs(rotation_condition_residual(spec, R, Theta)));
        checks.below("hamiltonian.rotation_condition", worst, 1e-9);
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            PhasePoint p = random_point();
            if (p.R() <= 1e-3) continue;
            const TangentVector X = X_H_closed(spec, p);
            const TangentVector Y = X_H_from_omega(spec, p);
            const double scale = std::max({1e-8, std::fabs(X.du), std::fabs(X.dv),
                                           std::fabs(X.dtheta)});
            worst = std::max({worst, std::fabs(X.du - Y.du) / scale,
                              std::fabs(X.dv - Y.dv) / scale,
                              std::fabs(X.dr - Y.dr) / scale,
                              std::fabs(X.dtheta - Y.dtheta) / scale});
        }
        checks.below("hamiltonian.closed_form_vs_omega_dual", worst, 1e-6);
    }
    {
        double worst_ratio = 0.0;
        for (double eps : {1e-6, 1e-4, 1e-2})
            for (double r : {0.0, -1.0, -5.0}) {
                const TangentVector X = X_H_closed(spec, PhasePoint(eps, 0.0, r, 0.0));
                const double dev = std::hypot(X.du - (1.0 - std::exp(r)), X.dv);
                worst_ratio = std::max(worst_ratio, dev / (10.0 * eps));
            }
        checks.below("hamiltonian.origin_limit", worst_ratio, 1.0);
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const PhasePoint p = random_point();
            const PhasePoint q(p.u, -p.v, p.r, -p.theta);
            worst = std::max(worst, std::fabs(H_value(spec, q) + H_value(spec, p)));
            const TangentVector X = X_H_closed(spec, p), Y = X_H_closed(spec, q);
            worst = std::max({worst, std::fabs(Y.du - X.du), std::fabs(Y.dv + X.dv),
                              std::fabs(Y.dtheta + X.dtheta)});
        }
        checks.below("hamiltonian.odd_symmetry", worst, 1e-12);
    }
    {
        // d(theta + Theta)/dt along the stop locus
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double R = uni(1e-3, 3.0), Theta = uni(-pi, pi);
            const PhasePoint p(R * std::cos(Theta), R * std::sin(Theta), 0.0, -Theta);
            const TangentVector X = X_H_closed(spec, p);
            const auto [dR, dTheta] = X.polar_base(p);
            worst = std::max(worst, std::fabs(X.dtheta + dTheta));
        }
        checks.below("hamiltonian.stop_compatibility", worst, 1e-10);
    }
    checks.below("hamiltonian.profile_vanishes_at_origin",
                 std::fabs(radial_profile(spec, 1e-8)), 1e-12);

    // ---- flow ----
    {
        IntegratorConfig cfg;
        cfg.t_end = 10.0;
        double H_drift = 0.0, r_drift = 0.0, mirror = 0.0;
        for (int i = 0; i < 5; ++i) {
            const PhasePoint p = random_point();
            const Trajectory traj = integrate(spec, p, cfg);
            H_drift = std::max(H_drift, traj.stats.H_drift);
            r_drift = std::max(r_drift, traj.stats.r_drift);
            const PhasePoint m(p.u, -p.v, p.r, -p.theta);
            const Trajectory mt = integrate(spec, m, cfg);
            const PhasePoint a = traj.samples.back().p, b = mt.samples.back().p;
            mirror = std::max({mirror, std::fabs(a.u - b.u), std::fabs(a.v + b.v),
                               std::fabs(a.r - b.r), circular_distance(-a.theta, b.theta)});
        }
        checks.below("flow.H_drift", H_drift, 1e-8);
        checks.below("flow.r_conservation", r_drift, 1e-13);
        checks.below("flow.mirror_equivariance", mirror, 1e-8);
    }
    {
        const PhasePoint p(-1.0, 0.5, -0.5, 0.0);
        double last = -1.0;
        int violations = 0;
        for (double tol : {1e-6, 1e-9, 1e-12}) {
            IntegratorConfig cfg;
            cfg.rel_tol = cfg.abs_tol = tol;
            const double drift = integrate(spec, p, cfg).stats.H_drift;
            if (last >= 0.0 && drift > last) ++violations;
            last = drift;
        }
        checks.below("flow.tolerance_ladder_monotone", violations, 0.0);
    }
    {
        IntegratorConfig cfg;
        cfg.t_end = 7.3;
        cfg.snapshot_times = {3.7, 7.3};
        const PhasePoint p(-1.0, 0.4, -0.2, 0.0);
        const Trajectory traj = integrate(spec, p, cfg);
        IntegratorConfig cfg2 = cfg;
        cfg2.t_end = 3.7;
        cfg2.snapshot_times = {3.7};
        const PhasePoint a = traj.samples.front().p;
        const PhasePoint b = integrate(spec, p, cfg2).samples.front().p;
        const double dev = std::max({std::fabs(a.u - b.u), std::fabs(a.v - b.v),
                                     circular_distance(a.theta, b.theta)});
        checks.below("flow.dense_output_consistency", dev, 10.0 * cfg.rel_tol);
        checks.below("flow.stop_preservation", stop_preservation_check(spec, pi / 2, 1.0, 10.0),
                     1e-6);
        checks.above("flow.stop_preservation_negative_control",
                     stop_preservation_check(HamiltonianSpec::model_Rv(), pi / 2, 1.0, 10.0),
                     0.1);
    }

    // ---- branes ----
    {
        const BraneCloud U = make_U(1.0, {-1.0, 0.0, 1.0}, {-2.0, -1.0, 0.0});
        double worst = 0.0;
        const TangentVector dv_{0, 1, 0, 0}, dr_{0, 0, 1, 0};
        for (const auto& p : U.points)
            worst = std::max(worst, std::fabs(omega_eval(p, dv_, dr_)));
        checks.below("branes.U_is_lagrangian", worst, 0.0);

        const BraneCloud arcs = seed_semicircles(1.0, {0.5, 0.25}, 17);
        double norm_dev = 0.0;
        for (std::size_t i = 0; i < arcs.size(); ++i)
            norm_dev = std::max(norm_dev, std::fabs(std::hypot(arcs.points[i].v,
                                                               arcs.points[i].r) -
                                                    *arcs.labels[i].eps));
        checks.below("branes.seed_norms", norm_dev, 1e-14);

        IntegratorConfig cfg;
        cfg.snapshot_times = {1.0, 3.0};
        cfg.t_end = 3.0;
        const auto snaps = evolve_cloud(spec, arcs, cfg);
        double r_dev = 0.0, mirror = 0.0;
        for (const auto& s : snaps)
            for (std::size_t i = 0; i < s.cloud.size(); ++i) {
                r_dev = std::max(r_dev, std::fabs(s.cloud.points[i].r - arcs.labels[i].r0));
                // mirror partner of arc angle alpha is pi - alpha (v0 -> -v0)
                const std::size_t j = (i / 17) * 17 + (16 - i % 17);
                mirror = std::max({mirror,
                                   std::fabs(s.cloud.points[i].v + s.cloud.points[j].v),
                                   std::fabs(s.theta_lift[i] + s.theta_lift[j])});
            }
        checks.below("branes.cloud_r_conservation", r_dev, 1e-12);
        checks.below("branes.cloud_mirror_symmetry", mirror, 1e-8);

        std::vector<double> th;
        for (int i = 0; i < 9; ++i) th.push_back(wrap_angle(0.3 + i * i * 0.11));
        const double g0 = braneflow::detail::largest_circular_gap(th);
        for (auto& t : th) t = wrap_angle(t + 2.0);
        checks.below("branes.theta_gap_rotation_invariance",
                     std::fabs(braneflow::detail::largest_circular_gap(th) - g0), 1e-12);
    }
    {
        // small-scale version of the convergence scenario: offsets shrink
        const ConvergenceReport rep = convergence_run(
            spec, 1.0, eps_ladder(1.0, 6), 17, {0.5, 1.5}, {4.0, 8.0});
        const bool defined = rep.offset[0].has_value() && rep.offset[1].has_value();
        checks.below("branes.offset_decreasing",
                     defined ? (*rep.offset[1] < *rep.offset[0] ? 0.0 : 1.0) : 1.0, 0.0);
    }

    // ---- ss_model ----
    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const SurfacePoint p{{uni(-2, 2), uni(-2, 2)}, {uni(-2, 2), uni(-2, 2)}};
            const double s = uni(-1, 1), t = uni(-1, 1);
            const SurfacePoint ab = ss_flow(ss_flow(p, s), t);
            const SurfacePoint c = ss_flow(p, s + t);
            worst = std::max({worst, std::abs(ab.x - c.x), std::abs(ab.y - c.y)});
        }
        checks.below("ss.group_law", worst, 1e-10);

        double drift = 0.0, mono = 0.0, loci = 0.0, fd = 0.0;
        for (int i = 0; i < 100; ++i) {
            const SurfacePoint p{{uni(-2, 2), uni(-2, 2)}, {uni(-2, 2), uni(-2, 2)}};
            const double t = uni(0, 3);
            const SurfacePoint q = ss_flow(p, t);
            drift = std::max(drift, std::fabs(q.w().imag() - p.w().imag()));
            const SurfacePoint q2 = ss_flow(p, t + 0.1);
            mono = std::max(mono, q.w().real() - q2.w().real());

            // both loci are invariant
            const SurfacePoint up{p.x, std::conj(p.x)}, sp{p.x, -std::conj(p.x)};
            loci = std::max({loci, ss_flow(up, t).unstable_residual(),
                             ss_flow(sp, t).stable_residual()});  // 0 in exact arithmetic

            const double dt = 1e-5;
            const SurfacePoint fwd = ss_flow(p, t + dt), bwd = ss_flow(p, t - dt);
            fd = std::max({fd, std::abs((fwd.x - bwd.x) / (2 * dt) - std::conj(q.y)),
                           std::abs((fwd.y - bwd.y) / (2 * dt) - std::conj(q.x))});
        }
        checks.below("ss.im_w_conserved", drift, 1e-12);
        checks.below("ss.re_w_monotone", mono, 0.0);
        checks.below("ss.loci_invariance", loci, 1e-12);
        checks.below("ss.flow_derivative", fd, 1e-8);

        const SurfacePoint vc = ss_vanishing_cycle(0.5, 1.3, 3.0);
        checks.below("ss.vanishing_cycle_locus", vc.unstable_residual(), 1e-12);
    }

    return checks.results;
}

}  // namespace braneflow
