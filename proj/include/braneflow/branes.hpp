#pragma once

// Point-cloud models of the Lagrangians: the flat local model of the
// mapping-cone brane U, the semicircle seeds, cloud evolution under the flow,
// and the window metrics (offset, fiber-angle coverage gap, Hausdorff
// distance to the limit brane J).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "braneflow/coords.hpp"
#include "braneflow/flow.hpp"
#include "braneflow/hamiltonian.hpp"

namespace braneflow {

enum class BraneId { U, seedArcs, custom };

struct PointLabel {
    double v0 = 0.0;
    double r0 = 0.0;
    std::optional<double> arc_angle;  // semicircle parameter in [0, pi]
    std::optional<double> eps;        // semicircle radius
};

struct BraneCloud {
    BraneId id = BraneId::custom;
    std::vector<PhasePoint> points;
    std::vector<PointLabel> labels;

    std::size_t size() const { return points.size(); }
};

/// The flat local model of U: the product cloud {(-u*, v, r, 0)}.
inline BraneCloud make_U(double u_star, const std::vector<double>& v_samples,
                         const std::vector<double>& r_samples) {
    if (!(u_star > 0.0))
        throw std::invalid_argument("make_U: requires u_star > 0");
    BraneCloud cloud;
    cloud.id = BraneId::U;
    for (double r : r_samples) {
        if (r > 0.0)
            throw std::invalid_argument("make_U: r sample > 0");
        for (double v : v_samples) {
            cloud.points.emplace_back(-u_star, v, r, 0.0);
            cloud.labels.push_back({v, r, std::nullopt, std::nullopt});
        }
    }
    return cloud;
}

/// Semicircle seeds around (-u*, 0, 0, 0): for each eps, n_per_arc points on
/// the half-circle v^2 + r^2 = eps^2, r <= 0, uniform in arc angle alpha in
/// [0, pi]. alpha = 0, pi are the top points (r = 0, v = +-eps); alpha = pi/2
/// is the axis point (v = 0, r = -eps).
inline BraneCloud seed_semicircles(double u_star, const std::vector<double>& eps_list,
                                   int n_per_arc) {
    if (n_per_arc < 3)
        throw std::invalid_argument("seed_semicircles: requires n_per_arc >= 3");
    BraneCloud cloud;
    cloud.id = BraneId::seedArcs;
    for (double eps : eps_list) {
        if (!(eps > 0.0))
            throw std::invalid_argument("seed_semicircles: requires eps > 0");
        for (int i = 0; i < n_per_arc; ++i) {
            const double alpha = pi * i / (n_per_arc - 1);
            // endpoints sit exactly on the boundary stratum r = 0
            const bool end = (i == 0 || i == n_per_arc - 1);
            const double v = end ? (i == 0 ? eps : -eps) : eps * std::cos(alpha);
            const double r = end ? 0.0 : -eps * std::sin(alpha);
            cloud.points.emplace_back(-u_star, v, r, 0.0);
            cloud.labels.push_back({v, r, alpha, eps});
        }
    }
    return cloud;
}

/// The limit brane J restricted to a window: {v = 0, r = 0, u in [u_min,
/// u_max], theta in (-pi, pi]} discretized by n_u base samples times m fiber
/// angles.
struct TargetBrane {
    double u_min = 0.5;
    double u_max = 1.5;
    int m = 64;    // theta samples per u sample
    int n_u = 33;  // u samples

    std::vector<PhasePoint> discretize() const {
        if (!(u_min >= 0.0) || !(u_max > u_min) || m < 2 || n_u < 2)
            throw std::invalid_argument("TargetBrane: invalid discretization");
        std::vector<PhasePoint> pts;
        pts.reserve(static_cast<std::size_t>(m) * n_u);
        for (int i = 0; i < n_u; ++i) {
            const double u = u_min + (u_max - u_min) * i / (n_u - 1);
            for (int j = 0; j < m; ++j)
                pts.emplace_back(u, 0.0, 0.0, -pi + 2.0 * pi * (j + 1) / m);
        }
        return pts;
    }
};

struct CloudSnapshot {
    double t = 0.0;
    BraneCloud cloud;
    std::vector<double> theta_lift;  // per point
    std::vector<double> H;           // per point, at this time
    std::vector<char> ok;            // 0 = integration failed, excluded from metrics
};

/// Evolve every cloud point independently to the given snapshot times.
/// Per-point integrator failures are recorded, not fatal. Points whose u
/// exceeds freeze_u (when set) stop stepping and keep their state; they never
/// re-enter a window left of the threshold.
inline std::vector<CloudSnapshot> evolve_cloud(const HamiltonianSpec& spec,
                                               const BraneCloud& cloud,
                                               const IntegratorConfig& cfg,
                                               std::optional<double> freeze_u = std::nullopt) {
    if (cfg.snapshot_times.empty())
        throw std::invalid_argument("evolve_cloud: snapshot times required");
    std::vector<CloudSnapshot> snaps(cfg.snapshot_times.size());
    for (std::size_t s = 0; s < snaps.size(); ++s) {
        snaps[s].t = cfg.snapshot_times[s];
        snaps[s].cloud.id = cloud.id;
        snaps[s].cloud.labels = cloud.labels;
    }
    const auto freeze = [&](const PhasePoint& p) {
        return freeze_u.has_value() && p.u > *freeze_u;
    };
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        bool ok = true;
        std::vector<TrajectorySample> samples;
        try {
            samples = integrate(spec, cloud.points[i], cfg, freeze).samples;
        } catch (const std::runtime_error&) {
            ok = false;
        }
        for (std::size_t s = 0; s < snaps.size(); ++s) {
            if (ok && s < samples.size()) {
                snaps[s].cloud.points.push_back(samples[s].p);
                snaps[s].theta_lift.push_back(samples[s].theta_lift);
                snaps[s].H.push_back(H_value(spec, samples[s].p));
                snaps[s].ok.push_back(1);
            } else {
                snaps[s].cloud.points.push_back(cloud.points[i]);
                snaps[s].theta_lift.push_back(cloud.points[i].theta);
                snaps[s].H.push_back(0.0);
                snaps[s].ok.push_back(0);
            }
        }
    }
    return snaps;
}

struct Interval {
    double lo, hi;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

struct WindowMetrics {
    // All empty when no cloud point lies in the window (undefined, not zero).
    std::optional<double> offset;     // max sqrt(v^2 + r^2)
    std::optional<double> theta_gap;  // largest circular gap of fiber angles
    std::optional<double> hausdorff;  // symmetric distance to the target brane
};

namespace detail {

inline double phase_metric(const PhasePoint& a, const PhasePoint& b) {
    const double dth = circular_distance(a.theta, b.theta);
    return std::sqrt((a.u - b.u) * (a.u - b.u) + (a.v - b.v) * (a.v - b.v) +
                     (a.r - b.r) * (a.r - b.r) + dth * dth);
}

inline double hausdorff_distance(const std::vector<PhasePoint>& A,
                                 const std::vector<PhasePoint>& B) {
    const auto one_sided = [](const std::vector<PhasePoint>& P,
                              const std::vector<PhasePoint>& Q) {
        double sup = 0.0;
        for (const auto& p : P) {
            double inf = std::numeric_limits<double>::infinity();
            for (const auto& q : Q) inf = std::min(inf, phase_metric(p, q));
            sup = std::max(sup, inf);
        }
        return sup;
    };
    return std::max(one_sided(A, B), one_sided(B, A));
}

inline double largest_circular_gap(std::vector<double> thetas) {
    if (thetas.size() < 2) return 2.0 * pi;
    std::sort(thetas.begin(), thetas.end());
    double gap = thetas.front() + 2.0 * pi - thetas.back();
    for (std::size_t i = 1; i < thetas.size(); ++i)
        gap = std::max(gap, thetas[i] - thetas[i - 1]);
    return gap;
}

}  // namespace detail

/// Restrict a snapshot to u in window and measure offset, theta coverage gap
/// and Hausdorff distance to the discretized target.
inline WindowMetrics window_metrics(const CloudSnapshot& snap, const TargetBrane& target,
                                    const Interval& window) {
    if (window.lo < target.u_min || window.hi > target.u_max)
        throw std::invalid_argument("window_metrics: window must lie within the target range");
    std::vector<PhasePoint> in_window;
    std::vector<double> thetas;
    for (std::size_t i = 0; i < snap.cloud.size(); ++i) {
        if (!snap.ok[i]) continue;
        const PhasePoint& p = snap.cloud.points[i];
        if (!window.contains(p.u)) continue;
        in_window.push_back(p);
        thetas.push_back(p.theta);
    }
    if (in_window.empty()) return {};  // undefined

    WindowMetrics m;
    double offset = 0.0;
    for (const auto& p : in_window) offset = std::max(offset, std::hypot(p.v, p.r));
    m.offset = offset;
    m.theta_gap = detail::largest_circular_gap(thetas);

    TargetBrane t = target;
    t.u_min = window.lo;
    t.u_max = window.hi;
    m.hausdorff = detail::hausdorff_distance(in_window, t.discretize());
    return m;
}

struct ConvergenceReport {
    std::vector<double> times;
    std::vector<std::optional<double>> offset;
    std::vector<std::optional<double>> theta_gap;
    std::vector<std::optional<double>> hausdorff;
    Interval window{0.5, 1.5};
};

/// Seed semicircles, evolve, and report the window metrics per time.
inline ConvergenceReport convergence_run(const HamiltonianSpec& spec, double u_star,
                                         const std::vector<double>& eps_list, int n_per_arc,
                                         const Interval& window,
                                         const std::vector<double>& times,
                                         IntegratorConfig cfg = {}) {
    if (!std::is_sorted(times.begin(), times.end()))
        throw std::invalid_argument("convergence_run: times must be increasing");
    cfg.snapshot_times = times;
    cfg.t_end = times.empty() ? 0.0 : times.back();
    const BraneCloud seeds = seed_semicircles(u_star, eps_list, n_per_arc);
    const auto snaps = evolve_cloud(spec, seeds, cfg, window.hi + 10.0);

    TargetBrane target;
    target.u_min = window.lo;
    target.u_max = window.hi;
    ConvergenceReport report;
    report.window = window;
    for (const auto& s : snaps) {
        const WindowMetrics m = window_metrics(s, target, window);
        report.times.push_back(s.t);
        report.offset.push_back(m.offset);
        report.theta_gap.push_back(m.theta_gap);
        report.hausdorff.push_back(m.hausdorff);
    }
    return report;
}

/// Geometric ladder eps_k = eps0 * 2^{-k}, k = 0..K.
inline std::vector<double> eps_ladder(double eps0, int K) {
    std::vector<double> eps;
    for (int k = 0; k <= K; ++k) eps.push_back(eps0 * std::pow(2.0, -k));
    return eps;
}

struct OvershootReport {
    std::vector<double> times;
    // theta lifts of the tagged semicircle points per time
    std::vector<double> lift_a, lift_b, lift_c, lift_d, lift_e;
    bool overshoot_observed = false;   // some time with |theta_b| > |theta_a|
    bool final_ordering_ok = false;    // |theta_a| >= |theta_b| again at the last time
};

/// Track the five tagged semicircle points (a, e: arc endpoints; b, d:
/// quarter-arc; c: midpoint) and flag the finite-time rotation overshoot of
/// the quarter-arc points over the endpoints.
inline OvershootReport overshoot_diagnostic(const std::vector<CloudSnapshot>& snaps) {
    if (snaps.empty())
        throw std::invalid_argument("overshoot_diagnostic: no snapshots");
    const auto find_alpha = [&](double alpha) -> std::size_t {
        const auto& labels = snaps.front().cloud.labels;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i].arc_angle && std::fabs(*labels[i].arc_angle - alpha) < 1e-9)
                return i;
        throw std::invalid_argument("overshoot_diagnostic: missing tagged arc point");
    };
    const std::size_t ia = find_alpha(0.0), ib = find_alpha(pi / 4), ic = find_alpha(pi / 2),
                      id = find_alpha(3 * pi / 4), ie = find_alpha(pi);

    OvershootReport rep;
    for (const auto& s : snaps) {
        rep.times.push_back(s.t);
        rep.lift_a.push_back(s.theta_lift[ia]);
        rep.lift_b.push_back(s.theta_lift[ib]);
        rep.lift_c.push_back(s.theta_lift[ic]);
        rep.lift_d.push_back(s.theta_lift[id]);
        rep.lift_e.push_back(s.theta_lift[ie]);
        if (std::fabs(s.theta_lift[ib]) > std::fabs(s.theta_lift[ia]))
            rep.overshoot_observed = true;
    }
    rep.final_ordering_ok =
        std::fabs(rep.lift_a.back()) >= std::fabs(rep.lift_b.back());
    return rep;
}

}  // namespace braneflow
