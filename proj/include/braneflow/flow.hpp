#pragma once

// Adaptive time integration of the Hamiltonian vector field: an embedded
// Dormand-Prince 5(4) pair with step rejection and 4th-order dense output,
// plus conservation monitors for H and r and a few flow-level diagnostics.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "braneflow/coords.hpp"
#include "braneflow/hamiltonian.hpp"

namespace braneflow {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0.5;
    double min_step = 1e-12;
    double t_end = 10.0;
    std::vector<double> snapshot_times;  // if empty, every accepted step is recorded
    long max_steps = 20'000'000;

    void validate() const {
        if (!(rel_tol > 0.0 && abs_tol > 0.0))
            throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
        if (!(min_step > 0.0 && min_step <= max_step))
            throw std::invalid_argument("IntegratorConfig: requires 0 < min_step <= max_step");
    }
};

struct TrajectorySample {
    double t;
    PhasePoint p;
    double theta_lift;  // continuous lift of theta along the trajectory
};

struct TrajectoryStats {
    double H_drift = 0.0;
    double r_drift = 0.0;
    long steps = 0;
    long rejected = 0;
};

struct Trajectory {
    PhasePoint initial;
    std::vector<TrajectorySample> samples;
    TrajectoryStats stats;
};

struct StepUnderflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonfiniteStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

using State = std::array<double, 4>;  // (u, v, r, theta_lift)

inline State axpy(const State& y, double h, const State& d) {
    return {y[0] + h * d[0], y[1] + h * d[1], y[2] + h * d[2], y[3] + h * d[3]};
}

inline PhasePoint state_point(const State& y) {
    return {y[0], y[1], y[2], wrap_angle(y[3])};
}

// One accepted step's dense-output polynomial.
struct DenseSegment {
    double t0, h;
    std::array<State, 5> rcont;

    State eval(double t) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        State out;
        for (int i = 0; i < 4; ++i)
            out[i] = rcont[0][i] +
                     s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
        return out;
    }
};

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c2 = 1.0 / 5, dp_c3 = 3.0 / 10, dp_c4 = 4.0 / 5, dp_c5 = 8.0 / 9;
inline constexpr double dp_a21 = 1.0 / 5;
inline constexpr double dp_a31 = 3.0 / 40, dp_a32 = 9.0 / 40;
inline constexpr double dp_a41 = 44.0 / 45, dp_a42 = -56.0 / 15, dp_a43 = 32.0 / 9;
inline constexpr double dp_a51 = 19372.0 / 6561, dp_a52 = -25360.0 / 2187,
                        dp_a53 = 64448.0 / 6561, dp_a54 = -212.0 / 729;
inline constexpr double dp_a61 = 9017.0 / 3168, dp_a62 = -355.0 / 33, dp_a63 = 46732.0 / 5247,
                        dp_a64 = 49.0 / 176, dp_a65 = -5103.0 / 18656;
inline constexpr double dp_a71 = 35.0 / 384, dp_a73 = 500.0 / 1113, dp_a74 = 125.0 / 192,
                        dp_a75 = -2187.0 / 6784, dp_a76 = 11.0 / 84;
inline constexpr double dp_e1 = 71.0 / 57600, dp_e3 = -71.0 / 16695, dp_e4 = 71.0 / 1920,
                        dp_e5 = -17253.0 / 339200, dp_e6 = 22.0 / 525, dp_e7 = -1.0 / 40;
inline constexpr double dp_d1 = -12715105075.0 / 11282082432.0,
                        dp_d3 = 87487479700.0 / 32700410799.0,
                        dp_d4 = -10690763975.0 / 1880347072.0,
                        dp_d5 = 701980252875.0 / 199316789632.0,
                        dp_d6 = -1453857185.0 / 822651844.0,
                        dp_d7 = 69997945.0 / 29380423.0;

}  // namespace detail

/// Integrate X_H from p0 over [0, cfg.t_end]. Samples are interpolated to
/// cfg.snapshot_times by dense output (or are the accepted steps when no
/// snapshot times are given). r has zero derivative, so its drift is pure
/// roundoff; H is monitored at every accepted step.
template <class StopPredicate>
Trajectory integrate(const HamiltonianSpec& spec, const PhasePoint& p0,
                     const IntegratorConfig& cfg, StopPredicate&& freeze) {
    using detail::State;
    cfg.validate();

    const auto rhs = [&](const State& y) -> State {
        const TangentVector X = hamiltonian_vector_field(spec, detail::state_point(y));
        return {X.du, X.dv, X.dr, X.dtheta};
    };
    const auto check_finite = [&](const State& y, double t) {
        for (double c : y)
            if (!std::isfinite(c))
                throw NonfiniteStateError("nonfinite state at t = " + std::to_string(t));
    };

    std::vector<double> snaps = cfg.snapshot_times;
    std::sort(snaps.begin(), snaps.end());

    Trajectory traj;
    traj.initial = p0;
    State y = {p0.u, p0.v, p0.r, p0.theta};
    double t = 0.0;
    const double H0 = H_value(spec, p0);

    std::size_t next_snap = 0;
    const auto record = [&](double ts, const State& ys) {
        traj.samples.push_back({ts, detail::state_point(ys), ys[3]});
    };
    // snapshots requested at or before t = 0
    while (next_snap < snaps.size() && snaps[next_snap] <= 0.0) record(snaps[next_snap++], y);
    if (snaps.empty()) record(0.0, y);

    State k1 = rhs(y);
    double h = std::min(cfg.max_step, 1e-2);
    bool frozen = freeze(detail::state_point(y));

    while (t < cfg.t_end && !frozen) {
        if (traj.stats.steps + traj.stats.rejected > cfg.max_steps)
            throw std::runtime_error("integrate: step budget exhausted");
        h = std::min(h, cfg.t_end - t);

        const State k2 = rhs(detail::axpy(y, h * detail::dp_a21, k1));
        const State k3 = rhs({y[0] + h * (detail::dp_a31 * k1[0] + detail::dp_a32 * k2[0]),
                              y[1] + h * (detail::dp_a31 * k1[1] + detail::dp_a32 * k2[1]),
                              y[2] + h * (detail::dp_a31 * k1[2] + detail::dp_a32 * k2[2]),
                              y[3] + h * (detail::dp_a31 * k1[3] + detail::dp_a32 * k2[3])});
        State tmp;
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (detail::dp_a41 * k1[i] + detail::dp_a42 * k2[i] +
                                 detail::dp_a43 * k3[i]);
        const State k4 = rhs(tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (detail::dp_a51 * k1[i] + detail::dp_a52 * k2[i] +
                                 detail::dp_a53 * k3[i] + detail::dp_a54 * k4[i]);
        const State k5 = rhs(tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (detail::dp_a61 * k1[i] + detail::dp_a62 * k2[i] +
                                 detail::dp_a63 * k3[i] + detail::dp_a64 * k4[i] +
                                 detail::dp_a65 * k5[i]);
        const State k6 = rhs(tmp);
        State y1;
        for (int i = 0; i < 4; ++i)
            y1[i] = y[i] + h * (detail::dp_a71 * k1[i] + detail::dp_a73 * k3[i] +
                                detail::dp_a74 * k4[i] + detail::dp_a75 * k5[i] +
                                detail::dp_a76 * k6[i]);
        const State k7 = rhs(y1);
        check_finite(y1, t + h);

        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double e = h * (detail::dp_e1 * k1[i] + detail::dp_e3 * k3[i] +
                                  detail::dp_e4 * k4[i] + detail::dp_e5 * k5[i] +
                                  detail::dp_e6 * k6[i] + detail::dp_e7 * k7[i]);
            const double sk = cfg.abs_tol +
                              cfg.rel_tol * std::max(std::fabs(y[i]), std::fabs(y1[i]));
            err += (e / sk) * (e / sk);
        }
        err = std::sqrt(err / 4.0);

        if (err > 1.0) {
            ++traj.stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < cfg.min_step)
                throw StepUnderflowError("step underflow at t = " + std::to_string(t) +
                                         ", u = " + std::to_string(y[0]) +
                                         ", v = " + std::to_string(y[1]));
            continue;
        }

        // accepted: build the dense-output segment for this step
        detail::DenseSegment seg;
        seg.t0 = t;
        seg.h = h;
        for (int i = 0; i < 4; ++i) {
            const double dy = y1[i] - y[i];
            seg.rcont[0][i] = y[i];
            seg.rcont[1][i] = dy;
            seg.rcont[2][i] = h * k1[i] - dy;
            seg.rcont[3][i] = dy - h * k7[i] - seg.rcont[2][i];
            seg.rcont[4][i] = h * (detail::dp_d1 * k1[i] + detail::dp_d3 * k3[i] +
                                   detail::dp_d4 * k4[i] + detail::dp_d5 * k5[i] +
                                   detail::dp_d6 * k6[i] + detail::dp_d7 * k7[i]);
        }

        const double t1 = t + h;
        while (next_snap < snaps.size() && snaps[next_snap] <= t1 + 1e-14) {
            const double ts = std::min(snaps[next_snap], t1);
            record(ts, seg.eval(ts));
            ++next_snap;
        }

        t = t1;
        y = y1;
        k1 = k7;  // FSAL
        ++traj.stats.steps;
        if (snaps.empty()) record(t, y);

        traj.stats.r_drift = std::max(traj.stats.r_drift, std::fabs(y[2] - p0.r));
        traj.stats.H_drift =
            std::max(traj.stats.H_drift,
                     std::fabs(H_value(spec, detail::state_point(y)) - H0));

        h = std::min(cfg.max_step, h * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2))));
        frozen = freeze(detail::state_point(y));
    }

    // a frozen point keeps its state for any remaining snapshot times
    while (next_snap < snaps.size()) record(snaps[next_snap++], y);
    return traj;
}

inline Trajectory integrate(const HamiltonianSpec& spec, const PhasePoint& p0,
                            const IntegratorConfig& cfg) {
    return integrate(spec, p0, cfg, [](const PhasePoint&) { return false; });
}

/// Integrate a point seeded on the stop locus (r = 0, theta = -Theta0) and
/// return the worst wrapped |theta(t) + Theta(t)| over dense samples.
inline double stop_preservation_check(const HamiltonianSpec& spec, double Theta0, double R0,
                                      double t_end) {
    if (!(R0 > 0.0))
        throw std::domain_error("stop_preservation_check: requires R0 > 0");
    IntegratorConfig cfg;
    cfg.t_end = t_end;
    const int n = 200;
    for (int i = 0; i <= n; ++i) cfg.snapshot_times.push_back(t_end * i / n);
    const PhasePoint p0(R0 * std::cos(Theta0), R0 * std::sin(Theta0), 0.0, -Theta0);
    const Trajectory traj = integrate(spec, p0, cfg);
    double worst = 0.0;
    for (const auto& s : traj.samples)
        worst = std::max(worst, std::fabs(wrap_angle(s.p.theta + s.p.Theta())));
    return worst;
}

struct Rectangle {
    double u_min, u_max, v_min, v_max;
};

struct FieldSample {
    PhasePoint p;
    TangentVector X;
    double speed;  // Euclidean norm of (du, dv)
};

/// Sample X_H on an n x n grid in (u, v) at fixed r.
inline std::vector<FieldSample> field_grid(const HamiltonianSpec& spec, double r,
                                           const Rectangle& bounds, int n) {
    if (n < 2)
        throw std::invalid_argument("field_grid: requires n >= 2");
    std::vector<FieldSample> grid;
    grid.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double u = bounds.u_min + (bounds.u_max - bounds.u_min) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double v = bounds.v_min + (bounds.v_max - bounds.v_min) * j / (n - 1);
            const PhasePoint p(u, v, r, 0.0);
            const TangentVector X = hamiltonian_vector_field(spec, p);
            grid.push_back({p, X, std::hypot(X.du, X.dv)});
        }
    }
    return grid;
}

}  // namespace braneflow
