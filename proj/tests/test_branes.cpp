#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "braneflow/branes.hpp"

using namespace braneflow;

namespace {

IntegratorConfig tight(std::vector<double> snaps) {
    IntegratorConfig cfg;
    cfg.rel_tol = cfg.abs_tol = 1e-10;
    cfg.snapshot_times = std::move(snaps);
    cfg.t_end = cfg.snapshot_times.back();
    return cfg;
}

}  // namespace

TEST_CASE("make_U: flat local model of the mapping-cone brane") {
    const BraneCloud cloud = make_U(1.0, {-0.5, 0.0, 0.5}, {-1.0, -2.0});
    REQUIRE(cloud.size() == 6);
    CHECK(cloud.id == BraneId::U);
    for (const auto& p : cloud.points) {
        CHECK(p.u == -1.0);
        CHECK(p.theta == 0.0);
    }
    // single-point example: (-1, 0, -1, 0) carries H = 0
    const BraneCloud single = make_U(1.0, {0.0}, {-1.0});
    CHECK(H_value(HamiltonianSpec::paper(), single.points.front()) == 0.0);

    CHECK_THROWS_AS(make_U(-1.0, {0.0}, {-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_U(1.0, {0.0}, {0.5}), std::invalid_argument);
}

TEST_CASE("make_U: tangent frame is omega-isotropic (Lagrangian check)") {
    const BraneCloud cloud = make_U(1.0, {-1.0, 0.0, 1.0}, {-0.5, -1.5});
    const TangentVector dv{0, 1, 0, 0}, dr{0, 0, 1, 0};
    for (const auto& p : cloud.points) CHECK(omega_eval(p, dv, dr) == 0.0);
}

TEST_CASE("seed_semicircles: geometry of the arcs") {
    const BraneCloud cloud = seed_semicircles(1.0, {0.25, 0.5}, 9);
    REQUIRE(cloud.size() == 18);
    CHECK(cloud.id == BraneId::seedArcs);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& p = cloud.points[i];
        const auto& l = cloud.labels[i];
        REQUIRE(l.eps.has_value());
        CHECK(p.u == -1.0);
        CHECK(p.theta == 0.0);
        CHECK(p.r <= 0.0);
        CHECK(std::fabs(std::hypot(p.v, p.r) - *l.eps) < 1e-14);
        CHECK(l.v0 == p.v);
        CHECK(l.r0 == p.r);
    }
    // endpoints sit exactly on the boundary stratum; midpoint on the axis
    CHECK(cloud.points[0].r == 0.0);
    CHECK(cloud.points[0].v == 0.25);
    CHECK(cloud.points[8].r == 0.0);
    CHECK(cloud.points[8].v == -0.25);
    CHECK(cloud.points[4].v == Catch::Approx(0.0).margin(1e-16));
    CHECK(cloud.points[4].r == Catch::Approx(-0.25));

    CHECK_THROWS_AS(seed_semicircles(1.0, {-0.1}, 9), std::invalid_argument);
    CHECK_THROWS_AS(seed_semicircles(1.0, {0.1}, 2), std::invalid_argument);
}

TEST_CASE("eps_ladder: geometric refinement") {
    const auto eps = eps_ladder(1.0, 10);
    REQUIRE(eps.size() == 11);
    CHECK(eps.front() == 1.0);
    CHECK(eps.back() == Catch::Approx(std::pow(2.0, -10)));
    for (std::size_t k = 1; k < eps.size(); ++k)
        CHECK(eps[k] == Catch::Approx(0.5 * eps[k - 1]));
}

TEST_CASE("evolve_cloud: r conservation and mirror symmetry per point") {
    const auto spec = HamiltonianSpec::paper();
    const BraneCloud seeds = seed_semicircles(1.0, {0.5}, 17);
    const auto snaps = evolve_cloud(spec, seeds, tight({3.0, 6.0}));
    REQUIRE(snaps.size() == 2);
    for (const auto& s : snaps) {
        REQUIRE(s.cloud.size() == seeds.size());
        for (std::size_t i = 0; i < s.cloud.size(); ++i) {
            REQUIRE(s.ok[i] == 1);
            CHECK(std::fabs(s.cloud.points[i].r - seeds.labels[i].r0) < 1e-12);
        }
        // arc index i mirrors to n-1-i under (v, theta) -> (-v, -theta)
        const std::size_t n = s.cloud.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = s.cloud.points[i];
            const auto& b = s.cloud.points[n - 1 - i];
            CHECK(std::fabs(a.u - b.u) < 1e-8);
            CHECK(std::fabs(a.v + b.v) < 1e-8);
            CHECK(std::fabs(wrap_angle(a.theta + b.theta)) < 1e-8);
        }
    }
    IntegratorConfig no_snaps;
    CHECK_THROWS_AS(evolve_cloud(spec, seeds, no_snaps), std::invalid_argument);
}

TEST_CASE("TargetBrane: discretization covers the window circle") {
    TargetBrane target;
    target.u_min = 0.5;
    target.u_max = 1.5;
    const auto pts = target.discretize();
    REQUIRE(pts.size() == static_cast<std::size_t>(target.m) * target.n_u);
    for (const auto& p : pts) {
        CHECK(p.v == 0.0);
        CHECK(p.r == 0.0);
        CHECK(p.u >= 0.5);
        CHECK(p.u <= 1.5);
    }
    TargetBrane bad;
    bad.u_max = bad.u_min;
    CHECK_THROWS_AS(bad.discretize(), std::invalid_argument);
}

TEST_CASE("window_metrics: empty window is undefined, not zero") {
    // the unevolved cloud sits at u = -u*, left of any positive window
    const BraneCloud seeds = seed_semicircles(1.0, {0.5}, 9);
    CloudSnapshot snap;
    snap.t = 0.0;
    snap.cloud = seeds;
    snap.ok.assign(seeds.size(), 1);
    const WindowMetrics m = window_metrics(snap, TargetBrane{}, {0.5, 1.5});
    CHECK(!m.offset.has_value());
    CHECK(!m.theta_gap.has_value());
    CHECK(!m.hausdorff.has_value());
}

TEST_CASE("window_metrics: single point at theta = 0 gives gap 2 pi") {
    CloudSnapshot snap;
    snap.cloud.points.emplace_back(1.0, 0.0, 0.0, 0.0);
    snap.cloud.labels.push_back({});
    snap.ok.push_back(1);
    const WindowMetrics m = window_metrics(snap, TargetBrane{}, {0.5, 1.5});
    REQUIRE(m.offset.has_value());
    CHECK(*m.offset == 0.0);
    CHECK(*m.theta_gap == Catch::Approx(2.0 * pi));
}

TEST_CASE("window_metrics: cloud equal to the target has zero distance") {
    TargetBrane target;
    CloudSnapshot snap;
    for (const auto& p : target.discretize()) {
        snap.cloud.points.push_back(p);
        snap.cloud.labels.push_back({});
        snap.ok.push_back(1);
    }
    const WindowMetrics m = window_metrics(snap, target, {0.5, 1.5});
    REQUIRE(m.hausdorff.has_value());
    CHECK(*m.hausdorff == Catch::Approx(0.0).margin(1e-14));
    CHECK(*m.offset == 0.0);
    CHECK(*m.theta_gap == Catch::Approx(2.0 * pi / target.m));
}

TEST_CASE("window_metrics: window must lie inside the target range") {
    CloudSnapshot snap;
    snap.cloud.points.emplace_back(1.0, 0.0, 0.0, 0.0);
    snap.cloud.labels.push_back({});
    snap.ok.push_back(1);
    TargetBrane target;
    CHECK_THROWS_AS(window_metrics(snap, target, {0.0, 2.0}), std::invalid_argument);
}

TEST_CASE("largest_circular_gap: rotation invariance") {
    std::vector<double> thetas = {-2.9, -1.0, 0.2, 0.5, 2.8};
    const double base = detail::largest_circular_gap(thetas);
    for (double shift : {0.3, 1.7, 3.0}) {
        std::vector<double> rotated;
        for (double t : thetas) rotated.push_back(wrap_angle(t + shift));
        CHECK(detail::largest_circular_gap(rotated) == Catch::Approx(base).margin(1e-12));
    }
}

TEST_CASE("convergence_run: offsets positive and shrinking on a small scenario") {
    const auto spec = HamiltonianSpec::paper();
    const ConvergenceReport rep = convergence_run(
        spec, 1.0, eps_ladder(1.0, 6), 17, {0.5, 1.5}, {4.0, 8.0}, tight({4.0, 8.0}));
    REQUIRE(rep.times.size() == 2);
    REQUIRE(rep.offset[0].has_value());
    REQUIRE(rep.offset[1].has_value());
    CHECK(*rep.offset[0] > 0.0);  // finite-time snapshots never coincide with J
    CHECK(*rep.offset[1] > 0.0);
    CHECK(*rep.offset[1] < *rep.offset[0]);
    CHECK(*rep.hausdorff[1] < *rep.hausdorff[0]);

    CHECK_THROWS_AS(
        convergence_run(spec, 1.0, {0.5}, 9, {0.5, 1.5}, {2.0, 1.0}, tight({2.0})),
        std::invalid_argument);
}

TEST_CASE("overshoot_diagnostic: tagged points of the small arc") {
    const auto spec = HamiltonianSpec::paper();
    // n_per_arc = 5 tags exactly the points a(alpha=0) .. e(alpha=pi)
    const BraneCloud seeds = seed_semicircles(1.0, {0.3}, 5);
    // the endpoint lift saturates near Theta(0) while the quarter-arc point
    // keeps winding; the crossover for eps = 0.3 happens around t ~ 67
    std::vector<double> times;
    for (int i = 0; i <= 50; ++i) times.push_back(2.0 * i);
    const auto snaps = evolve_cloud(spec, seeds, tight(times));
    const OvershootReport rep = overshoot_diagnostic(snaps);

    // point c rides the symmetry axis: theta lift stays 0
    for (double lift : rep.lift_c) CHECK(std::fabs(lift) < 1e-8);
    // a and e wind oppositely with equal magnitude
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        CHECK(std::fabs(rep.lift_a[i] + rep.lift_e[i]) < 1e-8);
    // finite-time overshoot of the quarter-arc point over the endpoint
    CHECK(rep.overshoot_observed);

    CHECK_THROWS_AS(overshoot_diagnostic({}), std::invalid_argument);
}
