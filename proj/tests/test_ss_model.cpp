#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "braneflow/ss_model.hpp"

using namespace braneflow;

namespace {

SurfacePoint random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    return {{d(rng), d(rng)}, {d(rng), d(rng)}};
}

}  // namespace

TEST_CASE("ss_flow: explicit solution values") {
    const SurfacePoint p = ss_flow({{1.0, 0.0}, {0.0, 0.0}}, 1.0);
    CHECK(p.x.real() == Catch::Approx(std::cosh(1.0)));
    CHECK(p.x.imag() == 0.0);
    CHECK(p.y.real() == Catch::Approx(std::sinh(1.0)));

    const SurfacePoint fixed = ss_flow({{0.0, 0.0}, {0.0, 0.0}}, 5.0);
    CHECK(std::abs(fixed.x) == 0.0);
    CHECK(std::abs(fixed.y) == 0.0);

    const SurfacePoint id = ss_flow({{0.3, -0.7}, {1.1, 0.2}}, 0.0);
    CHECK(id.x == std::complex<double>(0.3, -0.7));
    CHECK(id.y == std::complex<double>(1.1, 0.2));
}

TEST_CASE("ss_flow: the closed form satisfies xdot = ybar, ydot = xbar") {
    std::mt19937_64 rng(11);
    const double dt = 1e-5;
    for (int i = 0; i < 50; ++i) {
        const SurfacePoint p = random_point(rng);
        const SurfacePoint fwd = ss_flow(p, dt);
        const SurfacePoint bwd = ss_flow(p, -dt);
        const auto xdot = (fwd.x - bwd.x) / (2.0 * dt);
        const auto ydot = (fwd.y - bwd.y) / (2.0 * dt);
        CHECK(std::abs(xdot - std::conj(p.y)) < 1e-8);
        CHECK(std::abs(ydot - std::conj(p.x)) < 1e-8);
    }
}

TEST_CASE("ss_flow: group law") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> ts(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const SurfacePoint p = random_point(rng);
        const double s = ts(rng), t = ts(rng);
        const SurfacePoint a = ss_flow(ss_flow(p, s), t);
        const SurfacePoint b = ss_flow(p, s + t);
        CHECK(std::abs(a.x - b.x) < 1e-10);
        CHECK(std::abs(a.y - b.y) < 1e-10);
    }
}

TEST_CASE("ss_flow: Im(w) conserved, Re(w) monotone nondecreasing") {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 50; ++i) {
        const SurfacePoint p0 = random_point(rng);
        double last_re = p0.w().real();
        for (double t = 0.25; t <= 4.0; t += 0.25) {
            const SurfacePoint p = ss_flow(p0, t);
            CHECK(std::fabs(p.w().imag() - p0.w().imag()) < 1e-12 * std::max(1.0, std::abs(p.w())));
            CHECK(p.w().real() >= last_re - 1e-12);
            last_re = p.w().real();
        }
    }
}

TEST_CASE("ss_flow: stable and unstable residuals scale exactly") {
    std::mt19937_64 rng(44);
    for (int i = 0; i < 50; ++i) {
        const SurfacePoint p0 = random_point(rng);
        for (double t : {0.5, 1.0, 3.0}) {
            const SurfacePoint p = ss_flow(p0, t);
            // (y - xbar) decays as e^{-t}; (y + xbar) grows as e^{t}
            CHECK(p.unstable_residual() ==
                  Catch::Approx(p0.unstable_residual() * std::exp(-t)).margin(1e-12));
            CHECK(p.stable_residual() ==
                  Catch::Approx(p0.stable_residual() * std::exp(t)).margin(1e-9));
        }
    }
}

TEST_CASE("ss_vanishing_cycle: stays on the unstable locus with real w") {
    const SurfacePoint p = ss_vanishing_cycle(0.5, 1.3, 3.0);
    CHECK(p.unstable_residual() < 1e-12 * std::abs(p.x));
    CHECK(std::fabs(p.w().imag()) < 1e-12 * std::abs(p.w()));
    CHECK(p.w().real() == Catch::Approx(0.5 * std::exp(6.0)).epsilon(1e-12));

    const SurfacePoint start = ss_vanishing_cycle(0.5, 1.3, 0.0);
    CHECK(std::abs(start.x - std::polar(std::sqrt(0.5), 1.3)) < 1e-15);
    CHECK(std::abs(start.y - std::polar(std::sqrt(0.5), -1.3)) < 1e-15);

    CHECK_THROWS_AS(ss_vanishing_cycle(-1.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("ss_make_U: fiber rays over the vertical line through w_star") {
    const auto cloud = ss_make_U(-1.0, {-0.5, 0.0, 0.5}, {0.5, 1.0, 2.0});
    REQUIRE(cloud.size() == 9);
    for (const auto& p : cloud) {
        CHECK(p.w().real() == Catch::Approx(-1.0));
        CHECK(p.y.imag() == 0.0);
        CHECK(p.y.real() > 0.0);
    }
    // v = 0, y = sqrt(|w*|) gives the real surface point x = -sqrt(|w*|)
    const auto single = ss_make_U(-4.0, {0.0}, {2.0});
    CHECK(single.front().x == std::complex<double>(-2.0, 0.0));

    CHECK_THROWS_AS(ss_make_U(1.0, {0.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ss_make_U(-1.0, {0.0}, {-1.0}), std::invalid_argument);
}

TEST_CASE("ss_stable_intersection: Newton root on the stable locus") {
    for (double w_star : {-1.0, -0.3, -2.5}) {
        const SurfacePoint p = ss_stable_intersection(w_star);
        CAPTURE(w_star);
        CHECK(p.stable_residual() < 1e-12);
        CHECK(p.w().real() == Catch::Approx(w_star));
        CHECK(std::fabs(p.w().imag()) < 1e-12);
        // located root: x = -sqrt(|w*|), y = +sqrt(|w*|)
        CHECK(p.x.real() == Catch::Approx(-std::sqrt(-w_star)));
        CHECK(p.y.real() == Catch::Approx(std::sqrt(-w_star)));
    }
    CHECK_THROWS_AS(ss_stable_intersection(0.5), std::invalid_argument);
}

TEST_CASE("ss_convergence: report structure and residual decay") {
    std::vector<double> v_samples, y_samples;
    for (int i = -40; i <= 40; ++i) v_samples.push_back(0.05 * i);
    for (int i = 0; i <= 20; ++i) y_samples.push_back(0.5 * std::pow(4.0, i / 20.0));
    const SsReport rep =
        ss_convergence(-1.0, v_samples, y_samples, 0.5, 1.5, 0.5, {0.0, 1.0, 2.0, 3.0});
    REQUIRE(rep.rows.size() == 4);

    // t = 0: the cloud sits over Re(w) = -1, left of any positive window
    CHECK(rep.rows[0].n_points_in_window == 0);
    CHECK(!rep.rows[0].max_residual.has_value());

    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        REQUIRE(rep.rows[i].max_residual.has_value());
        CHECK(rep.rows[i].n_points_in_window > 0);
        CHECK(rep.rows[i].im_w_drift < 1e-12);
        if (rep.rows[i - 1].max_residual)
            CHECK(*rep.rows[i].max_residual < *rep.rows[i - 1].max_residual);
    }
    CHECK_THROWS_AS(ss_convergence(-1.0, {0.0}, {1.0}, -1.0, 1.0, 0.5, {1.0}),
                    std::invalid_argument);
}

TEST_CASE("ss: a point on the stable locus never reaches a positive window") {
    // start on {y = -xbar}: w(t) stays real nonpositive
    const SurfacePoint p0{{0.7, 0.4}, -std::conj(std::complex<double>(0.7, 0.4))};
    for (double t = 0.0; t <= 6.0; t += 0.5) {
        const SurfacePoint p = ss_flow(p0, t);
        CHECK(std::fabs(p.w().imag()) < 1e-12);
        CHECK(p.w().real() <= 1e-12);
    }
}
