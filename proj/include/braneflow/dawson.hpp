#pragma once

// Dawson integral F(x) = e^{-x^2} int_0^x e^{a^2} da, the stable form of the
// erfi combination appearing in the closed-form Hamiltonian. Three regimes:
// power series for small x, Rybicki's sampling method mid-range, and the
// asymptotic series 1/(2x) + 1/(4x^3) + ... for large x.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace braneflow {

namespace detail {

inline double dawson_series(double x) {
    // F(x) = sum_n (-1)^n 2^n x^{2n+1} / (2n+1)!!
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 0; n < 64; ++n) {
        term *= -2.0 * x2 / static_cast<double>(2 * n + 3);
        sum += term;
        if (std::fabs(term) < std::numeric_limits<double>::epsilon() * std::fabs(sum))
            break;
    }
    return sum;
}

inline double dawson_rybicki(double x) {
    // F(x) ~ (1/sqrt(pi)) sum_{n odd} e^{-(x - n h)^2} / n, h = 0.25 keeps the
    // sampling error below 1e-17.
    constexpr double h = 0.25;
    constexpr int nmax = 14;
    static const std::array<double, nmax> c = [] {
        std::array<double, nmax> a{};
        for (int i = 0; i < nmax; ++i) {
            const double m = (2.0 * i + 1.0) * h;
            a[i] = std::exp(-m * m);
        }
        return a;
    }();
    const int n0 = 2 * static_cast<int>(0.5 * x / h + 0.5);
    const double xp = x - n0 * h;
    const double e2 = std::exp(4.0 * xp * h);
    double e1 = std::exp(2.0 * xp * h);
    double d1 = n0 + 1.0;
    double d2 = n0 - 1.0;
    double sum = 0.0;
    for (int i = 0; i < nmax; ++i) {
        sum += c[i] * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    constexpr double inv_sqrt_pi = 0.56418958354775628695;
    return inv_sqrt_pi * std::exp(-xp * xp) * sum;
}

inline double dawson_asymptotic(double x) {
    // F(x) ~ (1/(2x)) sum_k (2k-1)!! / (2x^2)^k
    const double ix2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double next = term * (2.0 * k - 1.0) * ix2;
        if (next >= term) break;  // past the smallest term
        term = next;
        sum += term;
        if (term < std::numeric_limits<double>::epsilon() * sum) break;
    }
    return sum / (2.0 * x);
}

}  // namespace detail

/// Dawson function F(x) for x >= 0, relative accuracy ~1e-13 or better.
inline double dawson(double x) {
    if (!(x >= 0.0))
        throw std::domain_error("dawson: requires x >= 0");
    if (x < 1.0) return detail::dawson_series(x);
    if (x < 6.5) return detail::dawson_rybicki(x);
    return detail::dawson_asymptotic(x);
}

/// F(x)/x, extended smoothly by 1 at x = 0.
inline double dawson_over_x(double x) {
    if (!(x >= 0.0))
        throw std::domain_error("dawson_over_x: requires x >= 0");
    if (x < 0.1) {
        // 1 - (2/3)x^2 + (4/15)x^4 - ...
        const double x2 = x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int n = 0; n < 16; ++n) {
            term *= -2.0 * x2 / static_cast<double>(2 * n + 3);
            sum += term;
            if (std::fabs(term) < std::numeric_limits<double>::epsilon()) break;
        }
        return sum;
    }
    return dawson(x) / x;
}

/// F(x)/x - 1, computed without cancellation near x = 0 (leading term -2x^2/3).
inline double dawson_over_x_minus_1(double x) {
    if (!(x >= 0.0))
        throw std::domain_error("dawson_over_x_minus_1: requires x >= 0");
    if (x < 0.1) {
        const double x2 = x * x;
        double term = -2.0 * x2 / 3.0;
        double sum = term;
        for (int n = 1; n < 16; ++n) {
            term *= -2.0 * x2 / static_cast<double>(2 * n + 3);
            sum += term;
            if (std::fabs(term) < std::numeric_limits<double>::epsilon() * std::fabs(sum)) break;
        }
        return sum;
    }
    return dawson(x) / x - 1.0;
}

}  // namespace braneflow
