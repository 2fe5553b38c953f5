#pragma once

// Special functions and adaptive quadrature shared across the library.

#include "hypgauss/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace hypgauss {

/// erf on the whole real line (odd extension of (2/sqrt(pi)) int_0^x e^{-t^2} dt).
/// Backed by the C library implementation.
inline double erf(double x) {
    detail::require(!std::isnan(x), "erf of NaN");
    return std::erf(x);
}

inline double erfc(double x) {
    detail::require(!std::isnan(x), "erfc of NaN");
    return std::erfc(x);
}

/// Closed form of int_a^inf y^(b - c ln y) dy:
///   sqrt(pi/4c) exp((b+1)^2/4c) erfc((2c ln a - b - 1)/sqrt(4c)).
/// a = 0 is the limit ln a -> -inf, where the erfc factor is 2.
inline double lemma_integral(double a, double b, double c) {
    detail::require(!std::isnan(a) && a >= 0.0, "lower limit must be nonnegative");
    detail::require(std::isfinite(b), "exponent offset must be finite");
    detail::require(std::isfinite(c) && c > 0.0, "quadratic coefficient must be positive (integral diverges)");
    const double four_c = 4.0 * c;
    const double scale = std::sqrt(std::numbers::pi / four_c) * std::exp((b + 1.0) * (b + 1.0) / four_c);
    if (a == 0.0) return 2.0 * scale;
    if (std::isinf(a)) return 0.0;
    const double arg = (2.0 * c * std::log(a) - b - 1.0) / std::sqrt(four_c);
    return scale * std::erfc(arg);
}

namespace detail {

inline double factorial(unsigned k) {
    double f = 1.0;
    for (unsigned i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
}

} // namespace detail

/// Volume of the Euclidean unit n-ball, split into the even and odd cases:
///   even: pi^(n/2) / (n/2)!,  odd: pi^((n-1)/2) 2^n ((n-1)/2)! / n!.
inline double unit_ball_volume(unsigned n) {
    detail::require(n >= 1, "dimension must be at least 1");
    // the factorial form overflows past n ~ 170
    detail::require(n <= 170, "dimension too large for the factorial form");
    if (n % 2 == 0) {
        const unsigned h = n / 2;
        return std::pow(std::numbers::pi, h) / detail::factorial(h);
    }
    const unsigned h = (n - 1) / 2;
    return std::pow(std::numbers::pi, h) * std::ldexp(1.0, static_cast<int>(n)) * detail::factorial(h) /
           detail::factorial(n);
}

inline double ball_volume(unsigned n, double radius) {
    detail::require(std::isfinite(radius) && radius > 0.0, "radius must be positive");
    return unit_ball_volume(n) * std::pow(radius, static_cast<double>(n));
}

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_subdivisions = 2000;

    void validate() const {
        detail::require(abs_tol > 0.0 && rel_tol > 0.0, "quadrature tolerances must be positive");
        detail::require(max_subdivisions >= 1, "quadrature needs at least one subdivision");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t subdivisions = 0;
};

namespace detail {

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    friend bool operator<(const Panel& a, const Panel& b) { return a.error < b.error; }
};

// 15-point Kronrod rule with the embedded 7-point Gauss rule; the error
// estimate is the difference of the two.
template <class F>
Panel gk15(F& f, double lo, double hi) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    // even indices (including the center) are shared with the Gauss rule
    const double f0 = f(mid);
    double kronrod = f0 * wk[0];
    double gauss = f0 * wg[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double fp = f(mid + half * xk[i]);
        const double fm = f(mid - half * xk[i]);
        kronrod += (fp + fm) * wk[i];
        if (i % 2 == 0) gauss += (fp + fm) * wg[i / 2];
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

template <class F>
QuadratureResult integrate_finite(F& f, double lo, double hi, const QuadratureSpec& spec) {
    std::priority_queue<Panel> panels;
    Panel first = gk15(f, lo, hi);
    double total = first.value;
    double err = first.error;
    panels.push(first);
    std::size_t splits = 0;
    auto done = [&] { return err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
    while (!done()) {
        if (splits >= spec.max_subdivisions)
            throw ConvergenceError("subdivision budget exhausted", total, err);
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi))
            throw ConvergenceError("panel width reached machine precision", total, err);
        Panel left = gk15(f, worst.lo, mid);
        Panel right = gk15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++splits;
    }
    // re-sum to shed the drift of the incremental updates
    double v = 0.0, e = 0.0;
    while (!panels.empty()) {
        v += panels.top().value;
        e += panels.top().error;
        panels.pop();
    }
    return {v, e, splits};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of f over [lo, hi].
///
/// hi may be +infinity; the tail is then mapped onto (0, 1] by
/// x = lo + (1 - t)/t, which suits the super-exponentially decaying
/// integrands used here. Throws ConvergenceError when the subdivision
/// budget runs out before |error| <= max(abs_tol, rel_tol |value|).
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    spec.validate();
    detail::require(std::isfinite(lo), "lower limit must be finite");
    detail::require(!std::isnan(hi) && hi >= lo, "upper limit must not be below the lower limit");
    if (hi == lo) return {};
    if (std::isinf(hi)) {
        auto g = [&](double t) {
            const double x = lo + (1.0 - t) / t;
            if (!std::isfinite(x)) return 0.0;
            const double fx = f(x);
            return fx == 0.0 ? 0.0 : fx / (t * t);
        };
        return detail::integrate_finite(g, 0.0, 1.0, spec);
    }
    return detail::integrate_finite(f, lo, hi, spec);
}

} // namespace hypgauss
