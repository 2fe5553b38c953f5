#pragma once

// Gaussian density on hyperbolic n-space, n >= 2:
//   g(x) = k exp(-d(x, mu)^2 / 2 sigma^2)
// with respect to the hyperbolic volume element, where
//   1/k = n V_n int_0^inf exp(-u^2 / 2 sigma^2) sinh(u)^(n-1) du
// and V_n is the volume of the Euclidean unit n-ball. k depends on (n, sigma^2)
// only, so it is the same in both models.

#include "hypgauss/error.hpp"
#include "hypgauss/hypgeo.hpp"
#include "hypgauss/rng.hpp"
#include "hypgauss/specfun.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace hypgauss {

namespace detail {

// ln sinh(u) for u > 0 without overflow
inline double log_sinh(double u) noexcept {
    if (u < 1.0) return std::log(std::sinh(u));
    return u + std::log1p(-std::exp(-2.0 * u)) - std::numbers::ln2;
}

// exp(-u^2/2s2) sinh(u)^(n-1), evaluated in log space
inline double radial_weight(unsigned n, double sigma2, double u) noexcept {
    if (u <= 0.0) return n == 1 ? 1.0 : 0.0;
    return std::exp(-u * u / (2.0 * sigma2) + static_cast<double>(n - 1) * log_sinh(u));
}

} // namespace detail

/// Normalization constant by quadrature of the reduced radial integral.
inline double normalization_constant(unsigned n, double sigma2, const QuadratureSpec& quad = {}) {
    detail::require(n >= 2, "hyperbolic Gaussian needs dimension n >= 2");
    detail::require(std::isfinite(sigma2) && sigma2 > 0.0, "variance must be positive");
    const auto r = integrate([&](double u) { return detail::radial_weight(n, sigma2, u); }, 0.0,
                             INFINITY, quad);
    return 1.0 / (static_cast<double>(n) * unit_ball_volume(n) * r.value);
}

/// Closed form for n = 2: 1 / (sqrt(2 sigma^2 pi^3) exp(sigma^2/2) erf(sqrt(sigma^2/2))).
inline double normalization_constant_h2(double sigma2) {
    detail::require(std::isfinite(sigma2) && sigma2 > 0.0, "variance must be positive");
    constexpr double pi = std::numbers::pi;
    return 1.0 / (std::sqrt(2.0 * sigma2 * pi * pi * pi) * std::exp(0.5 * sigma2) *
                  std::erf(std::sqrt(0.5 * sigma2)));
}

class HyperGaussianND {
public:
    /// Rejection-loop cap of sample_radius.
    static constexpr std::size_t max_rejections = 1'000'000;

    HyperGaussianND(ModelPoint mean, double sigma2, QuadratureSpec quad = {})
        : mean_(std::move(mean)), sigma2_(sigma2), quad_(quad) {
        detail::require(mean_.dim() >= 2, "hyperbolic Gaussian needs dimension n >= 2");
        k_ = normalization_constant(static_cast<unsigned>(mean_.dim()), sigma2_, quad_);
        ball_mean_ = to_model(mean_, Model::Ball);
    }

    const ModelPoint& mean() const noexcept { return mean_; }
    double sigma2() const noexcept { return sigma2_; }
    /// Normalization constant; also the maximum of pdf, attained at the mean.
    double k() const noexcept { return k_; }
    std::size_t dim() const noexcept { return mean_.dim(); }
    const QuadratureSpec& quad() const noexcept { return quad_; }

    /// Same mean, new variance (recomputes k).
    HyperGaussianND with_variance(double sigma2) const { return {mean_, sigma2, quad_}; }

    double pdf(const ModelPoint& x) const { return pdf_at_distance(distance(x, mean_)); }

    double pdf_at_distance(double r) const { return k_ * std::exp(-r * r / (2.0 * sigma2_)); }

    /// Radius of the level set {pdf = c}, a hyperbolic sphere about the mean.
    double level_radius(double c) const {
        detail::require(c > 0.0 && c <= k_, "level must lie in (0, k]");
        return std::sqrt(-2.0 * sigma2_ * std::log(c / k_));
    }

    /// Density of d(X, mean): k n V_n exp(-r^2/2 sigma^2) sinh(r)^(n-1).
    double radial_density(double r) const {
        if (r <= 0.0) return 0.0;
        const auto n = static_cast<unsigned>(dim());
        return k_ * static_cast<double>(n) * unit_ball_volume(n) * detail::radial_weight(n, sigma2_, r);
    }

    double radial_cdf(double r) const {
        if (r <= 0.0) return 0.0;
        return integrate([&](double u) { return radial_density(u); }, 0.0, r, quad_).value;
    }

    /// Draw d(X, mean) by rejection from the truncated normal proposal
    /// proportional to exp(-r^2/2 sigma^2 + (n-1) r) on r > 0, accepting with
    /// probability (2 sinh(r) / e^r)^(n-1) = (1 - e^{-2r})^(n-1).
    double sample_radius(RngStream& rng) const {
        const double n1 = static_cast<double>(dim() - 1);
        const double shift = n1 * sigma2_;
        const double sigma = std::sqrt(sigma2_);
        for (std::size_t i = 0; i < max_rejections; ++i) {
            const double r = shift + sigma * rng.normal();
            if (r <= 0.0) continue;
            const double accept = std::exp(n1 * std::log1p(-std::exp(-2.0 * r)));
            if (rng.uniform() < accept) return r;
        }
        detail::fail(ErrorKind::SamplingFailure, "radial rejection sampler exceeded its iteration cap");
    }

    /// Uniform direction about the mean, radius from sample_radius.
    ModelPoint sample(RngStream& rng) const {
        const std::size_t n = dim();
        std::vector<double> dir(n);
        double len2 = 0.0;
        do {
            len2 = 0.0;
            for (double& c : dir) {
                c = rng.normal();
                len2 += c * c;
            }
        } while (len2 == 0.0);
        const double r = sample_radius(rng);
        const double scale = std::tanh(0.5 * r) / std::sqrt(len2);
        for (double& c : dir) c *= scale;
        if (!detail::valid_ball(dir))
            detail::fail(ErrorKind::SamplingFailure, "sampled radius is beyond double precision");
        const ModelPoint at_center = ModelPoint::ball(std::move(dir));
        return to_model(ball_translate(ball_mean_, at_center), mean_.model());
    }

private:
    ModelPoint mean_;
    double sigma2_;
    QuadratureSpec quad_;
    double k_ = 0.0;
    ModelPoint ball_mean_ = ModelPoint::center(Model::Ball, 1);
};

} // namespace hypgauss
