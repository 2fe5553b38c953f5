#pragma once

// Gaussian density on the hyperbolic line H = (0, inf) with d(x, y) = |ln(x/y)|.
//
// Two conventions are exposed:
//   pdf(x)                density w.r.t. the hyperbolic length element dx/x
//   euclidean_density(x)  density w.r.t. dx, i.e. pdf(x)/x (the lognormal pdf)

#include "hypgauss/error.hpp"
#include "hypgauss/rng.hpp"
#include "hypgauss/specfun.hpp"

#include <cmath>
#include <numbers>

namespace hypgauss {

inline double dist_line(double x, double y) {
    detail::require(x > 0.0 && y > 0.0 && std::isfinite(x) && std::isfinite(y),
                    "hyperbolic line points must be positive and finite");
    return std::abs(std::log(x / y));
}

class HyperGaussian1D {
public:
    /// mu_h is the symmetric mean e^mu, sigma2 the variance.
    HyperGaussian1D(double mu_h, double sigma2) : mu_h_(mu_h), sigma2_(sigma2) {
        detail::require(std::isfinite(mu_h) && mu_h > 0.0, "symmetric mean must be positive");
        detail::require(std::isfinite(sigma2) && sigma2 > 0.0, "variance must be positive");
        log_mu_ = std::log(mu_h_);
        sigma_ = std::sqrt(sigma2_);
        peak_ = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma2_);
    }

    double mu_h() const noexcept { return mu_h_; }
    double sigma2() const noexcept { return sigma2_; }
    double sigma() const noexcept { return sigma_; }
    /// Maximum of pdf, reached at mu_h.
    double peak() const noexcept { return peak_; }

    double pdf(double x) const {
        const double d = dist_line(x, mu_h_);
        return peak_ * std::exp(-d * d / (2.0 * sigma2_));
    }

    double euclidean_density(double x) const { return pdf(x) / x; }

    /// Probability of [lo, hi]; lo may be 0 and hi may be +inf.
    double mass(double lo, double hi) const {
        detail::require(!std::isnan(lo) && !std::isnan(hi) && lo >= 0.0, "interval bounds must be nonnegative");
        detail::require(lo < hi, "interval must satisfy lo < hi");
        const double zl = lo == 0.0 ? -INFINITY : (std::log(lo) - log_mu_) / sigma_;
        const double zh = std::isinf(hi) ? INFINITY : (std::log(hi) - log_mu_) / sigma_;
        // work in whichever tail keeps the erfc arguments positive
        if (zl >= 0.0) return upper_tail(zl) - upper_tail(zh);
        if (zh <= 0.0) return upper_tail(-zh) - upper_tail(-zl);
        return 1.0 - upper_tail(-zl) - upper_tail(zh);
    }

    /// exp(N(ln mu_h, sigma^2)).
    double sample(RngStream& rng) const { return std::exp(log_mu_ + sigma_ * rng.normal()); }

private:
    // P(Z > z) for a standard normal Z
    static double upper_tail(double z) {
        if (std::isinf(z)) return z > 0 ? 0.0 : 1.0;
        return 0.5 * std::erfc(z / std::numbers::sqrt2);
    }

    double mu_h_;
    double sigma2_;
    double log_mu_ = 0.0;
    double sigma_ = 0.0;
    double peak_ = 0.0;
};

} // namespace hypgauss
