#include "hypgauss/specfun.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hypgauss;

namespace {

double lemma_integrand(double y, double b, double c) { return std::exp((b - c * std::log(y)) * std::log(y)); }

} // namespace

TEST(SpecFun, ErfReferenceValues) {
    EXPECT_NEAR(hypgauss::erf(1.0 / std::numbers::sqrt2), 0.682689492137085897, 1e-16);
    EXPECT_NEAR(hypgauss::erf(1.0), 0.842700792949714869, 1e-16);
    EXPECT_NEAR(hypgauss::erfc(3.0), 2.20904969985854414e-5, 1e-20);
    EXPECT_NEAR(hypgauss::erfc(10.0), 2.08848758376254476e-45, 1e-58);
    EXPECT_DOUBLE_EQ(hypgauss::erf(-0.7), -hypgauss::erf(0.7));
    EXPECT_DOUBLE_EQ(hypgauss::erfc(-2.0), 2.0 - hypgauss::erfc(2.0));
    EXPECT_EQ(hypgauss::erf(INFINITY), 1.0);
    EXPECT_EQ(hypgauss::erfc(INFINITY), 0.0);
    EXPECT_THROW(hypgauss::erf(NAN), Error);
    EXPECT_THROW(hypgauss::erfc(NAN), Error);
}

TEST(SpecFun, LemmaFrozenReferenceValues) {
    // 30-digit quadrature of the defining integral
    EXPECT_NEAR(lemma_integral(1.0, 0.0, 1.0), 1.73023443370370019, 1e-14);
    EXPECT_NEAR(lemma_integral(0.5, -1.0, 0.5), 1.89473876635438893, 1e-14);
    EXPECT_NEAR(lemma_integral(2.0, 1.0, 2.0), 0.722482727601680299, 1e-14);
    EXPECT_NEAR(lemma_integral(0.5, 1.0, 0.5), 18.4560679976068590, 1e-12);
    EXPECT_NEAR(lemma_integral(2.0, -1.0, 0.5), 0.611889508276611569, 1e-14);
}

TEST(SpecFun, LemmaMatchesQuadratureOnGrid) {
    for (double a : {0.5, 1.0, 2.0})
        for (double b : {-1.0, 0.0, 1.0})
            for (double c : {0.5, 1.0, 2.0}) {
                const double closed = lemma_integral(a, b, c);
                const double q = integrate([&](double y) { return lemma_integrand(y, b, c); }, a, INFINITY).value;
                EXPECT_NEAR(q, closed, 1e-9 * closed) << a << ' ' << b << ' ' << c;
            }
}

TEST(SpecFun, LemmaLimits) {
    // a = 0 covers the whole lognormal-type kernel: sqrt(pi/c) exp((b+1)^2/4c)
    EXPECT_NEAR(lemma_integral(0.0, 0.3, 1.5), std::sqrt(std::numbers::pi / 1.5) * std::exp(1.69 / 6.0), 1e-14);
    EXPECT_EQ(lemma_integral(INFINITY, 0.0, 1.0), 0.0);
    EXPECT_THROW(lemma_integral(1.0, 0.0, 0.0), Error);
    EXPECT_THROW(lemma_integral(1.0, 0.0, -1.0), Error);
    EXPECT_THROW(lemma_integral(-1.0, 0.0, 1.0), Error);
}

TEST(SpecFun, UnitBallVolumes) {
    EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
    EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-15);
    EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
    EXPECT_NEAR(unit_ball_volume(4), std::numbers::pi * std::numbers::pi / 2.0, 1e-14);
    // recurrence V_n = 2 pi / n * V_{n-2}
    for (unsigned n = 3; n <= 40; ++n)
        EXPECT_NEAR(unit_ball_volume(n), 2.0 * std::numbers::pi / n * unit_ball_volume(n - 2),
                    1e-13 * unit_ball_volume(n));
    EXPECT_NEAR(ball_volume(3, 2.0), 8.0 * unit_ball_volume(3), 1e-13);
    EXPECT_THROW(unit_ball_volume(0), Error);
}

TEST(SpecFun, QuadratureKnownIntegrals) {
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-12);
    EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, 0.0, INFINITY).value,
                0.5 * std::sqrt(std::numbers::pi), 1e-12);
    EXPECT_NEAR(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0).value, 2.0, 1e-9);
    EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 3.0, INFINITY).value, std::exp(-3.0), 1e-13);
    const auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-15);
    EXPECT_EQ(r.subdivisions, 0u);
    EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0).value, 0.0);
}

TEST(SpecFun, QuadratureReportsNonConvergence) {
    QuadratureSpec spec;
    spec.max_subdivisions = 5;
    try {
        integrate([](double x) { return std::sin(1.0 / x) / x; }, 1e-6, 1.0, spec);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConvergenceFailure);
        EXPECT_TRUE(std::isfinite(e.best_estimate()));
        EXPECT_GT(e.error_estimate(), 0.0);
    }
    EXPECT_THROW(integrate([](double x) { return x; }, 1.0, 0.0), Error);
    spec.abs_tol = 0.0;
    EXPECT_THROW(integrate([](double x) { return x; }, 0.0, 1.0, spec), Error);
}
