#include "oracles.hpp"
#include "zfscale/errors.hpp"
#include "zfscale/numerics.hpp"
#include "zfscale/testfn.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <random>

using namespace zfscale;

TEST(Integrate1D, GaussianGivesSqrtPi) {
    QuadratureConfig cfg;
    const auto r = integrate_1d([](double x) { return cplx(std::exp(-x * x)); }, cfg);
    EXPECT_NEAR(r.value.real(), std::sqrt(M_PI), 1e-12);
    EXPECT_EQ(r.value.imag(), 0.0);
}

TEST(Integrate1D, ZeroIntegrand) {
    QuadratureConfig cfg;
    EXPECT_EQ(integrate_1d([](double) { return cplx(0.0); }, cfg).value, cplx(0.0));
}

TEST(Integrate1D, ExponentialSubstitution) {
    QuadratureConfig cfg;
    const auto r = integrate_1d([](double b) { return cplx(std::exp(b) * std::exp(-std::exp(b))); }, cfg);
    EXPECT_NEAR(r.value.real(), 1.0, 1e-10);
}

TEST(Integrate1D, OscillatoryGaussian) {
    QuadratureConfig cfg;
    const auto r = integrate_1d([](double x) { return std::exp(cplx(-x * x, 5 * x)); }, cfg);
    EXPECT_NEAR(std::abs(r.value - std::sqrt(M_PI) * std::exp(-25.0 / 4)), 0.0, 1e-12);
}

TEST(Integrate1D, ErrorEstimateMeetsTolerance) {
    QuadratureConfig cfg;
    const auto r = integrate_1d([](double x) { return cplx(std::cos(3 * x) / std::cosh(x)); }, cfg);
    EXPECT_LE(r.error, std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value)));
    EXPECT_NEAR(r.value.real(), M_PI / std::cosh(1.5 * M_PI), 1e-11);
}

TEST(Integrate1D, HalvingAbsTolNeverIncreasesError) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-16;
    auto f = [](double x) { return cplx(std::exp(-x * x / 3) * std::sin(2 * x + 0.3)); };
    double prev = integrate_1d(f, cfg).error;
    for (int k = 0; k < 4; ++k) {
        cfg.abs_tol *= 0.5;
        const double e = integrate_1d(f, cfg).error;
        EXPECT_LE(e, prev);
        prev = e;
    }
}

TEST(Integrate1D, LinearInIntegrand) {
    QuadratureConfig cfg;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 5; ++k) {
        const double c1 = u(rng), c2 = u(rng);
        const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
        Fn1 f = [c1](double x) { return cplx(std::exp(-(x - c1) * (x - c1))); };
        Fn1 g = [c2](double x) { return std::exp(cplx(-(x - c2) * (x - c2) / 2, x)); };
        const cplx lhs = integrate_1d([&](double x) { return a * f(x) + b * g(x); }, cfg).value;
        const cplx rhs = a * integrate_1d(f, cfg).value + b * integrate_1d(g, cfg).value;
        EXPECT_LT(std::abs(lhs - rhs), 2 * cfg.abs_tol * (std::abs(a) + std::abs(b)) + 1e-10 * std::abs(rhs));
    }
}

TEST(Integrate1D, CutoffFrom30To40IsStableForPacketTransforms) {
    QuadratureConfig c30, c40;
    c30.cutoff = 30;
    const auto f = TestFunction1D::gaussian(0.4, 0.7, 0.5);
    auto g = [&](double b) { return std::norm(f.hat(+1, b)) + cplx(0.0, std::norm(f.hat(-1, b))); };
    EXPECT_LT(std::abs(integrate_1d(g, c30).value - integrate_1d(g, c40).value), 1e-12);
}

TEST(Integrate1D, ExhaustedPanelsRaiseNonConvergence) {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 9;
    EXPECT_THROW(integrate_1d([](double x) { return cplx(std::exp(-x * x) * std::sin(200 * x)); }, cfg),
                 NonConvergence);
}

TEST(Integrate1D, InvalidConfigRejected) {
    QuadratureConfig cfg;
    cfg.abs_tol = -1;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(IntegrateND, ProductOfGaussians) {
    QuadratureConfig cfg;
    const auto r = integrate_nd([](const std::vector<double>& x) { return cplx(std::exp(-x[0] * x[0] - x[1] * x[1])); },
                                Box{{-10, 10}, {-10, 10}}, cfg);
    EXPECT_NEAR(r.value.real(), M_PI, 1e-10);
}

TEST(IntegrateND, ZeroOnThePlane) {
    QuadratureConfig cfg;
    EXPECT_EQ(integrate_nd([](const std::vector<double>&) { return cplx(0.0); }, 2, cfg).value, cplx(0.0));
}

TEST(IntegrateND, CoupledSinhGordonIntegrandMatchesTrapezoid) {
    QuadratureConfig cfg;
    const double g = std::sqrt(4 * M_PI / 5);
    auto f = [g](double a, double b) { return std::exp(-a * a - b * b) * oracle::sinh_gordon(a - b, g); };
    const cplx v = integrate_nd([&](const std::vector<double>& x) { return f(x[0], x[1]); }, Box{{-8, 8}, {-8, 8}}, cfg).value;
    EXPECT_LT(std::abs(v - oracle::trapezoid2(f, -8, 8, 400)), 1e-9);
}

TEST(IntegrateND, TooManyDimensions) {
    QuadratureConfig cfg;
    EXPECT_THROW(integrate_nd([](const std::vector<double>&) { return cplx(1.0); }, 5, cfg), DimensionTooLarge);
}

TEST(FixedRule, IntegratesPolynomialsExactly) {
    const auto r = composite_gauss_legendre(0, 2, 3, 20);
    double s = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], 10);
    EXPECT_NEAR(s, std::pow(2.0, 11) / 11, 1e-10);
    EXPECT_THROW(composite_gauss_legendre(0, 1, 1, 7), InvalidArgument);
}

TEST(Contour, ZeroIntegrand) {
    QuadratureConfig cfg;
    EXPECT_EQ(contour_shift_compare(StripIntegrand::zero(), cfg), 0.0);
}

TEST(Contour, MissingContinuationIsRejected) {
    QuadratureConfig cfg;
    StripIntegrand g(std::vector<StripFactor>{StripFactor{"opaque", {}}});
    EXPECT_THROW(contour_shift_compare(g, cfg), NonAnalyticInput);
}

TEST(Contour, EntireDecayingIntegrandShiftsFreely) {
    QuadratureConfig cfg;
    StripIntegrand g({{"gauss", [](cplx z) { return std::exp(-z * z / 4.0); }}});
    EXPECT_LT(contour_shift_compare(g, cfg), 1e-10);
    EXPECT_NEAR(integrate_contour(g, Contour{0.0}, cfg).value.real(), std::sqrt(4 * M_PI), 1e-10);
}

TEST(Parallel, EveryIndexVisitedOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, ExceptionsPropagate) {
    EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                     if (i == 7) throw InvalidArgument("boom");
                 }),
                 InvalidArgument);
}
