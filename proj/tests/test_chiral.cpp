#include "oracles.hpp"
#include "zfscale/chiral.hpp"
#include "zfscale/errors.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace zfscale;

namespace {

const double kG = 1.5853309190424043;

Fn1 pk(double c, double w = 0.5, double ph = 0.0) {
    return [=](double b) { return oracle::packet(b, c, w, ph); };
}

std::vector<std::vector<double>> samples(int n, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<std::vector<double>> out(count, std::vector<double>(n));
    for (auto& s : out)
        for (auto& x : s) x = u(rng);
    return out;
}

}  // namespace

TEST(Chiral, FieldTwoPoint) {
    const auto S = ScatteringFunction::sinh_gordon(kG);
    const auto f = TestFunction1D::gaussian(0.3, 0.7, 0.5).derivative();
    const auto g = TestFunction1D::gaussian(-0.2, 0.6).derivative();
    const cplx got = vacuum_expectation(chiral_field(f) * chiral_field(g), EvalContext::rapidity(S), QuadratureConfig{});
    const cplx direct = oracle::trapezoid([&](double b) { return f.hat(-1, b) * g.hat(1, b); }, -20, 6, 6000);
    EXPECT_LT(std::abs(got - direct), 1e-9);
}

TEST(Chiral, AffineAction) {
    const Fn1 p = pk(0.2, 0.5, 0.3);
    const Fn1 u = affine_act(p, 0.7, -0.4);
    for (double b : {-1.0, 0.0, 0.5})
        EXPECT_LT(std::abs(u(b) - std::exp(cplx(0, 0.7 * std::exp(b))) * p(b - 0.4)), 1e-15);
    const Fn1 id = affine_act(p, 0.0, 0.0);
    EXPECT_EQ(id(0.3), p(0.3));
}

TEST(Chiral, CommutatorKernelAgainstQuadrature) {
    const auto S = ScatteringFunction::sinh_gordon(kG);
    const Fn1 a = pk(0.1, 0.5, 0.2), b = pk(-0.3, 0.6);
    const auto sm = samples(2, 3, 4);
    for (int sign : {1, -1}) {
        const auto k = commutator_kernel(S, a, b, sign, sm, QuadratureConfig{});
        for (std::size_t i = 0; i < sm.size(); ++i) {
            const cplx d = double(sign) * oracle::trapezoid(
                                              [&](double x) {
                                                  return a(x) * b(x) * S.at(sign * (x - sm[i][0])) *
                                                         S.at(sign * (x - sm[i][1]));
                                              },
                                              -8, 8, 1600);
            EXPECT_LT(std::abs(k[i] - d), 1e-11);
        }
    }
    EXPECT_THROW(commutator_kernel(S, a, b, 0, sm, QuadratureConfig{}), InvalidArgument);
}

TEST(Chiral, HalfLineLocality) {
    const auto S = ScatteringFunction::sinh_gordon(kG);
    const auto f = TestFunction1D::bump(1, 2), g = TestFunction1D::bump(-2, -1);
    for (int n = 0; n <= 2; ++n)
        EXPECT_LT(halfline_locality_residual(S, f, g, samples(n, 3, 11 + n), QuadratureConfig{}), 1e-6) << n;
    EXPECT_THROW(halfline_locality_residual(S, g, f, samples(1, 1, 1), QuadratureConfig{}), SupportsOverlap);
}

TEST(Chiral, OverlapNegativeControl) {
    const auto f = TestFunction1D::bump(-1.5, 1.5), g = TestFunction1D::bump(-1, 2);
    const double r = halfline_locality_residual(ScatteringFunction::ising(), f, g, samples(1, 2, 3),
                                                QuadratureConfig{}, true);
    EXPECT_GT(r, 1e-3);
}

TEST(Chiral, SplitFactorization) {
    const auto S = ScatteringFunction::sinh_gordon(kG);
    const auto r = split_factorization_check(S, {pk(0.1), pk(-0.3, 0.6, 0.4)}, {pk(0.2)}, {pk(0.0, 0.5, -0.2), pk(-0.1)},
                                             {pk(0.3, 0.7)}, QuadratureConfig{});
    EXPECT_GT(std::abs(r.lhs), 1e-3);
    EXPECT_LT(r.residual, 1e-10);
    const auto z = split_factorization_check(S, {pk(0.1)}, {pk(0.2)}, {pk(0.0), pk(0.3)}, {}, QuadratureConfig{});
    EXPECT_LT(std::abs(z.lhs), 1e-14);
}

TEST(Chiral, AffineCovariance) {
    const auto S = ScatteringFunction::sinh_gordon(kG);
    const auto f = TestFunction1D::gaussian(0.2, 0.5).derivative();
    const double r = affine_covariance_check(S, f, 0.4, 0.3, {pk(0.1), pk(-0.2, 0.5, 0.3)}, {pk(0.0)}, QuadratureConfig{});
    EXPECT_LT(r, 1e-8);
}

TEST(Clustering, OffDiagonalDecay) {
    const auto S = ScatteringFunction::make_limit_family(-1, {cplx(0, M_PI / 6)});
    const auto rows = dilation_clustering(S, pk(-2.0), pk(-2.2, 0.5, 0.4), {pk(-1.0)}, {pk(-1.2, 0.6, 0.2)},
                                          {0, 4, 8}, 3);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_LT(rows.back().magnitude, 1e-3 * rows.front().magnitude);
}

TEST(Clustering, CommutatorApproachesLimit) {
    const auto S = ScatteringFunction::make_limit_family(-1, {cplx(0, M_PI / 6)});
    const auto rows = dilation_clustering(S, pk(-2.0), pk(-2.2, 0.5, 0.4), {pk(-1.0)}, {pk(-1.2, 0.6, 0.2)},
                                          {0, 4, 8}, 4);
    EXPECT_LT(rows[2].magnitude, rows[1].magnitude);
    EXPECT_LT(rows[1].magnitude, rows[0].magnitude);
    EXPECT_LT(rows[2].magnitude, 1e-3 * rows[0].magnitude);
    const cplx k = clustering_commutator_kernel(S, pk(-2.0), pk(-2.2, 0.5, 0.4), {pk(-1.0)}, {pk(-1.2, 0.6, 0.2)}, 4);
    EXPECT_LT(std::abs(k - rows[1].value), 1e-8);
    EXPECT_THROW(dilation_clustering(S, pk(-2.0), pk(-2.2), {pk(-1.0)}, {}, {0}, 3), InvalidArgument);
    EXPECT_THROW(dilation_clustering(S, pk(-2.0), pk(-2.2), {}, {}, {0}, 5), InvalidArgument);
}
