#include "oracles.hpp"
#include "zfscale/errors.hpp"
#include "zfscale/ising.hpp"

#include <gtest/gtest.h>

using namespace zfscale;

namespace {

Fn1 pk(double c, double w = 0.4, double ph = 0.0) {
    return [=](double b) { return oracle::packet(b, c, w, ph); };
}

}  // namespace

TEST(Fermi, Anticommutator) {
    const auto f = TestFunction1D::gaussian(0.2, 0.6, 0.3), g = TestFunction1D::gaussian(-0.4, 0.5);
    const std::vector<StatePair> els = {{{}, {}}, {{pk(0.1)}, {pk(-0.2, 0.5, 0.4)}}, {{pk(0.0)}, {}}};
    EXPECT_LT(anticommutator_check(f, g, els, QuadratureConfig{}), 1e-9);
}

TEST(Fermi, CarNorm) {
    const auto r = composite_gauss_legendre(-1, 1, 1, 10);
    const TruncatedFock tf(rapidity_kernel(ScatteringFunction::ising()), r.x, r.w, 3);
    std::vector<cplx> psi;
    for (double x : r.x) psi.push_back(std::exp(cplx(-x * x, 0.5 * x)));
    const auto n = car_norm_check(psi, tf);
    double direct = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) direct += r.w[i] * std::norm(psi[i]);
    EXPECT_NEAR(n.grid, std::sqrt(direct), 1e-14);
    EXPECT_NEAR(n.computed, n.grid, 1e-10);
}

TEST(EnergyDensity, SelectionRule) {
    const auto h = TestFunction1D::gaussian(0.0, 1.0);
    const QuadratureConfig cfg;
    EXPECT_TRUE(energy_density_matrix_element(h, {pk(0.0)}, {pk(0.1), pk(-0.1)}, cfg).selection_rule_violation);
    const auto e = energy_density_matrix_element(h, {pk(0.0)}, {}, cfg);
    EXPECT_TRUE(e.selection_rule_violation);
    EXPECT_EQ(e.value, cplx(0.0));
    EXPECT_FALSE(energy_density_matrix_element(h, {}, {pk(0.1), pk(-0.1, 0.4, 0.3)}, cfg).selection_rule_violation);
}

TEST(EnergyDensity, IntegralIsHamiltonian) {
    const auto r = integral_T_element({pk(0.0)}, {pk(0.0)}, QuadratureConfig{});
    const cplx h = oracle::trapezoid([](double b) { return std::norm(oracle::packet(b, 0.0, 0.4)) * std::exp(b); }, -6,
                                     6, 1200);
    EXPECT_LT(oracle::relative(r.h_value, h), 1e-10);
    EXPECT_LT(r.rel, 1e-6);
    ASSERT_EQ(r.sweep.size(), 4u);
}

TEST(EnergyDensity, TwoPointShape) {
    const auto h1 = TestFunction1D::gaussian(0.0, 0.5), h2 = TestFunction1D::gaussian(1.0, 0.7);
    const QuadratureConfig cfg;
    const cplx w = energy_two_point(h1, h2, cfg);
    const cplx shape = energy_two_point_shape(h1, h2, cfg);
    EXPECT_NEAR((48 * M_PI * M_PI * w / shape).real(), 0.5, 1e-6);
}

TEST(CentralCharge, ClosedAndFit) {
    const auto r = central_charge_extract(QuadratureConfig{}, {{0.5, 0.5, 1.0}, {0.8, 0.6, 0.7}});
    EXPECT_NEAR(r.c_closed, 0.5, 1e-6);
    EXPECT_NEAR(r.c_fit, 0.5, 1e-3);
    ASSERT_EQ(r.rows.size(), 2u);
    for (const auto& row : r.rows) EXPECT_NEAR(row.c_fit, 0.5, 1e-3);
    EXPECT_THROW(central_charge_extract(QuadratureConfig{}, {}), FitIllConditioned);
    EXPECT_THROW(central_charge_extract(QuadratureConfig{}, {{0.0, 0.5, 1.0}}), FitIllConditioned);
}

TEST(CentralCharge, LuscherMack) {
    const auto lm = luscher_mack_residual(TestFunction1D::gaussian(0.0, 0.5), TestFunction1D::gaussian(0.6, 0.6),
                                          QuadratureConfig{});
    EXPECT_LT(lm.residual, 1e-3 * std::abs(lm.rhs));
}
