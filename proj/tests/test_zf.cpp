#include "oracles.hpp"
#include "zfscale/errors.hpp"
#include "zfscale/zf.hpp"

#include <gtest/gtest.h>

using namespace zfscale;

namespace {

const double kG = std::sqrt(4 * M_PI / 5);

Fn1 pk(double c, double w, double ph = 0.0) {
    return [=](double b) { return oracle::packet(b, c, w, ph); };
}

int vacuum_terms(const Word& w) { return int(vacuum_part(normal_order(w, Mode::Rapidity)).terms.size()); }

}  // namespace

TEST(NormalOrder, SingleExchange) {
    const auto nf = normal_order({ann(0), cre(1)}, Mode::Momentum);
    ASSERT_EQ(nf.terms.size(), 2u);
    int contracted = 0;
    for (const auto& t : nf.terms) {
        if (t.residual.empty()) {
            ++contracted;
            ASSERT_EQ(t.contractions.size(), 1u);
            EXPECT_EQ(t.contractions[0], std::make_pair(0, 1));
            EXPECT_TRUE(t.s_factors.empty());
        } else {
            ASSERT_EQ(t.residual.size(), 2u);
            EXPECT_EQ(t.residual[0].kind, GenKind::Create);
            ASSERT_EQ(t.s_factors.size(), 1u);
            EXPECT_EQ(t.s_factors[0], std::make_pair(1, 0));
        }
    }
    EXPECT_EQ(contracted, 1);
}

TEST(NormalOrder, ResidualsAreNormalOrdered) {
    const auto nf = normal_order({ann(0), cre(1), ann(2), cre(3), cre(4), ann(5)}, Mode::Rapidity);
    for (const auto& t : nf.terms) {
        bool seen_ann = false;
        for (const auto& g : t.residual) {
            if (g.kind == GenKind::Annihilate) seen_ann = true;
            else EXPECT_FALSE(seen_ann);
        }
        EXPECT_EQ(2 * t.contractions.size() + t.residual.size(), 6u);
    }
}

TEST(NormalOrder, VacuumTermCounts) {
    EXPECT_EQ(vacuum_terms({cre(0), ann(1)}), 0);
    EXPECT_EQ(vacuum_terms({cre(0)}), 0);
    EXPECT_EQ(vacuum_terms({ann(0), ann(1), cre(2), cre(3)}), 2);
    EXPECT_EQ(vacuum_terms({ann(0), ann(1), ann(2), cre(3), cre(4), cre(5)}), 6);
    EXPECT_EQ(vacuum_terms({ann(0), ann(1), ann(2), ann(3), cre(4), cre(5), cre(6), cre(7)}), 24);
    EXPECT_EQ(vacuum_terms({ann(0), cre(1), ann(2), cre(3)}), 1);
}

TEST(NormalOrder, Errors) {
    Word w;
    for (int i = 0; i < 9; ++i) w.push_back(cre(i));
    EXPECT_THROW(normal_order(w, Mode::Rapidity), WordTooLong);
    EXPECT_THROW(normal_order({ann(0), cre(0)}, Mode::Rapidity), InvalidWord);
}

TEST(NormalOrder, Json) {
    const auto j = normal_order({ann(0), cre(1)}, Mode::Rapidity).to_json();
    EXPECT_EQ(j["mode"], "rapidity");
    EXPECT_EQ(j["terms"].size(), 2u);
    EXPECT_EQ(normal_order({ann(0), cre(1)}, Mode::Momentum).to_json()["terms"][0]["weight"], "omega*delta");
}

TEST(Discrete, TwoByTwoAgainstHandExpansion) {
    const std::vector<double> x = {-0.4, 0.3}, w = {0.5, 0.25};
    const auto S = ScatteringFunction::sinh_gordon(kG);
    const TwoPointKernel S2 = [&](double a, double b) { return S.at(a - b); };
    const auto nf = normal_order({ann(0), ann(1), cre(2), cre(3)}, Mode::Rapidity);
    // <z_i z_j z+_k z+_l> = d_jk d_il + S(x_k - x_j) d_jl d_ik
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    cplx e = 0.0;
                    if (j == k && i == l) e += 1.0 / (w[j] * w[i]);
                    if (j == l && i == k) e += S.at(x[k] - x[j]) / (w[j] * w[i]);
                    const cplx got = evaluate_discrete(nf, {{0, i}, {1, j}, {2, k}, {3, l}}, x, w, S2);
                    EXPECT_LT(std::abs(got - e), 1e-13);
                }
}

TEST(Engine, RapidityFourPoint) {
    const auto S = ScatteringFunction::sinh_gordon(kG);
    const auto ctx = EvalContext::rapidity(S);
    const Fn1 a = pk(0.2, 0.5, 0.3), b = pk(-0.3, 0.6), c = pk(0.1, 0.4, -0.2), d = pk(-0.1, 0.7, 0.5);
    const auto nf = vacuum_part(normal_order({ann(0), ann(1), cre(2), cre(3)}, Mode::Rapidity));
    const cplx got = evaluate_vacuum_expectation(nf, ctx, {{0, {a}}, {1, {b}}, {2, {c}}, {3, {d}}}, QuadratureConfig{});
    const cplx direct =
        oracle::trapezoid([&](double u) { return a(u) * d(u); }, -8, 8, 800) *
            oracle::trapezoid([&](double u) { return b(u) * c(u); }, -8, 8, 800) +
        oracle::trapezoid2([&](double u, double v) { return a(u) * c(u) * b(v) * d(v) * S.at(u - v); }, -8, 8, 400);
    EXPECT_LT(std::abs(got - direct), 1e-10);
}

TEST(Engine, MassiveAndMasslessTwoPoint) {
    const auto S = ScatteringFunction::ising();
    const Fn1 f = [](double p) { return p * std::exp(-(p - 1) * (p - 1)); };
    const Fn1 g = [](double p) { return cplx(p, 0.3 * p * p) * std::exp(-p * p); };
    const auto nf = vacuum_part(normal_order({ann(0), cre(1)}, Mode::Momentum));
    const QuadratureConfig cfg;
    const double m = 0.7;
    const cplx massive = evaluate_vacuum_expectation(nf, EvalContext::massive(S, m), {{0, {f}}, {1, {g}}}, cfg);
    const cplx massive_direct = oracle::trapezoid(
        [&](double t) { return f(m * std::sinh(t)) * g(m * std::sinh(t)); }, -8, 8, 3000);
    EXPECT_LT(std::abs(massive - massive_direct), 1e-10);

    const cplx massless = evaluate_vacuum_expectation(nf, EvalContext::massless(S), {{0, {f}}, {1, {g}}}, cfg);
    const cplx massless_direct = oracle::trapezoid(
        [&](double t) { return f(-std::exp(t)) * g(-std::exp(t)) + f(std::exp(t)) * g(std::exp(t)); }, -40, 4, 20000);
    EXPECT_LT(std::abs(massless - massless_direct), 1e-9);

    Arg right{f, kRightBranch};
    const cplx r = evaluate_vacuum_expectation(nf, EvalContext::massless(S), {{0, right}, {1, {g}}}, cfg);
    const cplx r_direct = oracle::trapezoid([&](double t) { return f(std::exp(t)) * g(std::exp(t)); }, -40, 4, 20000);
    EXPECT_LT(std::abs(r - r_direct), 1e-9);
}

TEST(Engine, MasslessKernelBranches) {
    const auto S = ScatteringFunction::sinh_gordon(kG);
    const auto ctx = EvalContext::massless(S);
    EXPECT_EQ(ctx.kernel(0.3, 0, 1.2, 1), cplx(1.0));
    EXPECT_LT(std::abs(ctx.kernel(0.3, 1, 1.2, 1) - S.at(-0.9)), 1e-15);
    EXPECT_LT(std::abs(ctx.kernel(0.3, 0, 1.2, 0) - S.at(0.9)), 1e-15);
    EXPECT_TRUE(ctx.constant_between(0, 1));
    EXPECT_FALSE(ctx.constant_between(1, 1));
    EXPECT_THROW(EvalContext::massive(S, 0.0), InvalidArgument);
}

TEST(Engine, Coupling) {
    const auto ctx = EvalContext::rapidity(ScatteringFunction::ising());
    const Fn1 a = pk(0.1, 0.5), b = pk(0.3, 0.4, 1.0);
    const auto nf = vacuum_part(normal_order({ann(0), cre(1)}, Mode::Rapidity));
    const Coupling c{{0}, [](const std::vector<double>& v) { return cplx(std::cos(v[0])); }};
    const cplx got = evaluate_vacuum_expectation(nf, ctx, {{0, {a}}, {1, {b}}}, QuadratureConfig{}, {c});
    const cplx direct = oracle::trapezoid([&](double u) { return a(u) * b(u) * std::cos(u); }, -8, 8, 800);
    EXPECT_LT(std::abs(got - direct), 1e-11);
}

TEST(Operators, MatrixElementsAndAdjoint) {
    const auto S = ScatteringFunction::sinh_gordon(kG);
    const auto ctx = EvalContext::rapidity(S);
    const QuadratureConfig cfg;
    const Fn1 a = pk(0.1, 0.5, 0.4), b = pk(-0.2, 0.6, -0.3), c = pk(0.4, 0.5, 0.9);
    const cplx direct = oracle::trapezoid([&](double u) { return std::conj(a(u)) * b(u); }, -8, 8, 800);
    EXPECT_LT(std::abs(matrix_element(creation_word({{a}}), OperatorExpr::identity(), creation_word({{b}}), ctx, cfg) -
                       direct),
              1e-11);
    // <z+(a) z+(b) Omega, z+(c) Omega> vanishes; <Omega, z(c) z+(b) Omega> pairs without conjugation.
    EXPECT_EQ(matrix_element(creation_word({{a}, {b}}), OperatorExpr::identity(), creation_word({{c}}), ctx, cfg),
              cplx(0.0));
    const auto X = OperatorExpr::single(GenKind::Annihilate, {c}) * OperatorExpr::single(GenKind::Create, {b});
    EXPECT_LT(std::abs(vacuum_expectation(X, ctx, cfg) -
                       oracle::trapezoid([&](double u) { return c(u) * b(u); }, -8, 8, 800)),
              1e-11);
    // <A Psi, Phi> = conj <Phi, A Psi> for a two-particle bra and ket
    const auto psi = creation_word({{a}, {b}}), phi = creation_word({{c}, {a}});
    const auto A = OperatorExpr::single(GenKind::Create, {b}) * OperatorExpr::single(GenKind::Annihilate, {c}).scaled(cplx(0.3, 0.7));
    const cplx lhs = matrix_element(phi, A, psi, ctx, cfg);
    const cplx rhs = std::conj(matrix_element(psi, A.adjoint(), phi, ctx, cfg));
    EXPECT_LT(std::abs(lhs - rhs), 1e-11);
    EXPECT_LT(std::abs((A + A).words.size() - 2.0), 1e-15);
}
