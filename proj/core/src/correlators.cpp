#include "zfscale/correlators.hpp"

#include "zfscale/chiral.hpp"
#include "zfscale/errors.hpp"
#include "zfscale/fock.hpp"

#include <algorithm>
#include <cmath>

namespace zfscale {

namespace {

constexpr double kWindowThreshold = 1e-17;

// Rapidity window outside which |g(t)| stays below threshold * max.
std::pair<double, double> auto_window(const std::function<cplx(double)>& g, double B) {
    const int N = 1600;
    std::vector<double> mag(N + 1);
    double peak = 0.0;
    for (int i = 0; i <= N; ++i) {
        mag[i] = std::abs(g(-B + 2.0 * B * i / N));
        peak = std::max(peak, mag[i]);
    }
    if (peak == 0.0) return {0.0, 0.0};
    int first = 0, last = N;
    while (first < N && mag[first] < kWindowThreshold * peak) ++first;
    while (last > 0 && mag[last] < kWindowThreshold * peak) --last;
    const double h = 2.0 * B / N;
    return {std::max(-B, -B + first * h - 1.0), std::min(B, -B + last * h + 1.0)};
}

Arg field_arg(const TestFunction2D& f, double mass, double lambda, int sign, double B) {
    Arg a{[f, mass, lambda, sign](double p) { return f.mass_shell(lambda * mass, sign, lambda * p); }};
    std::function<cplx(double)> probe;
    if (mass > 0)
        probe = [&](double t) { return a.f(mass * std::sinh(t)); };
    else
        probe = [&](double t) { return std::abs(a.f(std::exp(t))) + std::abs(a.f(-std::exp(t))); };
    const auto [lo, hi] = auto_window(probe, B);
    a.lo = lo;
    a.hi = hi;
    return a;
}

cplx plain_npoint(const MassKernel& K, double lambda, const std::vector<TestFunction2D>& fs,
                  const QuadratureConfig& cfg) {
    const double m = K.mass();
    OperatorExpr expr = OperatorExpr::identity();
    for (const auto& f : fs) {
        OperatorExpr phi = OperatorExpr::single(GenKind::Create, field_arg(f, m, lambda, +1, cfg.cutoff)) +
                           OperatorExpr::single(GenKind::Annihilate, field_arg(f, m, lambda, -1, cfg.cutoff));
        expr = expr * phi;
    }
    const EvalContext ctx = K.massless() ? EvalContext::massless(K.base()) : EvalContext::massive(K.base(), m);
    return vacuum_expectation(expr, ctx, cfg);
}

}  // namespace

OperatorExpr scaled_field(const TestFunction2D& f, double mass, double lambda) {
    Arg plus{[f, mass, lambda](double p) { return f.mass_shell(lambda * mass, +1, lambda * p); }};
    Arg minus{[f, mass, lambda](double p) { return f.mass_shell(lambda * mass, -1, lambda * p); }};
    return OperatorExpr::single(GenKind::Create, plus) + OperatorExpr::single(GenKind::Annihilate, minus);
}

cplx npoint(const CorrelatorRequest& req, const QuadratureConfig& cfg) {
    const std::size_t n = req.fields.size();
    if (n > kMaxFields) throw InvalidArgument("at most 4 fields are supported");
    if (!(req.lambda > 0)) throw InvalidArgument("lambda must be positive");
    if (n % 2 == 1) return 0.0;
    if (n == 0) return 1.0;
    const bool primed = req.fields.front().primed;
    for (const auto& fs : req.fields)
        if (fs.primed != primed) throw InvalidArgument("mixed primed and unprimed fields are not supported");
    std::vector<TestFunction2D> fs;
    for (const auto& f : req.fields) fs.push_back(primed ? f.f.reflect() : f.f);
    const cplx v = plain_npoint(req.kernel, req.lambda, fs, cfg);
    // U(j) phi(f^j) U(j) products collapse to the antiunitary image of the unprimed correlator.
    return primed ? std::conj(v) : v;
}

std::vector<double> default_lambdas() {
    std::vector<double> l;
    for (int k = 0; k <= 6; ++k) l.push_back(std::pow(10.0, -k));
    return l;
}

ConvergenceReport scaling_limit_experiment(const MassKernel& kernel,
                                           const std::vector<FieldSpec>& fields,
                                           const std::vector<double>& lambdas,
                                           const QuadratureConfig& cfg, double noise) {
    for (const auto& f : fields)
        if (!f.f.is_derivative()) throw MasslessInfraredDivergent("scaling limit needs derivative test functions");
    const cplx limit = npoint({kernel.with_mass(0.0), 1.0, fields}, cfg);
    ConvergenceReport rep;
    rep.rows.resize(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t i) {
        const double lam = lambdas[i];
        const cplx v = npoint({kernel, lam, fields}, cfg);
        const double d = std::abs(v - limit);
        const double scale = std::abs(limit);
        rep.rows[i] = {lam, v, limit, d, scale > 0 ? d / scale : d};
    });
    rep.verdict = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].rel_diff > rep.rows[i - 1].rel_diff + noise) rep.verdict = false;
    return rep;
}

FieldSplitElement field_split_element(const ScatteringFunction& S, const TestFunction2D& f,
                                      const LightRayState& bra, const LightRayState& ket,
                                      const QuadratureConfig& cfg) {
    if (!f.is_derivative()) throw InvalidArgument("field split needs f = d_k g");
    const int k = f.derivative_index();
    auto word = [](const LightRayState& s) {
        std::vector<Arg> args;
        for (const auto& p : s.left) {
            Arg a{[p](double q) { return p(std::log(-q)); }};
            a.branches = kLeftBranch;
            args.push_back(a);
        }
        for (const auto& c : s.right) {
            Arg a{[c](double q) { return c(std::log(q)); }};
            a.branches = kRightBranch;
            args.push_back(a);
        }
        return creation_word(args);
    };
    FieldSplitElement out;
    out.lhs = matrix_element(word(bra), scaled_field(f, 0.0, 1.0), word(ket),
                             EvalContext::massless(S), cfg);

    const auto [gl, gr] = chiral_components(f.parent());
    const EvalContext rap = EvalContext::rapidity(S);
    auto conj_list = [](const std::vector<Fn1>& v) {
        std::vector<Fn1> out;
        for (const auto& p : v) out.push_back([p](double x) { return std::conj(p(x)); });
        return out;
    };
    auto inner = [&](const std::vector<Fn1>& a, const std::vector<Fn1>& b) -> cplx {
        if (a.size() != b.size()) return 0.0;
        return creation_word_inner_product(rap, a, b, cfg);
    };

    const Arg lp{[gl](double b) { return std::conj(gl.hat(+1, b)); }};
    const Arg lm{[gl](double b) { return std::conj(gl.hat(-1, b)); }};
    const OperatorExpr left_field =
        OperatorExpr::single(GenKind::Create, lp) + OperatorExpr::single(GenKind::Annihilate, lm);
    const cplx A_l = matrix_element(chiral_state(conj_list(bra.left)), left_field,
                                    chiral_state(conj_list(ket.left)), rap, cfg);
    const cplx R0 = inner(bra.right, ket.right);
    const cplx L0 = std::conj(inner(conj_list(bra.left), conj_list(ket.left)));
    const cplx A_r = matrix_element(chiral_state(bra.right), chiral_field(gr), chiral_state(ket.right), rap, cfg);
    const double twist = std::pow(double(S.epsilon()), double(ket.left.size()));
    const double sk = k % 2 == 0 ? 1.0 : -1.0;
    out.rhs = -(std::conj(A_l) * R0 + sk * twist * L0 * A_r) / std::sqrt(2.0 * M_PI);
    return out;
}

double massless_chiral_decomposition_check(
    const ScatteringFunction& S, const TestFunction2D& f,
    const std::vector<std::pair<LightRayState, LightRayState>>& elements,
    const QuadratureConfig& cfg) {
    double worst = 0.0;
    for (const auto& [bra, ket] : elements) {
        const auto e = field_split_element(S, f, bra, ket, cfg);
        worst = std::max(worst, std::abs(e.lhs - e.rhs));
    }
    return worst;
}

}  // namespace zfscale
