#include "zfscale/chiral.hpp"

#include "zfscale/errors.hpp"

#include <algorithm>
#include <cmath>

namespace zfscale {

OperatorExpr chiral_field(const TestFunction1D& f) {
    Arg plus{[f](double b) { return f.hat(+1, b); }};
    Arg minus{[f](double b) { return f.hat(-1, b); }};
    return OperatorExpr::single(GenKind::Create, plus) +
           OperatorExpr::single(GenKind::Annihilate, minus);
}

Arg rapidity_arg(Fn1 psi, double lo, double hi) {
    Arg a{std::move(psi)};
    a.lo = lo;
    a.hi = hi;
    return a;
}

OperatorExpr chiral_state(const std::vector<Fn1>& psis) {
    std::vector<Arg> args;
    for (const auto& p : psis) args.push_back(rapidity_arg(p));
    return creation_word(args);
}

Fn1 affine_act(const Fn1& psi, double xi, double lambda) {
    return [psi, xi, lambda](double b) {
        return std::exp(cplx(0.0, xi * std::exp(b))) * psi(b + lambda);
    };
}

std::vector<cplx> commutator_kernel(const ScatteringFunction& S, const Fn1& psi1, const Fn1& psi2,
                                    int sign, const std::vector<std::vector<double>>& samples,
                                    const QuadratureConfig& cfg) {
    if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
    std::vector<cplx> out(samples.size());
    const double s = sign;
    const int panels = std::max(cfg.initial_panels, 32);
    parallel_for(samples.size(), [&](std::size_t i) {
        const auto& beta = samples[i];
        auto integrand = [&](double b0) -> cplx {
            cplx v = psi1(b0);
            if (v == 0.0) return 0.0;
            v *= psi2(b0);
            if (v == 0.0) return 0.0;
            for (double bk : beta) v *= S.at(s * b0 - s * bk);
            return v;
        };
        out[i] = s * integrate(integrand, -cfg.cutoff, cfg.cutoff, cfg, panels).value;
    });
    return out;
}

double halfline_locality_residual(const ScatteringFunction& S, const TestFunction1D& f,
                                  const TestFunction1D& g,
                                  const std::vector<std::vector<double>>& samples,
                                  const QuadratureConfig& cfg, bool allow_overlap) {
    if (f.is_zero() || g.is_zero()) return 0.0;
    if (!allow_overlap && !(f.support().lo >= g.support().hi))
        throw SupportsOverlap("f must be supported to the right of g (f from " +
                              std::to_string(f.support().lo) + ", g up to " +
                              std::to_string(g.support().hi) + ")");
    const Fn1 fp = [f](double b) { return f.hat(+1, b); };
    const Fn1 fm = [f](double b) { return f.hat(-1, b); };
    const Fn1 gp = [g](double b) { return g.hat(+1, b); };
    const Fn1 gm = [g](double b) { return g.hat(-1, b); };
    const auto plus = commutator_kernel(S, fp, gm, +1, samples, cfg);
    const auto minus = commutator_kernel(S, fm, gp, -1, samples, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) worst = std::max(worst, std::abs(plus[i] + minus[i]));
    return worst;
}

SplitCheck split_factorization_check(const ScatteringFunction& S, const std::vector<Fn1>& psi,
                                     const std::vector<Fn1>& chi,
                                     const std::vector<Fn1>& psi_p,
                                     const std::vector<Fn1>& chi_p, const QuadratureConfig& cfg) {
    if (psi.size() > 2 || chi.size() > 2 || psi_p.size() > 2 || chi_p.size() > 2)
        throw InvalidArgument("split check supports word lengths <= 2");
    auto left = [](const Fn1& p) {
        Arg a{[p](double q) { return p(std::log(-q)); }};
        a.branches = kLeftBranch;
        return a;
    };
    auto right = [](const Fn1& p) {
        Arg a{[p](double q) { return p(std::log(q)); }};
        a.branches = kRightBranch;
        return a;
    };
    std::vector<Arg> bra, ket;
    for (const auto& p : psi) bra.push_back(left(p));
    for (const auto& c : chi) bra.push_back(right(c));
    for (const auto& p : psi_p) ket.push_back(left(p));
    for (const auto& c : chi_p) ket.push_back(right(c));

    SplitCheck r;
    r.lhs = matrix_element(creation_word(bra), OperatorExpr::identity(), creation_word(ket),
                           EvalContext::massless(S), cfg);
    r.rhs = 0.0;
    if (psi.size() == psi_p.size() && chi.size() == chi_p.size()) {
        const EvalContext rap = EvalContext::rapidity(S);
        std::vector<Fn1> pb, ppb;
        for (const auto& p : psi) pb.push_back([p](double x) { return std::conj(p(x)); });
        for (const auto& p : psi_p) ppb.push_back([p](double x) { return std::conj(p(x)); });
        const cplx l = std::conj(creation_word_inner_product(rap, pb, ppb, cfg));
        const cplx rr = creation_word_inner_product(rap, chi, chi_p, cfg);
        r.rhs = l * rr;
    }
    r.residual = std::abs(r.lhs - r.rhs);
    return r;
}

namespace {

struct ClusterSetup {
    GridFock F;
    GridFock::State bra, ket;
    int n_bra, n_ket;
};

GridFock make_grid(const ScatteringFunction& S, const ClusteringGrid& g) {
    const FixedRule r = composite_gauss_legendre(g.lo, g.hi, g.panels, 20);
    std::vector<std::size_t> order(r.x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return r.x[a] < r.x[b]; });
    std::vector<double> x, w;
    for (auto i : order) {
        x.push_back(r.x[i]);
        w.push_back(r.w[i]);
    }
    return GridFock(rapidity_kernel(S), x, w);
}

GridFock::State word_state(const GridFock& F, const std::vector<Fn1>& psis) {
    GridFock::State s = F.vacuum();
    for (auto it = psis.rbegin(); it != psis.rend(); ++it) s = F.create(F.sample(*it), s);
    return s;
}

std::vector<cplx> conj_all(std::vector<cplx> v) {
    for (auto& x : v) x = std::conj(x);
    return v;
}

cplx kernel_on_grid(const ScatteringFunction& S, const GridFock& F, const Eigen::VectorXcd& phi,
                    const Eigen::VectorXcd& psi, int n, const std::vector<cplx>& p1,
                    const std::vector<cplx>& p2, double lambda) {
    const int M = F.grid_size();
    const auto& x = F.grid();
    const auto& w = F.weights();
    Eigen::MatrixXcd T(M, M);
    for (int i = 0; i < M; ++i)
        for (int i0 = 0; i0 < M; ++i0) T(i, i0) = S.at(x[i] - x[i0] + lambda);
    Eigen::VectorXcd g0(M);
    for (int i0 = 0; i0 < M; ++i0) g0[i0] = w[i0] * p1[i0] * std::conj(p2[i0]);
    cplx total = 0.0;
    const long size_n = phi.size();
    for (long idx = 0; idx < size_n; ++idx) {
        const cplx amp = std::conj(phi[idx]) * psi[idx];
        if (amp == 0.0) continue;
        const auto K = F.unflatten(idx, n);
        double wt = 1.0;
        for (int k : K) wt *= w[k];
        cplx inner = 0.0;
        for (int i0 = 0; i0 < M; ++i0) {
            cplx prod = g0[i0];
            for (int k : K) prod *= T(k, i0);
            inner += prod;
        }
        total += wt * amp * inner;
    }
    return total;
}

}  // namespace

cplx clustering_commutator_kernel(const ScatteringFunction& S, const Fn1& psi1, const Fn1& psi2,
                                  const std::vector<Fn1>& bra, const std::vector<Fn1>& ket,
                                  double lambda, const ClusteringGrid& grid) {
    if (bra.size() != ket.size()) return 0.0;
    const GridFock F = make_grid(S, grid);
    const int n = int(bra.size());
    const auto Phi = word_state(F, bra), Psi = word_state(F, ket);
    return kernel_on_grid(S, F, Phi[n], Psi[n], n, F.sample(psi1), F.sample(psi2), lambda);
}

std::vector<ClusteringRow> dilation_clustering(const ScatteringFunction& S, const Fn1& psi1,
                                               const Fn1& psi2, const std::vector<Fn1>& bra,
                                               const std::vector<Fn1>& ket,
                                               const std::vector<double>& lambdas, int which,
                                               const ClusteringGrid& grid) {
    const int nb = int(bra.size()), nk = int(ket.size());
    switch (which) {
        case 1:
            if (nk != nb + 2) throw InvalidArgument("which = 1 needs a ket with two more particles");
            break;
        case 2:
            if (nb != nk + 2) throw InvalidArgument("which = 2 needs a bra with two more particles");
            break;
        case 3:
        case 4:
            if (nb != nk) throw InvalidArgument("which = 3, 4 need equal particle numbers");
            break;
        default: throw InvalidArgument("which must be 1, 2, 3 or 4");
    }
    const GridFock F = make_grid(S, grid);
    const auto Phi = word_state(F, bra);
    const auto Psi = word_state(F, ket);
    const auto& x = F.grid();
    const auto& w = F.weights();
    const double eps_n = std::pow(double(S.epsilon()), nk);
    const cplx overlap = which == 4 ? F.inner(Phi, Psi) : cplx(0.0);
    const auto p1 = F.sample(psi1), p2 = F.sample(psi2);

    std::vector<ClusteringRow> rows(lambdas.size());
    for (std::size_t r = 0; r < lambdas.size(); ++r) {
        const double lam = lambdas[r];
        std::vector<cplx> a(x.size()), b(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            a[i] = psi1(x[i] + lam);
            b[i] = psi2(x[i] + lam);
        }
        ClusteringRow row{lam, 0.0, 0.0, 0.0};
        switch (which) {
            case 1: {
                auto X = F.annihilate(a, F.reflect(F.annihilate(b, Psi)));
                row.value = F.inner(Phi, X);
                break;
            }
            case 2:
                row.value = F.inner(F.annihilate(conj_all(a), Phi), F.reflect(F.create(b, Psi)));
                break;
            case 3:
                row.value = F.inner(F.annihilate(conj_all(a), Phi), F.reflect(F.annihilate(b, Psi)));
                break;
            case 4: {
                if (nk <= 2) {
                    const auto X = F.reflect(F.create(b, F.reflect(Psi)));
                    const cplx t1 = F.inner(F.create(conj_all(a), Phi), X);
                    const auto Y = F.reflect(F.create(b, F.reflect(F.annihilate(a, Psi))));
                    row.value = t1 - F.inner(Phi, Y);
                } else {
                    row.value = kernel_on_grid(S, F, Phi[nk], Psi[nk], nk, p1, p2, lam);
                }
                cplx ba = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) ba += w[i] * std::conj(p2[i]) * p1[i];
                row.target = ba * eps_n * overlap;
                break;
            }
        }
        row.magnitude = std::abs(row.value - row.target);
        rows[r] = row;
    }
    return rows;
}

double affine_covariance_check(const ScatteringFunction& S, const TestFunction1D& f, double xi,
                               double lambda, const std::vector<Fn1>& bra,
                               const std::vector<Fn1>& ket, const QuadratureConfig& cfg) {
    if (xi == 0.0 && lambda == 0.0) return 0.0;
    const double xi_inv = -xi * std::exp(-lambda);
    std::vector<Fn1> bra_t, ket_t;
    for (const auto& p : bra) bra_t.push_back(affine_act(p, xi_inv, -lambda));
    for (const auto& p : ket) ket_t.push_back(affine_act(p, xi_inv, -lambda));
    const EvalContext ctx = EvalContext::rapidity(S);
    const cplx lhs = matrix_element(chiral_state(bra_t), chiral_field(f), chiral_state(ket_t), ctx, cfg);
    const cplx rhs = matrix_element(chiral_state(bra), chiral_field(f.push(xi, lambda)),
                                    chiral_state(ket), ctx, cfg);
    return std::abs(lhs - rhs);
}

}  // namespace zfscale
