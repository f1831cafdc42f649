#pragma once

#include "zfscale/fock.hpp"
#include "zfscale/scattering.hpp"
#include "zfscale/testfn.hpp"
#include "zfscale/zf.hpp"

#include <vector>

namespace zfscale {

// phi(f) = y+(f^+) + y(f^-) in rapidity mode.
OperatorExpr chiral_field(const TestFunction1D& f);

// Rapidity-space argument with an optional window.
Arg rapidity_arg(Fn1 psi, double lo = -1e300, double hi = 1e300);
OperatorExpr chiral_state(const std::vector<Fn1>& psis);

// (U(xi, lambda) psi)(beta) = e^{i xi e^beta} psi(beta + lambda)
Fn1 affine_act(const Fn1& psi, double xi, double lambda);

// C^{psi1, psi2, ±}(beta_1..beta_n) = ± int dbeta0 psi1 psi2 prod_k S(±beta0 ∓ beta_k)
std::vector<cplx> commutator_kernel(const ScatteringFunction& S, const Fn1& psi1, const Fn1& psi2,
                                    int sign, const std::vector<std::vector<double>>& samples,
                                    const QuadratureConfig& cfg);

// sup over samples of |C^{f^+, g^-, +} + C^{f^-, g^+, -}|; f right of g.
// allow_overlap runs the same computation as a negative control.
double halfline_locality_residual(const ScatteringFunction& S, const TestFunction1D& f,
                                  const TestFunction1D& g,
                                  const std::vector<std::vector<double>>& samples,
                                  const QuadratureConfig& cfg, bool allow_overlap = false);

struct SplitCheck {
    cplx lhs, rhs;
    double residual;
};

// Massless scalar product of v_l/v_r creation words against the product of chiral scalar products.
SplitCheck split_factorization_check(const ScatteringFunction& S, const std::vector<Fn1>& psi,
                                     const std::vector<Fn1>& chi,
                                     const std::vector<Fn1>& psi_p,
                                     const std::vector<Fn1>& chi_p, const QuadratureConfig& cfg);

struct ClusteringGrid {
    double lo = -14.0, hi = 6.0;
    int panels = 5;  // Gauss-Legendre 20-point panels
};

struct ClusteringRow {
    double lambda;
    cplx value;  // matrix element; for which = 4 the bare commutator element
    cplx target;  // which = 4: <psi2, psi1> S(inf)^n <Phi, Psi>, else 0
    double magnitude;  // |value - target|
};

// Matrix elements <Phi, X(lambda) Psi> for the four dilation-clustering expressions:
// 1: y(a) U(j) y(b), 2: y+(a) U(j) y+(b), 3: y+(a) U(j) y(b),
// 4: [y(a), U(j) y+(b) U(j)] - <b, a> S(inf)^N, with a, b = U(0, lambda) psi1, psi2.
std::vector<ClusteringRow> dilation_clustering(const ScatteringFunction& S, const Fn1& psi1,
                                               const Fn1& psi2, const std::vector<Fn1>& bra,
                                               const std::vector<Fn1>& ket,
                                               const std::vector<double>& lambdas, int which,
                                               const ClusteringGrid& grid = {});

// Bare which = 4 commutator element through its integral kernel, any particle number.
cplx clustering_commutator_kernel(const ScatteringFunction& S, const Fn1& psi1, const Fn1& psi2,
                                  const std::vector<Fn1>& bra, const std::vector<Fn1>& ket,
                                  double lambda, const ClusteringGrid& grid = {});

// |<Phi', phi(f) Psi'> - <Phi, phi(f^{xi,lambda}) Psi>| with Phi' = U(xi,lambda)^{-1} Phi.
double affine_covariance_check(const ScatteringFunction& S, const TestFunction1D& f, double xi,
                               double lambda, const std::vector<Fn1>& bra,
                               const std::vector<Fn1>& ket, const QuadratureConfig& cfg);

}  // namespace zfscale
