#pragma once

#include "zfscale/numerics.hpp"
#include "zfscale/scattering.hpp"
#include "zfscale/zf.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <map>
#include <vector>

namespace zfscale {

TwoPointKernel rapidity_kernel(const ScatteringFunction& S);  // S(x - y)
TwoPointKernel momentum_kernel(const MassKernel& K);          // S_m(p, q) or S_0(p, q)

// (D(tau_j) Psi)(x) = S(x_{j+1}, x_j) Psi(x with x_j, x_{j+1} swapped), 1 <= j <= n-1
FnN apply_transposition(const TwoPointKernel& S2, int j, int n, FnN psi);

// P_n Psi = (1/n!) sum_pi S^pi Psi(x_pi(1), ..., x_pi(n)), n <= 4
FnN project_symmetric(const TwoPointKernel& S2, int n, FnN psi);
FnN project_symmetric(const TwoPointKernel& S2, const std::vector<Fn1>& tensor);

// S^pi(x) = prod over l < r with pi(l) > pi(r) of S(x_pi(l), x_pi(r))
cplx permutation_factor(const TwoPointKernel& S2, const std::vector<int>& pi,
                        const std::vector<double>& x);
std::vector<std::vector<int>> all_permutations(int n);

// <z+(psi_1)...z+(psi_k) Omega, z+(phi_1)...z+(phi_k) Omega>, functions of the physical variable.
// The t-window [lo, hi] is intersected with [-B, B].
cplx creation_word_inner_product(const EvalContext& ctx, const std::vector<Fn1>& psi,
                                 const std::vector<Fn1>& phi, const QuadratureConfig& cfg,
                                 double lo = -1e300, double hi = 1e300);

using SpMat = Eigen::SparseMatrix<cplx>;

// Full tensor basis over M grid points up to n_max particles, delta -> delta_ij / w_i.
class TruncatedFock {
public:
    TruncatedFock(TwoPointKernel S2, std::vector<double> x, std::vector<double> w, int n_max);

    int grid_size() const { return int(x_.size()); }
    int n_max() const { return n_max_; }
    int dim() const { return offsets_.back(); }
    int level_offset(int n) const { return offsets_[n]; }
    int level_dim(int n) const { return offsets_[n + 1] - offsets_[n]; }
    const std::vector<double>& grid() const { return x_; }
    const std::vector<double>& weights() const { return w_; }
    const TwoPointKernel& kernel() const { return S2_; }

    const SpMat& creator(int j) const { return cre_[j]; }
    const SpMat& annihilator(int i) const { return ann_[i]; }
    Eigen::VectorXcd vacuum() const;
    // Weight matrix of the level-wise inner product.
    Eigen::VectorXd metric() const;
    // Dense P_n acting on level n.
    Eigen::MatrixXcd level_projector(int n) const;

private:
    TwoPointKernel S2_;
    std::vector<double> x_, w_;
    int n_max_;
    std::vector<int> offsets_;
    std::vector<SpMat> cre_, ann_;
};

TruncatedFock build_truncated_fock(const TwoPointKernel& S2, const std::vector<double>& x,
                                   const std::vector<double>& w, int n_max);

// <Omega, word Omega> with word variables placed on grid points.
cplx oracle_expectation(const TruncatedFock& tf, const Word& word,
                        const std::map<int, int>& grid_index);

// max over i, j of || (a_i a+_j - S(x_j, x_i) a+_j a_i - delta_ij / w_i) Q ||, Q spanning the
// S-symmetric states below the particle cap.
double zf_relation_residual(const TruncatedFock& tf);

struct OracleSweep {
    std::size_t cases = 0;
    double max_rel = 0.0;
    std::vector<double> max_rel_by_length;  // index L - 1
};

// Every generator word of length 1..max_length on every grid assignment: symbolic normal form
// evaluated on the grid against the matrix oracle. Relative deviation, absolute below 1e-12.
OracleSweep symbolic_oracle_sweep(const TruncatedFock& tf, int max_length);

// Level-vector Fock space on a quadrature grid; no dimension cap.
class GridFock {
public:
    using State = std::vector<Eigen::VectorXcd>;

    GridFock(TwoPointKernel S2, std::vector<double> x, std::vector<double> w);

    int grid_size() const { return int(x_.size()); }
    const std::vector<double>& grid() const { return x_; }
    const std::vector<double>& weights() const { return w_; }

    State vacuum() const;
    // Samples of an n-particle function, projected onto the S-symmetric subspace.
    State from_function(int n, const FnN& psi) const;
    std::vector<cplx> sample(const Fn1& f) const;

    State create(const std::vector<cplx>& psi, const State& s) const;      // z+(psi)
    State annihilate(const std::vector<cplx>& phi, const State& s) const;  // z(phi)
    State reflect(const State& s) const;                                   // conj, order reversed
    Eigen::VectorXcd project(const Eigen::VectorXcd& level, int n) const;
    cplx inner(const State& a, const State& b) const;

    static State add(const State& a, const State& b, cplx cb = 1.0);
    static State scale(const State& a, cplx c);

    // Grid index tuple of a flat index at level n.
    std::vector<int> unflatten(long idx, int n) const;

private:
    TwoPointKernel S2_;
    std::vector<double> x_, w_;
    Eigen::MatrixXcd Smat_;
};

}  // namespace zfscale
