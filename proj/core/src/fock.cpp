#include "zfscale/fock.hpp"

#include "zfscale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zfscale {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

TwoPointKernel rapidity_kernel(const ScatteringFunction& S) {
    return [S](double x, double y) { return S.at(x - y); };
}

TwoPointKernel momentum_kernel(const MassKernel& K) {
    return [K](double p, double q) { return K(p, q); };
}

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

cplx permutation_factor(const TwoPointKernel& S2, const std::vector<int>& pi,
                        const std::vector<double>& x) {
    cplx v = 1.0;
    const int n = int(pi.size());
    for (int l = 0; l < n; ++l)
        for (int r = l + 1; r < n; ++r)
            if (pi[l] > pi[r]) v *= S2(x[pi[l]], x[pi[r]]);
    return v;
}

FnN apply_transposition(const TwoPointKernel& S2, int j, int n, FnN psi) {
    if (j < 1 || j > n - 1)
        throw InvalidArgument("transposition index must satisfy 1 <= j <= n-1");
    return [S2, j, psi](const std::vector<double>& x) {
        std::vector<double> y = x;
        std::swap(y[j - 1], y[j]);
        return S2(x[j], x[j - 1]) * psi(y);
    };
}

FnN project_symmetric(const TwoPointKernel& S2, int n, FnN psi) {
    if (n > 4) throw ParticleCapExceeded("project_symmetric supports n <= 4, got " + std::to_string(n));
    if (n < 0) throw InvalidArgument("negative particle number");
    const auto perms = all_permutations(n);
    const double norm = 1.0 / factorial(n);
    return [S2, perms, norm, psi](const std::vector<double>& x) {
        cplx v = 0.0;
        std::vector<double> y(x.size());
        for (const auto& pi : perms) {
            for (std::size_t l = 0; l < pi.size(); ++l) y[l] = x[pi[l]];
            v += permutation_factor(S2, pi, x) * psi(y);
        }
        return norm * v;
    };
}

FnN project_symmetric(const TwoPointKernel& S2, const std::vector<Fn1>& tensor) {
    FnN psi = [tensor](const std::vector<double>& x) {
        cplx v = 1.0;
        for (std::size_t l = 0; l < tensor.size(); ++l) v *= tensor[l](x[l]);
        return v;
    };
    return project_symmetric(S2, int(tensor.size()), psi);
}

cplx creation_word_inner_product(const EvalContext& ctx, const std::vector<Fn1>& psi,
                                 const std::vector<Fn1>& phi, const QuadratureConfig& cfg,
                                 double lo, double hi) {
    if (psi.size() != phi.size()) return 0.0;
    const int k = int(psi.size());
    if (k > 4) throw ParticleCapExceeded("inner products support k <= 4");
    if (k == 0) return 1.0;
    const auto perms = all_permutations(k);
    const bool massless = ctx.mode == EvalMode::Massless;
    const double a = std::max(lo, -cfg.cutoff), b = std::min(hi, cfg.cutoff);
    if (!(b > a)) return 0.0;

    cplx total = 0.0;
    const long n_branch = massless ? (1L << k) : 1L;
    for (long code = 0; code < n_branch; ++code) {
        std::vector<int> br(k, 1);
        if (massless)
            for (int j = 0; j < k; ++j) br[j] = int((code >> j) & 1);
        auto integrand = [&](const std::vector<double>& t) -> cplx {
            std::vector<double> xs(k);
            cplx left = 1.0;
            for (int j = 0; j < k; ++j) {
                xs[j] = ctx.physical(t[j], br[j]);
                left *= std::conj(psi[j](xs[j]));
            }
            if (left == 0.0) return 0.0;
            cplx sum = 0.0;
            for (const auto& pi : perms) {
                cplx v = 1.0;
                for (int j = 0; j < k; ++j) v *= phi[j](xs[pi[j]]);
                for (int l = 0; l < k; ++l)
                    for (int r = l + 1; r < k; ++r)
                        if (pi[l] > pi[r]) v *= ctx.kernel(t[pi[l]], br[pi[l]], t[pi[r]], br[pi[r]]);
                sum += v;
            }
            return left * sum;
        };
        total += integrate_nd(integrand, Box(k, {a, b}), cfg).value;
    }
    return total;
}

TruncatedFock::TruncatedFock(TwoPointKernel S2, std::vector<double> x, std::vector<double> w,
                             int n_max)
    : S2_(std::move(S2)), x_(std::move(x)), w_(std::move(w)), n_max_(n_max) {
    const int M = int(x_.size());
    if (M == 0 || w_.size() != x_.size()) throw InvalidArgument("grid and weights must match and be non-empty");
    if (n_max < 0) throw InvalidArgument("negative particle cap");
    if (std::pow(double(M), n_max) > 1e4)
        throw DimensionTooLarge("M^n_max = " + std::to_string(std::pow(double(M), n_max)) +
                                " exceeds 1e4");
    offsets_.push_back(0);
    for (int n = 0; n <= n_max; ++n) offsets_.push_back(offsets_.back() + int(ipow(M, n)));
    const int D = dim();

    std::vector<std::vector<Eigen::Triplet<cplx>>> ct(M), at(M);
    for (int n = 0; n < n_max; ++n) {
        const long size_n = ipow(M, n);
        const double ann_scale = std::sqrt(double(n + 1));
        // a(i): level n+1 -> n, Psi(i, K)
        for (int i = 0; i < M; ++i)
            for (long K = 0; K < size_n; ++K)
                at[i].emplace_back(offsets_[n] + int(K), offsets_[n + 1] + int(i * size_n + K), ann_scale);
        // a+(j): sqrt(n+1) P_{n+1}(delta_j / w_j (x) Psi)
        const auto perms = all_permutations(n + 1);
        const double cre_scale = std::sqrt(double(n + 1)) / factorial(n + 1);
        const long size_up = ipow(M, n + 1);
        std::vector<int> Kp(n + 1);
        std::vector<double> xs(n + 1);
        for (long idx = 0; idx < size_up; ++idx) {
            long r = idx;
            for (int l = n; l >= 0; --l) {
                Kp[l] = int(r % M);
                r /= M;
            }
            for (int l = 0; l <= n; ++l) xs[l] = x_[Kp[l]];
            for (const auto& pi : perms) {
                const int j = Kp[pi[0]];
                long J = 0;
                for (int l = 1; l <= n; ++l) J = J * M + Kp[pi[l]];
                const cplx v = permutation_factor(S2_, pi, xs) * cre_scale / w_[j];
                ct[j].emplace_back(offsets_[n + 1] + int(idx), offsets_[n] + int(J), v);
            }
        }
    }
    for (int i = 0; i < M; ++i) {
        SpMat A(D, D), C(D, D);
        A.setFromTriplets(at[i].begin(), at[i].end());
        C.setFromTriplets(ct[i].begin(), ct[i].end());
        ann_.push_back(std::move(A));
        cre_.push_back(std::move(C));
    }
}

Eigen::VectorXcd TruncatedFock::vacuum() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
    v[0] = 1.0;
    return v;
}

Eigen::VectorXd TruncatedFock::metric() const {
    const int M = grid_size();
    Eigen::VectorXd g(dim());
    for (int n = 0; n <= n_max_; ++n) {
        const long size_n = ipow(M, n);
        for (long K = 0; K < size_n; ++K) {
            double wt = 1.0;
            long r = K;
            for (int l = 0; l < n; ++l) {
                wt *= w_[r % M];
                r /= M;
            }
            g[offsets_[n] + K] = wt;
        }
    }
    return g;
}

Eigen::MatrixXcd TruncatedFock::level_projector(int n) const {
    const int M = grid_size();
    const long size_n = ipow(M, n);
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(size_n, size_n);
    const auto perms = all_permutations(n);
    const double norm = 1.0 / factorial(n);
    std::vector<int> K(n);
    std::vector<double> xs(n);
    for (long idx = 0; idx < size_n; ++idx) {
        long r = idx;
        for (int l = n - 1; l >= 0; --l) {
            K[l] = int(r % M);
            r /= M;
        }
        for (int l = 0; l < n; ++l) xs[l] = x_[K[l]];
        for (const auto& pi : perms) {
            long src = 0;
            for (int l = 0; l < n; ++l) src = src * M + K[pi[l]];
            P(idx, src) += norm * permutation_factor(S2_, pi, xs);
        }
    }
    return P;
}

TruncatedFock build_truncated_fock(const TwoPointKernel& S2, const std::vector<double>& x,
                                   const std::vector<double>& w, int n_max) {
    return TruncatedFock(S2, x, w, n_max);
}

cplx oracle_expectation(const TruncatedFock& tf, const Word& word,
                        const std::map<int, int>& grid_index) {
    if (word.size() > 6) throw WordTooLong("oracle words are limited to 6 generators");
    Eigen::VectorXcd v = tf.vacuum();
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        const int i = grid_index.at(it->var);
        v = (it->kind == GenKind::Create ? tf.creator(i) : tf.annihilator(i)) * v;
    }
    return v[0];
}

double zf_relation_residual(const TruncatedFock& tf) {
    const int M = tf.grid_size();
    const int D = tf.dim();
    if (tf.n_max() == 0) return 0.0;
    const int cols = tf.level_offset(tf.n_max());
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(D, cols);
    for (int n = 0; n < tf.n_max(); ++n)
        Q.block(tf.level_offset(n), tf.level_offset(n), tf.level_dim(n), tf.level_dim(n)) =
            tf.level_projector(n);
    double worst = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            Eigen::MatrixXcd AQ = tf.annihilator(i) * (tf.creator(j) * Q);
            Eigen::MatrixXcd BQ = tf.creator(j) * (tf.annihilator(i) * Q);
            Eigen::MatrixXcd R = AQ - tf.kernel()(tf.grid()[j], tf.grid()[i]) * BQ;
            if (i == j) R -= Q / tf.weights()[i];
            worst = std::max(worst, R.cwiseAbs().maxCoeff());
        }
    return worst;
}

OracleSweep symbolic_oracle_sweep(const TruncatedFock& tf, int max_length) {
    if (max_length < 1 || max_length > 6) throw WordTooLong("sweep lengths must lie in 1..6");
    const int M = tf.grid_size();
    OracleSweep out;
    out.max_rel_by_length.assign(max_length, 0.0);
    for (int L = 1; L <= max_length; ++L) {
        const long n_assign = ipow(M, L);
        for (long pattern = 0; pattern < (1L << L); ++pattern) {
            Word word;
            for (int l = 0; l < L; ++l) word.push_back({(pattern >> l) & 1 ? GenKind::Create : GenKind::Annihilate, l});
            const ZFNormalForm nf = vacuum_part(normal_order(word, Mode::Rapidity));
            std::vector<double> rel(n_assign);
            parallel_for(std::size_t(n_assign), [&](std::size_t a) {
                std::map<int, int> idx;
                long r = long(a);
                for (int l = 0; l < L; ++l) {
                    idx[l] = int(r % M);
                    r /= M;
                }
                const cplx s = evaluate_discrete(nf, idx, tf.grid(), tf.weights(), tf.kernel());
                const cplx o = oracle_expectation(tf, word, idx);
                const double scale = std::max(std::abs(s), std::abs(o));
                rel[a] = scale > 1e-12 ? std::abs(s - o) / scale : std::abs(s - o);
            });
            for (double v : rel) out.max_rel_by_length[L - 1] = std::max(out.max_rel_by_length[L - 1], v);
            out.cases += std::size_t(n_assign);
        }
        out.max_rel = std::max(out.max_rel, out.max_rel_by_length[L - 1]);
    }
    return out;
}

GridFock::GridFock(TwoPointKernel S2, std::vector<double> x, std::vector<double> w)
    : S2_(std::move(S2)), x_(std::move(x)), w_(std::move(w)) {
    const int M = grid_size();
    if (M == 0 || w_.size() != x_.size()) throw InvalidArgument("grid and weights must match and be non-empty");
    Smat_.resize(M, M);
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) Smat_(a, b) = S2_(x_[a], x_[b]);
}

GridFock::State GridFock::vacuum() const { return {Eigen::VectorXcd::Ones(1)}; }

std::vector<int> GridFock::unflatten(long idx, int n) const {
    const int M = grid_size();
    std::vector<int> K(n);
    for (int l = n - 1; l >= 0; --l) {
        K[l] = int(idx % M);
        idx /= M;
    }
    return K;
}

std::vector<cplx> GridFock::sample(const Fn1& f) const {
    std::vector<cplx> v(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) v[i] = f(x_[i]);
    return v;
}

Eigen::VectorXcd GridFock::project(const Eigen::VectorXcd& level, int n) const {
    if (n <= 1) return level;
    if (n > 6) throw ParticleCapExceeded("grid projection supports n <= 6");
    const int M = grid_size();
    const long size_n = ipow(M, n);
    const auto perms = all_permutations(n);
    const double norm = 1.0 / factorial(n);
    Eigen::VectorXcd out(size_n);
    const long chunk = 4096;
    const long n_chunks = (size_n + chunk - 1) / chunk;
    parallel_for(std::size_t(n_chunks), [&](std::size_t c) {
        std::vector<int> K(n);
        const long end = std::min(size_n, long(c + 1) * chunk);
        for (long idx = long(c) * chunk; idx < end; ++idx) {
            long r = idx;
            for (int l = n - 1; l >= 0; --l) {
                K[l] = int(r % M);
                r /= M;
            }
            cplx v = 0.0;
            for (const auto& pi : perms) {
                long src = 0;
                for (int l = 0; l < n; ++l) src = src * M + K[pi[l]];
                const cplx a = level[src];
                if (a == 0.0) continue;
                cplx s = 1.0;
                for (int l = 0; l < n; ++l)
                    for (int rr = l + 1; rr < n; ++rr)
                        if (pi[l] > pi[rr]) s *= Smat_(K[pi[l]], K[pi[rr]]);
                v += s * a;
            }
            out[idx] = norm * v;
        }
    });
    return out;
}

GridFock::State GridFock::from_function(int n, const FnN& psi) const {
    State s(n + 1);
    for (int l = 0; l < n; ++l) s[l] = Eigen::VectorXcd::Zero(ipow(grid_size(), l));
    const long size_n = ipow(grid_size(), n);
    Eigen::VectorXcd v(size_n);
    std::vector<double> xs(n);
    for (long idx = 0; idx < size_n; ++idx) {
        const auto K = unflatten(idx, n);
        for (int l = 0; l < n; ++l) xs[l] = x_[K[l]];
        v[idx] = psi(xs);
    }
    s[n] = project(v, n);
    return s;
}

GridFock::State GridFock::create(const std::vector<cplx>& psi, const State& s) const {
    const int M = grid_size();
    State out(s.size() + 1);
    out[0] = Eigen::VectorXcd::Zero(1);
    for (std::size_t n = 0; n < s.size(); ++n) {
        const long size_n = s[n].size();
        Eigen::VectorXcd t(M * size_n);
        for (int i = 0; i < M; ++i) t.segment(i * size_n, size_n) = psi[i] * s[n];
        out[n + 1] = std::sqrt(double(n + 1)) * project(t, int(n + 1));
    }
    return out;
}

GridFock::State GridFock::annihilate(const std::vector<cplx>& phi, const State& s) const {
    const int M = grid_size();
    State out(std::max<std::size_t>(1, s.size() - 1));
    out[0] = Eigen::VectorXcd::Zero(1);
    for (std::size_t n = 0; n + 1 < s.size(); ++n) {
        const long size_n = ipow(M, int(n));
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size_n);
        for (int i = 0; i < M; ++i) v += (w_[i] * phi[i]) * s[n + 1].segment(i * size_n, size_n);
        out[n] = std::sqrt(double(n + 1)) * v;
    }
    return out;
}

GridFock::State GridFock::reflect(const State& s) const {
    State out(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) {
        out[n].resize(s[n].size());
        for (long idx = 0; idx < s[n].size(); ++idx) {
            auto K = unflatten(idx, int(n));
            std::reverse(K.begin(), K.end());
            long src = 0;
            for (int k : K) src = src * grid_size() + k;
            out[n][idx] = std::conj(s[n][src]);
        }
    }
    return out;
}

cplx GridFock::inner(const State& a, const State& b) const {
    const int M = grid_size();
    cplx total = 0.0;
    Eigen::VectorXd wt = Eigen::VectorXd::Ones(1);
    const std::size_t levels = std::min(a.size(), b.size());
    for (std::size_t n = 0; n < levels; ++n) {
        if (n > 0) {
            Eigen::VectorXd next(wt.size() * M);
            for (long k = 0; k < wt.size(); ++k)
                for (int i = 0; i < M; ++i) next[k * M + i] = wt[k] * w_[i];
            wt = std::move(next);
        }
        total += (a[n].conjugate().array() * b[n].array() * wt.array().cast<cplx>()).sum();
    }
    return total;
}

GridFock::State GridFock::add(const State& a, const State& b, cplx cb) {
    State out(std::max(a.size(), b.size()));
    for (std::size_t n = 0; n < out.size(); ++n) {
        if (n < a.size() && n < b.size())
            out[n] = a[n] + cb * b[n];
        else if (n < a.size())
            out[n] = a[n];
        else
            out[n] = cb * b[n];
    }
    return out;
}

GridFock::State GridFock::scale(const State& a, cplx c) {
    State out = a;
    for (auto& v : out) v *= c;
    return out;
}

}  // namespace zfscale
