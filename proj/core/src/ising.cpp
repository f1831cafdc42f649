#include "zfscale/ising.hpp"

#include "zfscale/chiral.hpp"
#include "zfscale/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace zfscale {

namespace {

const cplx kSqrtI = std::polar(1.0, M_PI / 4.0);
const double kSqrt2Pi = std::sqrt(2.0 * M_PI);

ScatteringFunction ising_S() { return ScatteringFunction::ising(); }

Fn1 hat_of(const TestFunction1D& h) {
    return [h](double K) { return kSqrt2Pi * h.fourier(K); };
}

// Upper rapidity beyond which e^{2t} |h^(e^t)| is negligible.
double frequency_window(const TestFunction1D& h) {
    double peak = 0.0;
    std::vector<double> mag;
    for (double t = -10.0; t <= 12.0; t += 0.05) {
        mag.push_back(std::exp(2 * t) * std::abs(h.fourier(std::exp(t))));
        peak = std::max(peak, mag.back());
    }
    double hi = -10.0;
    for (std::size_t i = 0; i < mag.size(); ++i)
        if (mag[i] > 1e-17 * peak) hi = -10.0 + 0.05 * double(i);
    return hi + 1.0;
}

Arg unit_arg(double hi) {
    Arg a{[](double) { return cplx(1.0); }};
    a.hi = hi;
    return a;
}

SmearedWord two_block(GenKind k0, GenKind k1, double hi, FnN fn) {
    SmearedWord w;
    w.gens = {{k0, unit_arg(hi)}, {k1, unit_arg(hi)}};
    w.couplings = {{{0, 1}, std::move(fn)}};
    return w;
}

cplx word_inner(const RapidityWord& a, const RapidityWord& b, const QuadratureConfig& cfg) {
    return creation_word_inner_product(EvalContext::rapidity(ising_S()), a, b, cfg);
}

}  // namespace

OperatorExpr fermi_field(const TestFunction1D& f) {
    Arg plus{[f](double b) { return std::exp(b / 2) * kSqrtI * f.fourier(std::exp(b)); }};
    Arg minus{[f](double b) { return std::exp(b / 2) * f.fourier(-std::exp(b)) / kSqrtI; }};
    return OperatorExpr::single(GenKind::Create, plus) + OperatorExpr::single(GenKind::Annihilate, minus);
}

double anticommutator_check(const TestFunction1D& f, const TestFunction1D& g,
                            const std::vector<StatePair>& elements, const QuadratureConfig& cfg) {
    if (f.is_zero() || g.is_zero()) return 0.0;
    const OperatorExpr pf = fermi_field(f), pg = fermi_field(g);
    const OperatorExpr anti = pf * pg + pg * pf;
    const cplx fg = pairing(f, g, cfg);
    const EvalContext ctx = EvalContext::rapidity(ising_S());
    double worst = 0.0;
    for (const auto& [bra, ket] : elements) {
        const cplx lhs = matrix_element(chiral_state(bra), anti, chiral_state(ket), ctx, cfg);
        worst = std::max(worst, std::abs(lhs - fg * word_inner(bra, ket, cfg)));
    }
    return worst;
}

CarNorm car_norm_check(const std::vector<cplx>& psi, const TruncatedFock& tf) {
    const int M = tf.grid_size();
    if (int(psi.size()) != M) throw InvalidArgument("psi must have one value per grid point");
    const auto& w = tf.weights();
    double g2 = 0.0;
    for (int i = 0; i < M; ++i) g2 += w[i] * std::norm(psi[i]);
    CarNorm out{0.0, std::sqrt(g2)};
    if (g2 == 0.0) return out;

    SpMat A(tf.dim(), tf.dim());
    for (int i = 0; i < M; ++i) A += (w[i] * psi[i]) * tf.creator(i);
    const Eigen::VectorXd metric = tf.metric();
    for (int n = 0; n < tf.n_max(); ++n) {
        const int off = tf.level_offset(n), dn = tf.level_dim(n);
        const int off1 = tf.level_offset(n + 1), dn1 = tf.level_dim(n + 1);
        const Eigen::VectorXd sq = metric.segment(off, dn).cwiseSqrt();
        const Eigen::VectorXd sq1 = metric.segment(off1, dn1).cwiseSqrt();
        // Metric-orthogonal projector made Euclidean-hermitian.
        const Eigen::MatrixXcd P = sq.asDiagonal() * tf.level_projector(n) * sq.cwiseInverse().asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (P + P.adjoint()));
        std::vector<int> keep;
        for (int k = 0; k < dn; ++k)
            if (es.eigenvalues()[k] > 0.5) keep.push_back(k);
        if (keep.empty()) continue;
        Eigen::MatrixXcd Q(dn, keep.size());
        for (std::size_t c = 0; c < keep.size(); ++c) Q.col(c) = es.eigenvectors().col(keep[c]);
        const Eigen::MatrixXcd block = Eigen::MatrixXcd(A.block(off1, off, dn1, dn));
        const Eigen::MatrixXcd B = sq1.asDiagonal() * block * sq.cwiseInverse().asDiagonal() * Q;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
        out.computed = std::max(out.computed, svd.singularValues()[0]);
    }
    return out;
}

OperatorExpr energy_density(const TestFunction1D& h, double hi) {
    const Fn1 hh = hat_of(h);
    const cplx cc = cplx(0.0, -1.0 / (4 * M_PI));
    const double cn = 1.0 / (4 * M_PI);
    OperatorExpr T;
    T.words.push_back(two_block(GenKind::Create, GenKind::Create, hi, [hh, cc](const std::vector<double>& x) {
        return cc * std::exp((x[0] + 3 * x[1]) / 2) * hh(std::exp(x[0]) + std::exp(x[1]));
    }));
    T.words.push_back(two_block(GenKind::Annihilate, GenKind::Annihilate, hi, [hh, cc](const std::vector<double>& x) {
        return cc * std::exp((x[0] + 3 * x[1]) / 2) * hh(-(std::exp(x[0]) + std::exp(x[1])));
    }));
    T.words.push_back(two_block(GenKind::Create, GenKind::Annihilate, hi, [hh, cn](const std::vector<double>& x) {
        return cn * std::exp((x[0] + 3 * x[1]) / 2) * hh(std::exp(x[0]) - std::exp(x[1]));
    }));
    // creator carries gamma, annihilator beta
    T.words.push_back(two_block(GenKind::Create, GenKind::Annihilate, hi, [hh, cn](const std::vector<double>& x) {
        return cn * std::exp((x[1] + 3 * x[0]) / 2) * hh(std::exp(x[0]) - std::exp(x[1]));
    }));
    return T;
}

OperatorExpr energy_density_at(double xi) {
    auto arg = [xi](double power, double sign) {
        return Arg{[xi, power, sign](double b) {
            return std::exp(power * b) * std::polar(1.0, sign * xi * std::exp(b));
        }};
    };
    const cplx cc = cplx(0.0, -1.0 / (4 * M_PI));
    const double cn = 1.0 / (4 * M_PI);
    auto pair = [](GenKind k0, Arg a0, GenKind k1, Arg a1, cplx c) {
        return OperatorExpr::single(k0, std::move(a0), c) * OperatorExpr::single(k1, std::move(a1));
    };
    return pair(GenKind::Create, arg(0.5, 1), GenKind::Create, arg(1.5, 1), cc) +
           pair(GenKind::Annihilate, arg(0.5, -1), GenKind::Annihilate, arg(1.5, -1), cc) +
           pair(GenKind::Create, arg(0.5, 1), GenKind::Annihilate, arg(1.5, -1), cn) +
           pair(GenKind::Create, arg(1.5, 1), GenKind::Annihilate, arg(0.5, -1), cn);
}

EnergyDensityElement energy_density_matrix_element(const TestFunction1D& h, const RapidityWord& bra,
                                                   const RapidityWord& ket, const QuadratureConfig& cfg) {
    const long diff = std::labs(long(bra.size()) - long(ket.size()));
    if (diff != 0 && diff != 2) return {0.0, true};
    if (h.is_zero()) return {0.0, false};
    const cplx v = matrix_element(chiral_state(bra), energy_density(h, frequency_window(h)), chiral_state(ket),
                                  EvalContext::rapidity(ising_S()), cfg);
    return {v, false};
}

IntegralTResult integral_T_element(const RapidityWord& bra, const RapidityWord& ket,
                                   const QuadratureConfig& cfg, const std::vector<double>& widths,
                                   double edge) {
    if (widths.empty() || !(edge > 0)) throw InvalidArgument("need at least one width and a positive edge");
    IntegralTResult out{0.0, 0.0, {}, 0.0};
    for (std::size_t k = 0; k < ket.size(); ++k) {
        RapidityWord boosted = ket;
        const Fn1 f = ket[k];
        boosted[k] = [f](double b) { return std::exp(b) * f(b); };
        out.h_value += word_inner(bra, boosted, cfg);
    }

    const double wmax = *std::max_element(widths.begin(), widths.end());
    const double reach = wmax + 8.0 * edge;
    const FixedRule rule = composite_gauss_legendre(-reach, reach, int(std::ceil(2 * reach)), 20);
    std::vector<cplx> m(rule.x.size());
    const EvalContext ctx = EvalContext::rapidity(ising_S());
    const OperatorExpr B = chiral_state(bra), K = chiral_state(ket);
    parallel_for(rule.x.size(), [&](std::size_t i) {
        m[i] = matrix_element(B, energy_density_at(rule.x[i]), K, ctx, cfg);
    });
    for (double W : widths) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double x = rule.x[i];
            const double hw = 0.5 * (std::erf((x + W) / edge) - std::erf((x - W) / edge));
            acc += rule.w[i] * hw * m[i];
        }
        out.sweep.emplace_back(W, acc);
    }
    out.t_integral = out.sweep.back().second;
    const double d = std::abs(out.t_integral - out.h_value);
    out.rel = std::abs(out.h_value) > 0 ? d / std::abs(out.h_value) : d;
    return out;
}

double integral_T_equals_H(const std::vector<StatePair>& elements, const QuadratureConfig& cfg) {
    double worst = 0.0;
    for (const auto& [bra, ket] : elements) worst = std::max(worst, integral_T_element(bra, ket, cfg).rel);
    return worst;
}

cplx energy_two_point(const TestFunction1D& h1, const TestFunction1D& h2, const QuadratureConfig& cfg) {
    const double hi = std::max(frequency_window(h1), frequency_window(h2));
    return vacuum_expectation(energy_density(h1, hi) * energy_density(h2, hi), EvalContext::rapidity(ising_S()), cfg);
}

cplx energy_two_point_shape(const TestFunction1D& h1, const TestFunction1D& h2, const QuadratureConfig& cfg) {
    const double kmax = std::exp(std::max(frequency_window(h1), frequency_window(h2)));
    auto g = [&](double k) { return k * k * k * 2.0 * M_PI * h1.fourier(-k) * h2.fourier(k); };
    return integrate(g, 0.0, kmax, cfg, std::max(cfg.initial_panels, 32)).value;
}

double commutator_data(const TestFunction1D& h1, const TestFunction1D& h2, const QuadratureConfig& cfg) {
    const double hi = std::max(frequency_window(h1), frequency_window(h2));
    const Fn1 a = hat_of(h1), b = hat_of(h2);
    const cplx cc = cplx(0.0, -1.0 / (4 * M_PI));
    auto K = [cc](const Fn1& hh, double x, double y) {
        return cc * std::exp((x + 3 * y) / 2) * hh(std::exp(x) + std::exp(y));
    };
    auto integrand = [&](const std::vector<double>& v) {
        const cplx k1 = K(a, v[0], v[1]) - K(a, v[1], v[0]);
        const cplx k2 = K(b, v[0], v[1]) - K(b, v[1], v[0]);
        return 0.5 * std::conj(k1) * k2;
    };
    const Box box{{-cfg.cutoff, hi}, {-cfg.cutoff, hi}};
    const cplx overlap = integrate_nd(integrand, box, cfg).value;
    return -2.0 * overlap.imag();
}

std::vector<SmearingCase> default_smearing_cases() {
    return {{0.5, 0.5, 1.0}, {0.5, 0.7, 1.5}, {0.8, 0.6, 0.7}, {1.0, 1.0, 2.0}, {0.6, 0.9, -1.2}};
}

CentralChargeResult central_charge_extract(const QuadratureConfig& cfg, const std::vector<SmearingCase>& cases) {
    if (cases.empty()) throw FitIllConditioned("no smearing cases");
    for (const auto& c : cases)
        if (!(c.width1 > 0 && c.width2 > 0)) throw FitIllConditioned("smearing widths must be positive");
    CentralChargeResult out{0.0, 0.0, std::vector<CentralChargeRow>(cases.size())};
    parallel_for(cases.size(), [&](std::size_t i) {
        const auto& c = cases[i];
        const auto h1 = TestFunction1D::gaussian(0.0, c.width1);
        const auto h2 = TestFunction1D::gaussian(c.separation, c.width2);
        const double data = commutator_data(h1, h2, cfg);
        const double shape = pairing(h1, h2.derivative().derivative().derivative(), cfg).real() / (24 * M_PI);
        out.rows[i] = {c, data, shape, shape != 0.0 ? data / shape : 0.0};
    });
    double num = 0.0, den = 0.0;
    for (const auto& r : out.rows) {
        num += r.data * r.shape;
        den += r.shape * r.shape;
    }
    if (!(den > 1e-300)) throw FitIllConditioned("the delta''' shape vanishes for every smearing case");
    out.c_fit = num / den;

    const auto h1 = TestFunction1D::gaussian(0.0, cases[0].width1);
    const auto h2 = TestFunction1D::gaussian(cases[0].separation, cases[0].width2);
    const cplx value = energy_two_point(h1, h2, cfg);
    const cplx shape = energy_two_point_shape(h1, h2, cfg);
    out.c_closed = (48.0 * M_PI * M_PI * value / shape).real();
    return out;
}

LuscherMack luscher_mack_residual(const TestFunction1D& h1, const TestFunction1D& h2, const QuadratureConfig& cfg) {
    const double lhs = commutator_data(h1, h2, cfg);
    const double rhs = 0.5 * pairing(h1, h2.derivative().derivative().derivative(), cfg).real() / (24 * M_PI);
    return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace zfscale
