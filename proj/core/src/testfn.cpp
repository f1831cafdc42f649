#include "zfscale/testfn.hpp"

#include "zfscale/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace zfscale {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * M_PI);
const double kSqrt2Pi = std::sqrt(2.0 * M_PI);
const cplx I(0.0, 1.0);

using Impl = TestFunction1D::Impl;
using ImplPtr = std::shared_ptr<const Impl>;

struct ZeroImpl final : Impl {
    cplx value(double) const override { return 0.0; }
    cplx dvalue(double) const override { return 0.0; }
    cplx fourier(cplx) const override { return 0.0; }
    Support support() const override { return {0.0, 0.0}; }
    bool is_zero() const override { return true; }
};

// E[Y^n] for Y ~ N(mu, sigma^2), complex mu.
cplx gaussian_moment(int n, cplx mu, double sigma) {
    cplx total = 0.0;
    double binom = 1.0;
    double dfact = 1.0;  // (k-1)!!
    for (int k = 0; k <= n; ++k) {
        if (k > 0) binom = binom * (n - k + 1) / k;
        if (k % 2 == 0) {
            if (k >= 2) dfact *= (k - 1);
            total += binom * std::pow(mu, n - k) * std::pow(sigma, k) * dfact;
        }
    }
    return total;
}

struct GaussianImpl final : Impl {
    double c, w, kappa;
    std::vector<cplx> a;

    GaussianImpl(double c_, double w_, double k_, std::vector<cplx> a_)
        : c(c_), w(w_), kappa(k_), a(std::move(a_)) {}

    cplx poly(double y) const {
        cplx v = 0.0;
        for (std::size_t n = a.size(); n-- > 0;) v = v * y + a[n];
        return v;
    }
    cplx envelope(double y) const { return std::exp(cplx(-y * y / (2 * w * w), kappa * y)); }

    cplx value(double x) const override {
        const double y = x - c;
        return envelope(y) * poly(y);
    }
    std::vector<cplx> derivative_coeffs() const {
        std::vector<cplx> b(a.size() + 1, 0.0);
        for (std::size_t n = 0; n < a.size(); ++n) {
            if (n > 0) b[n - 1] += double(n) * a[n];
            b[n] += I * kappa * a[n];
            b[n + 1] -= a[n] / (w * w);
        }
        return b;
    }
    cplx dvalue(double x) const override {
        const double y = x - c;
        const auto b = derivative_coeffs();
        cplx v = 0.0;
        for (std::size_t n = b.size(); n-- > 0;) v = v * y + b[n];
        return envelope(y) * v;
    }
    cplx fourier(cplx p) const override {
        const cplx t = p + kappa;
        const cplx mu = I * t * (w * w);
        cplx sum = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n)
            if (a[n] != 0.0) sum += a[n] * gaussian_moment(int(n), mu, w);
        if (sum == 0.0) return 0.0;
        return w * std::exp(I * p * c - 0.5 * w * w * t * t) * sum;
    }
    Support support() const override { return {}; }
    Support effective_support() const override {
        double deg = double(a.size());
        double span = (40.0 + deg) * w;
        return {c - span, c + span};
    }
    bool is_zero() const override {
        return std::all_of(a.begin(), a.end(), [](cplx v) { return v == 0.0; });
    }
};

// Gauss-Legendre nodes on (-1, 1) pre-multiplied by exp(-s / (1 - t^2)).
struct BumpLevels {
    struct Level {
        int panels;
        std::vector<double> t, wf;
    };
    std::vector<Level> levels;
};

std::shared_ptr<const BumpLevels> bump_levels(double s) {
    static std::mutex mu;
    static std::map<double, std::shared_ptr<const BumpLevels>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;

    auto lv = std::make_shared<BumpLevels>();
    for (int panels : {64, 256, 1024, 4096}) {
        BumpLevels::Level L;
        L.panels = panels;
        const FixedRule r = composite_gauss_legendre(-1.0, 1.0, panels, 20);
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            const double t = r.x[i];
            const double v = std::exp(-s / (1.0 - t * t));
            if (v == 0.0) continue;
            L.t.push_back(t);
            L.wf.push_back(r.w[i] * v);
        }
        lv->levels.push_back(std::move(L));
    }
    cache.emplace(s, lv);
    return lv;
}

struct BumpImpl final : Impl {
    double a, b, s;
    cplx A;
    std::shared_ptr<const BumpLevels> levels;

    BumpImpl(double a_, double b_, double s_, cplx A_)
        : a(a_), b(b_), s(s_), A(A_), levels(bump_levels(s_)) {}

    double mid() const { return 0.5 * (a + b); }
    double half() const { return 0.5 * (b - a); }

    cplx value(double x) const override {
        if (!(x > a && x < b)) return 0.0;
        const double t = (x - mid()) / half();
        return A * std::exp(-s / (1.0 - t * t));
    }
    cplx dvalue(double x) const override {
        if (!(x > a && x < b)) return 0.0;
        const double t = (x - mid()) / half();
        const double u = 1.0 - t * t;
        return A * std::exp(-s / u) * (-2.0 * s * t / (u * u)) / half();
    }
    cplx fourier(cplx p) const override {
        if (A == 0.0) return 0.0;
        const cplx k = p * half();
        const double ak = std::abs(k);
        // Growth of e^{ipx} on the support decides whether the tail may be dropped.
        const bool bounded_on_support = p.imag() * a >= 0.0 && p.imag() * b >= 0.0;
        if (ak > 4000.0 / s && bounded_on_support) return 0.0;

        const BumpLevels::Level* use = nullptr;
        for (const auto& L : levels->levels)
            if (ak * 2.0 / L.panels <= 3.0) {
                use = &L;
                break;
            }
        cplx sum = 0.0;
        if (use) {
            for (std::size_t i = 0; i < use->t.size(); ++i)
                sum += use->wf[i] * std::exp(I * k * use->t[i]);
        } else {
            if (ak > 1e6)
                throw NonConvergence("bump Fourier transform requested at |p| L/2 = " +
                                     std::to_string(ak));
            const int panels = int(std::ceil(ak * 2.0 / 3.0));
            const FixedRule r = composite_gauss_legendre(-1.0, 1.0, panels, 20);
            for (std::size_t i = 0; i < r.x.size(); ++i) {
                const double t = r.x[i];
                const double v = std::exp(-s / (1.0 - t * t));
                if (v != 0.0) sum += r.w[i] * v * std::exp(I * k * t);
            }
        }
        return A * kInvSqrt2Pi * half() * std::exp(I * p * mid()) * sum;
    }
    Support support() const override { return {a, b}; }
    bool is_zero() const override { return A == 0.0; }
};

struct AffineImpl final : Impl {
    ImplPtr inner;
    double xi, lambda, scale;  // scale = e^lambda

    AffineImpl(ImplPtr in, double xi_, double lam)
        : inner(std::move(in)), xi(xi_), lambda(lam), scale(std::exp(lam)) {}

    cplx value(double x) const override { return inner->value((x - xi) / scale); }
    cplx dvalue(double x) const override { return inner->dvalue((x - xi) / scale) / scale; }
    cplx fourier(cplx p) const override {
        return scale * std::exp(I * p * xi) * inner->fourier(scale * p);
    }
    Support map(Support s) const { return {xi + scale * s.lo, xi + scale * s.hi}; }
    Support support() const override { return map(inner->support()); }
    Support effective_support() const override { return map(inner->effective_support()); }
    bool is_zero() const override { return inner->is_zero(); }
};

struct ReflectImpl final : Impl {
    ImplPtr inner;
    explicit ReflectImpl(ImplPtr in) : inner(std::move(in)) {}
    cplx value(double x) const override { return std::conj(inner->value(-x)); }
    cplx dvalue(double x) const override { return -std::conj(inner->dvalue(-x)); }
    cplx fourier(cplx p) const override { return std::conj(inner->fourier(std::conj(p))); }
    Support support() const override {
        const Support s = inner->support();
        return {-s.hi, -s.lo};
    }
    Support effective_support() const override {
        const Support s = inner->effective_support();
        return {-s.hi, -s.lo};
    }
    bool is_zero() const override { return inner->is_zero(); }
};

struct ScaleImpl final : Impl {
    ImplPtr inner;
    cplx c;
    ScaleImpl(ImplPtr in, cplx c_) : inner(std::move(in)), c(c_) {}
    cplx value(double x) const override { return c * inner->value(x); }
    cplx dvalue(double x) const override { return c * inner->dvalue(x); }
    cplx fourier(cplx p) const override { return c * inner->fourier(p); }
    Support support() const override { return inner->support(); }
    Support effective_support() const override { return inner->effective_support(); }
    bool is_zero() const override { return c == 0.0 || inner->is_zero(); }
};

struct DerivativeImpl final : Impl {
    ImplPtr inner;
    explicit DerivativeImpl(ImplPtr in) : inner(std::move(in)) {}
    cplx value(double x) const override { return inner->dvalue(x); }
    cplx dvalue(double) const override {
        throw InvalidArgument("pointwise second derivative is not available for this family");
    }
    cplx fourier(cplx p) const override { return -I * p * inner->fourier(p); }
    Support support() const override { return inner->support(); }
    Support effective_support() const override { return inner->effective_support(); }
    bool is_zero() const override { return inner->is_zero(); }
};

// Fourier side is exact: f~(p) = ∓ i phi(log(±p)) / |p| on the half-line ±p > 0.
struct CheckImpl final : Impl {
    TestFunction1D phi;
    int sign;
    QuadratureConfig cfg;

    CheckImpl(TestFunction1D ph, int sg) : phi(std::move(ph)), sign(sg) {
        cfg.abs_tol = 1e-13;
        cfg.rel_tol = 1e-11;
    }

    cplx transform(double xi, bool derivative) const {
        const Support s = phi.support();
        const double sg = sign;
        auto integrand = [&](double beta) {
            const double e = std::exp(beta);
            cplx v = phi(beta) * std::exp(cplx(0.0, -sg * xi * e));
            if (derivative) v *= cplx(0.0, -sg * e);
            return v;
        };
        const cplx integral = integrate(integrand, s.lo, s.hi, cfg, 16).value;
        return -sg * I * kInvSqrt2Pi * integral;
    }
    cplx value(double xi) const override { return transform(xi, false); }
    cplx dvalue(double xi) const override { return transform(xi, true); }
    cplx fourier(cplx p) const override {
        if (p.imag() != 0.0)
            throw NonAnalyticInput("Fourier transform of a check transform has no continuation");
        const double q = sign * p.real();
        if (!(q > 0)) return 0.0;
        return -double(sign) * I * phi(std::log(q)) / q;
    }
    Support support() const override { return {}; }
    bool is_zero() const override { return phi.is_zero(); }
};

struct ChiralImpl final : Impl {
    std::vector<TensorTerm> terms;
    bool left;
    QuadratureConfig cfg;

    ChiralImpl(std::vector<TensorTerm> t, bool l) : terms(std::move(t)), left(l) {
        cfg.abs_tol = 1e-13;
        cfg.rel_tol = 1e-11;
    }

    cplx integral(double xi, bool derivative) const {
        cplx total = 0.0;
        for (const auto& term : terms) {
            const Support sa = term.a.effective_support();
            const Support sb = term.b.effective_support();
            double lo = 2 * sa.lo - xi, hi = 2 * sa.hi - xi;
            if (left) {
                lo = std::max(lo, xi - 2 * sb.hi);
                hi = std::min(hi, xi - 2 * sb.lo);
            } else {
                lo = std::max(lo, xi + 2 * sb.lo);
                hi = std::min(hi, xi + 2 * sb.hi);
            }
            if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) continue;
            const double sg = left ? 1.0 : -1.0;
            auto f = [&](double xp) -> cplx {
                const double x0 = 0.5 * (xi + xp);
                const double x1 = sg * 0.5 * (xi - xp);
                if (!derivative) return term.a(x0) * term.b(x1);
                return 0.5 * term.a.dvalue(x0) * term.b(x1) +
                       sg * 0.5 * term.a(x0) * term.b.dvalue(x1);
            };
            total += term.coeff * 0.5 * integrate(f, lo, hi, cfg, 16).value;
        }
        return total;
    }
    cplx value(double xi) const override { return integral(xi, false); }
    cplx dvalue(double xi) const override { return integral(xi, true); }
    cplx fourier(cplx p) const override {
        cplx total = 0.0;
        for (const auto& term : terms)
            total += term.coeff * term.a.fourier(p) * term.b.fourier(left ? p : -p);
        return kSqrt2Pi * total;
    }
    Support span(bool effective) const {
        Support out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        for (const auto& term : terms) {
            const Support sa = effective ? term.a.effective_support() : term.a.support();
            const Support sb = effective ? term.b.effective_support() : term.b.support();
            const double lo = left ? sa.lo + sb.lo : sa.lo - sb.hi;
            const double hi = left ? sa.hi + sb.hi : sa.hi - sb.lo;
            out.lo = std::min(out.lo, lo);
            out.hi = std::max(out.hi, hi);
        }
        if (terms.empty()) return {0.0, 0.0};
        return out;
    }
    Support support() const override { return span(false); }
    Support effective_support() const override { return span(true); }
};

const GaussianImpl* as_gaussian(const ImplPtr& p) { return dynamic_cast<const GaussianImpl*>(p.get()); }
const BumpImpl* as_bump(const ImplPtr& p) { return dynamic_cast<const BumpImpl*>(p.get()); }

}  // namespace

TestFunction1D::TestFunction1D() : impl_(std::make_shared<ZeroImpl>()) {}

TestFunction1D::TestFunction1D(std::shared_ptr<const Impl> impl,
                               std::shared_ptr<const TestFunction1D> parent)
    : impl_(std::move(impl)), parent_(std::move(parent)) {}

TestFunction1D TestFunction1D::gaussian(double center, double width, double modulation,
                                        std::vector<cplx> coeffs) {
    if (!(width > 0)) throw InvalidArgument("Gaussian width must be positive");
    if (coeffs.empty()) coeffs = {0.0};
    return TestFunction1D(std::make_shared<GaussianImpl>(center, width, modulation, std::move(coeffs)));
}

TestFunction1D TestFunction1D::bump(double a, double b, double shape, cplx amplitude) {
    if (!(b > a)) throw InvalidArgument("bump support needs a < b");
    if (!(shape > 0)) throw InvalidArgument("bump shape exponent must be positive");
    return TestFunction1D(std::make_shared<BumpImpl>(a, b, shape, amplitude));
}

cplx TestFunction1D::operator()(double x) const { return impl_->value(x); }
cplx TestFunction1D::dvalue(double x) const { return impl_->dvalue(x); }
cplx TestFunction1D::fourier(cplx p) const { return impl_->fourier(p); }

cplx TestFunction1D::hat(int sign, cplx zeta) const {
    const cplx e = std::exp(zeta);
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return 0.0;
    const cplx ft = impl_->fourier(double(sign) * e);
    if (ft == 0.0) return 0.0;
    return double(sign) * I * e * ft;
}

Support TestFunction1D::support() const { return impl_->support(); }
Support TestFunction1D::effective_support() const { return impl_->effective_support(); }
bool TestFunction1D::is_zero() const { return impl_->is_zero(); }

const TestFunction1D& TestFunction1D::parent() const {
    if (!parent_) throw InvalidArgument("test function is not marked as a derivative");
    return *parent_;
}

TestFunction1D TestFunction1D::derivative() const {
    auto self = std::make_shared<const TestFunction1D>(*this);
    if (const auto* g = as_gaussian(impl_))
        return TestFunction1D(std::make_shared<GaussianImpl>(g->c, g->w, g->kappa, g->derivative_coeffs()),
                              self);
    return TestFunction1D(std::make_shared<DerivativeImpl>(impl_), self);
}

TestFunction1D TestFunction1D::reflect() const {
    ImplPtr out;
    if (const auto* g = as_gaussian(impl_)) {
        std::vector<cplx> a(g->a.size());
        for (std::size_t n = 0; n < a.size(); ++n) a[n] = std::conj(g->a[n]) * (n % 2 ? -1.0 : 1.0);
        out = std::make_shared<GaussianImpl>(-g->c, g->w, g->kappa, std::move(a));
    } else if (const auto* b = as_bump(impl_)) {
        out = std::make_shared<BumpImpl>(-b->b, -b->a, b->s, std::conj(b->A));
    } else if (impl_->is_zero()) {
        out = impl_;
    } else {
        out = std::make_shared<ReflectImpl>(impl_);
    }
    std::shared_ptr<const TestFunction1D> parent;
    if (parent_) parent = std::make_shared<const TestFunction1D>(parent_->reflect().scaled(-1.0));
    return TestFunction1D(out, parent);
}

TestFunction1D TestFunction1D::push(double xi, double lambda) const {
    ImplPtr out;
    const double e = std::exp(lambda);
    if (const auto* g = as_gaussian(impl_)) {
        std::vector<cplx> a(g->a.size());
        for (std::size_t n = 0; n < a.size(); ++n) a[n] = g->a[n] * std::exp(-double(n) * lambda);
        out = std::make_shared<GaussianImpl>(xi + e * g->c, e * g->w, g->kappa / e, std::move(a));
    } else if (const auto* b = as_bump(impl_)) {
        out = std::make_shared<BumpImpl>(xi + e * b->a, xi + e * b->b, b->s, b->A);
    } else if (impl_->is_zero()) {
        out = impl_;
    } else {
        out = std::make_shared<AffineImpl>(impl_, xi, lambda);
    }
    std::shared_ptr<const TestFunction1D> parent;
    if (parent_) parent = std::make_shared<const TestFunction1D>(parent_->push(xi, lambda).scaled(e));
    return TestFunction1D(out, parent);
}

TestFunction1D TestFunction1D::scaled(cplx c) const {
    ImplPtr out;
    if (const auto* g = as_gaussian(impl_)) {
        std::vector<cplx> a = g->a;
        for (auto& v : a) v *= c;
        out = std::make_shared<GaussianImpl>(g->c, g->w, g->kappa, std::move(a));
    } else if (const auto* b = as_bump(impl_)) {
        out = std::make_shared<BumpImpl>(b->a, b->b, b->s, b->A * c);
    } else {
        out = std::make_shared<ScaleImpl>(impl_, c);
    }
    std::shared_ptr<const TestFunction1D> parent;
    if (parent_) parent = std::make_shared<const TestFunction1D>(parent_->scaled(c));
    return TestFunction1D(out, parent);
}

std::function<cplx(cplx)> hat_transform(const TestFunction1D& f, int sign) {
    if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
    return [f, sign](cplx zeta) { return f.hat(sign, zeta); };
}

TestFunction1D check_transform(const TestFunction1D& phi, int sign) {
    if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
    if (phi.is_zero()) return TestFunction1D();
    if (!phi.support().bounded())
        throw InvalidArgument("check transform needs a compactly supported rapidity function");
    return TestFunction1D(std::make_shared<CheckImpl>(phi, sign));
}

TestFunction1D affine_push(const TestFunction1D& f, double xi, double lambda) {
    return f.push(xi, lambda);
}

Fn1 rapidity_packet(double center, double width, double phase, cplx amplitude) {
    return [=](double beta) {
        const double y = beta - center;
        return amplitude * std::exp(cplx(-y * y / (2 * width * width), phase * y));
    };
}

cplx pairing(const TestFunction1D& f, const TestFunction1D& g, const QuadratureConfig& cfg) {
    if (f.is_zero() || g.is_zero()) return 0.0;
    // p = sinh t spreads every scale of momentum over the rapidity line.
    auto integrand = [&](double t) {
        const double p = std::sinh(t);
        return std::cosh(t) * f.fourier(p) * g.fourier(-p);
    };
    return integrate(integrand, -cfg.cutoff, cfg.cutoff, cfg, 32).value;
}

TestFunction2D::TestFunction2D(std::vector<TensorTerm> terms) : terms_(std::move(terms)) {}

TestFunction2D TestFunction2D::tensor(const TestFunction1D& a, const TestFunction1D& b, cplx coeff) {
    return TestFunction2D({TensorTerm{coeff, a, b}});
}

cplx TestFunction2D::operator()(double x0, double x1) const {
    cplx v = 0.0;
    for (const auto& t : terms_) v += t.coeff * t.a(x0) * t.b(x1);
    return v;
}

cplx TestFunction2D::mass_shell(double m, int sign, double p) const {
    if (!(m >= 0)) throw InvalidArgument("mass must be non-negative");
    if (m == 0.0 && !is_derivative())
        throw MasslessInfraredDivergent(
            "m = 0 restriction needs a derivative test function (dp/|p| diverges at p = 0)");
    const double w = std::hypot(p, m);
    const double s = sign;
    cplx v = 0.0;
    for (const auto& t : terms_) v += t.coeff * t.a.fourier(s * w) * t.b.fourier(-s * p);
    return v;
}

cplx mass_shell_restriction(const TestFunction2D& f, double m, int sign, double p) {
    if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
    return f.mass_shell(m, sign, p);
}

TestFunction2D TestFunction2D::derivative(int k) const {
    if (k != 0 && k != 1) throw InvalidArgument("derivative index must be 0 or 1");
    std::vector<TensorTerm> out;
    for (const auto& t : terms_)
        out.push_back(k == 0 ? TensorTerm{t.coeff, t.a.derivative(), t.b}
                             : TensorTerm{t.coeff, t.a, t.b.derivative()});
    TestFunction2D f(std::move(out));
    f.parent_ = std::make_shared<const TestFunction2D>(*this);
    f.k_ = k;
    return f;
}

const TestFunction2D& TestFunction2D::parent() const {
    if (!parent_) throw InvalidArgument("2D test function is not marked as a derivative");
    return *parent_;
}

TestFunction2D TestFunction2D::reflect() const {
    std::vector<TensorTerm> out;
    for (const auto& t : terms_) out.push_back({std::conj(t.coeff), t.a.reflect(), t.b.reflect()});
    TestFunction2D f(std::move(out));
    if (parent_) {
        TestFunction2D g = parent_->reflect();
        for (auto& t : g.terms_) t.coeff = -t.coeff;
        f.parent_ = std::make_shared<const TestFunction2D>(std::move(g));
        f.k_ = k_;
    }
    return f;
}

TestFunction2D TestFunction2D::translate(double a0, double a1) const {
    std::vector<TensorTerm> out;
    for (const auto& t : terms_) out.push_back({t.coeff, t.a.push(a0, 0.0), t.b.push(a1, 0.0)});
    TestFunction2D f(std::move(out));
    if (parent_) {
        f.parent_ = std::make_shared<const TestFunction2D>(parent_->translate(a0, a1));
        f.k_ = k_;
    }
    return f;
}

TestFunction2D TestFunction2D::scaled(double lambda) const {
    if (!(lambda > 0)) throw InvalidArgument("scale must be positive");
    const double l = std::log(lambda);
    std::vector<TensorTerm> out;
    for (const auto& t : terms_)
        out.push_back({t.coeff / (lambda * lambda), t.a.push(0.0, l), t.b.push(0.0, l)});
    TestFunction2D f(std::move(out));
    if (parent_) {
        TestFunction2D g = parent_->scaled(lambda);
        for (auto& t : g.terms_) t.coeff *= lambda;
        f.parent_ = std::make_shared<const TestFunction2D>(std::move(g));
        f.k_ = k_;
    }
    return f;
}

TestFunction2D TestFunction2D::operator+(const TestFunction2D& o) const {
    std::vector<TensorTerm> out = terms_;
    out.insert(out.end(), o.terms_.begin(), o.terms_.end());
    TestFunction2D f(std::move(out));
    if (parent_ && o.parent_ && k_ == o.k_) {
        f.parent_ = std::make_shared<const TestFunction2D>(*parent_ + *o.parent_);
        f.k_ = k_;
    }
    return f;
}

ChiralPair chiral_components(const TestFunction2D& f) {
    return {TestFunction1D(std::make_shared<ChiralImpl>(f.terms(), true)),
            TestFunction1D(std::make_shared<ChiralImpl>(f.terms(), false))};
}

namespace {

cplx json_cplx(const nlohmann::json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigParseError("expected a number or a [re, im] pair");
}

double json_num(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigParseError(std::string("test function needs numeric '") + key + "'");
    return j[key].get<double>();
}

}  // namespace

TestFunction1D testfn1d_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        throw ConfigParseError("test function needs a string field 'family'");
    const std::string fam = j["family"];
    TestFunction1D f;
    if (fam == "bump") {
        const auto& s = j.at("support");
        if (!s.is_array() || s.size() != 2) throw ConfigParseError("bump 'support' must be [a, b]");
        f = TestFunction1D::bump(s[0].get<double>(), s[1].get<double>(), j.value("shape", 1.0),
                                 j.contains("amplitude") ? json_cplx(j["amplitude"]) : cplx(1.0));
    } else if (fam == "gaussian") {
        std::vector<cplx> coeffs{1.0};
        if (j.contains("coeffs")) {
            coeffs.clear();
            for (const auto& c : j["coeffs"]) coeffs.push_back(json_cplx(c));
        }
        f = TestFunction1D::gaussian(json_num(j, "center"), json_num(j, "width"),
                                     j.value("modulation", 0.0), coeffs);
    } else if (fam == "zero") {
        return TestFunction1D();
    } else {
        throw ConfigParseError("unknown test function family '" + fam + "'");
    }
    if (j.contains("shift") || j.contains("dilation"))
        f = f.push(j.value("shift", 0.0), j.value("dilation", 0.0));
    if (j.value("derivative", false)) f = f.derivative();
    return f;
}

TestFunction2D testfn2d_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("tensor2d") || !j["tensor2d"].is_array())
        throw ConfigParseError("2D test function needs an array 'tensor2d'");
    std::vector<TensorTerm> terms;
    for (const auto& t : j["tensor2d"]) {
        TensorTerm term;
        term.coeff = t.contains("coeff") ? json_cplx(t["coeff"]) : cplx(1.0);
        term.a = testfn1d_from_json(t.at("x0"));
        term.b = testfn1d_from_json(t.at("x1"));
        terms.push_back(std::move(term));
    }
    TestFunction2D g(std::move(terms));
    if (j.contains("derivative_index")) {
        const auto& k = j["derivative_index"];
        if (!k.is_number_integer()) throw ConfigParseError("derivative_index must be 0 or 1");
        return g.derivative(k.get<int>());
    }
    return g;
}

}  // namespace zfscale
