#include "zfscale/numerics.hpp"

#include "zfscale/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <thread>

namespace zfscale {

namespace {

struct Panel {
    double a, b;
    cplx value;
    double error;
};

struct PanelOrder {
    bool operator()(const Panel& l, const Panel& r) const {
        if (l.error != r.error) return l.error < r.error;
        return l.a > r.a;
    }
};

Panel g7k15(const Fn1& f, double a, double b) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    using g7 = boost::math::quadrature::gauss<double, 7>;
    const auto& xk = gk::abscissa();
    const auto& wk = gk::weights();
    const auto& wg = g7::weights();

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx f0 = f(c);
    cplx kron = wk[0] * f0;
    cplx gauss = wg[0] * f0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double dx = h * xk[i];
        const cplx pair = f(c - dx) + f(c + dx);
        kron += wk[i] * pair;
        if (i % 2 == 0) gauss += wg[i / 2] * pair;
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0) || !(cutoff > 0) || max_subdivisions < 1 ||
        initial_panels < 1)
        throw InvalidArgument("quadrature config requires positive tolerances, cutoff and panel counts");
}

QuadratureConfig QuadratureConfig::scaled(double factor) const {
    QuadratureConfig c = *this;
    c.abs_tol *= factor;
    c.rel_tol *= factor;
    return c;
}

QuadResult integrate(const Fn1& f, double a, double b, const QuadratureConfig& cfg) {
    return integrate(f, a, b, cfg, cfg.initial_panels);
}

QuadResult integrate(const Fn1& f, double a, double b, const QuadratureConfig& cfg,
                     int initial_panels) {
    cfg.validate();
    if (a == b) return {};
    if (a > b) {
        QuadResult r = integrate(f, b, a, cfg, initial_panels);
        r.value = -r.value;
        return r;
    }

    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    cplx total = 0.0;
    double err = 0.0;
    const int n0 = std::max(1, initial_panels);
    for (int i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * i / n0;
        const double hi = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
        Panel p = g7k15(f, lo, hi);
        total += p.value;
        err += p.error;
        heap.push(p);
    }

    int panels = n0;
    while (err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        if (panels >= cfg.max_subdivisions)
            throw NonConvergence("adaptive quadrature exhausted " +
                                 std::to_string(cfg.max_subdivisions) + " panels on [" +
                                 std::to_string(a) + ", " + std::to_string(b) +
                                 "], error estimate " + std::to_string(err));
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw NonConvergence("panel width reached machine resolution near " +
                                 std::to_string(worst.a));
        Panel left = g7k15(f, worst.a, mid);
        Panel right = g7k15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // Re-sum to shed the drift of the running updates.
    cplx resum = 0.0;
    double eresum = 0.0;
    while (!heap.empty()) {
        resum += heap.top().value;
        eresum += heap.top().error;
        heap.pop();
    }
    return {resum, eresum, panels};
}

QuadResult integrate_1d(const Fn1& f, const QuadratureConfig& cfg) {
    return integrate(f, -cfg.cutoff, cfg.cutoff, cfg);
}

namespace {

QuadResult nested(const FnN& f, const Box& box, std::size_t level, std::vector<double>& x,
                  const QuadratureConfig& cfg) {
    if (level + 1 == box.size()) {
        return integrate(
            [&](double t) {
                x[level] = t;
                return f(x);
            },
            box[level].first, box[level].second, cfg);
    }
    const QuadratureConfig inner = cfg.scaled(0.1);
    double inner_err = 0.0;
    QuadResult outer = integrate(
        [&](double t) {
            std::vector<double> local = x;
            local[level] = t;
            QuadResult r = nested(f, box, level + 1, local, inner);
            inner_err = std::max(inner_err, r.error);
            return r.value;
        },
        box[level].first, box[level].second, cfg);
    outer.error += inner_err * (box[level].second - box[level].first);
    return outer;
}

}  // namespace

QuadResult integrate_nd(const FnN& f, const Box& box, const QuadratureConfig& cfg) {
    if (box.size() > 4)
        throw DimensionTooLarge("integrate_nd supports at most 4 dimensions, got " +
                                std::to_string(box.size()));
    if (box.empty()) return {f({}), 0.0, 0};
    std::vector<double> x(box.size(), 0.0);
    return nested(f, box, 0, x, cfg);
}

QuadResult integrate_nd(const FnN& f, int n, const QuadratureConfig& cfg) {
    if (n < 0) throw InvalidArgument("negative dimension");
    if (n > 4)
        throw DimensionTooLarge("integrate_nd supports at most 4 dimensions, got " +
                                std::to_string(n));
    return integrate_nd(f, Box(static_cast<std::size_t>(n), {-cfg.cutoff, cfg.cutoff}), cfg);
}

FixedRule composite_gauss_legendre(double a, double b, int panels, int order) {
    if (order != 20 && order != 10)
        throw InvalidArgument("composite_gauss_legendre supports orders 10 and 20");
    auto fill = [&](const auto& xs, const auto& ws) {
        FixedRule r;
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double c = a + (p + 0.5) * h;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                r.x.push_back(c - 0.5 * h * xs[i]);
                r.w.push_back(0.5 * h * ws[i]);
                r.x.push_back(c + 0.5 * h * xs[i]);
                r.w.push_back(0.5 * h * ws[i]);
            }
        }
        return r;
    };
    if (order == 20)
        return fill(boost::math::quadrature::gauss<double, 20>::abscissa(),
                    boost::math::quadrature::gauss<double, 20>::weights());
    return fill(boost::math::quadrature::gauss<double, 10>::abscissa(),
                boost::math::quadrature::gauss<double, 10>::weights());
}

StripIntegrand::StripIntegrand(std::vector<StripFactor> factors) : factors_(std::move(factors)) {}

StripIntegrand& StripIntegrand::times(StripFactor factor) {
    factors_.push_back(std::move(factor));
    return *this;
}

StripIntegrand StripIntegrand::zero() {
    StripIntegrand g;
    g.zero_ = true;
    return g;
}

void StripIntegrand::require_continuations() const {
    for (const auto& fac : factors_)
        if (!fac.continuation)
            throw NonAnalyticInput("factor '" + fac.name + "' has no strip continuation rule");
}

cplx StripIntegrand::operator()(cplx zeta) const {
    if (zero_) return 0.0;
    cplx v = 1.0;
    for (const auto& fac : factors_) v *= fac.continuation(zeta);
    return v;
}

QuadResult integrate_contour(const StripIntegrand& g, const Contour& c,
                             const QuadratureConfig& cfg) {
    if (g.is_zero()) return {};
    g.require_continuations();
    return integrate_1d([&](double t) { return g(cplx(t, c.offset)); }, cfg);
}

double contour_shift_compare(const StripIntegrand& g, const QuadratureConfig& cfg) {
    if (g.is_zero()) return 0.0;
    g.require_continuations();
    const cplx lower = integrate_contour(g, Contour{0.0}, cfg).value;
    const cplx upper = integrate_contour(g, Contour{M_PI}, cfg).value;
    return std::abs(lower - upper);
}

unsigned thread_count() {
    if (const char* env = std::getenv("ZFSCALE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace zfscale
