#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace zfscale {

using cplx = std::complex<double>;
using Fn1 = std::function<cplx(double)>;
using FnN = std::function<cplx(const std::vector<double>&)>;

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double cutoff = 40.0;  // rapidity cutoff B
    int max_subdivisions = 4000;
    int initial_panels = 8;

    void validate() const;
    QuadratureConfig scaled(double factor) const;
};

struct QuadResult {
    cplx value{};
    double error = 0.0;
    int panels = 0;
};

// Global adaptive G7K15 on [a, b]; real and imaginary parts share panels.
QuadResult integrate(const Fn1& f, double a, double b, const QuadratureConfig& cfg);
QuadResult integrate(const Fn1& f, double a, double b, const QuadratureConfig& cfg,
                     int initial_panels);

// Same rule on [-B, B].
QuadResult integrate_1d(const Fn1& f, const QuadratureConfig& cfg);

using Box = std::vector<std::pair<double, double>>;

// Nested adaptive integration, n <= 4.
QuadResult integrate_nd(const FnN& f, const Box& box, const QuadratureConfig& cfg);
QuadResult integrate_nd(const FnN& f, int n, const QuadratureConfig& cfg);

// Fixed composite Gauss-Legendre rule on [a, b] with `panels` panels of `order` nodes.
struct FixedRule {
    std::vector<double> x;
    std::vector<double> w;
};
FixedRule composite_gauss_legendre(double a, double b, int panels, int order = 20);

// Horizontal contour R + i*offset, truncated to [-B, B].
struct Contour {
    double offset = 0.0;
};

struct StripFactor {
    std::string name;
    std::function<cplx(cplx)> continuation;  // empty: no continuation rule known
};

// Product of strip-analytic factors, evaluated only through their continuations.
class StripIntegrand {
public:
    StripIntegrand() = default;
    explicit StripIntegrand(std::vector<StripFactor> factors);

    StripIntegrand& times(StripFactor factor);
    cplx operator()(cplx zeta) const;
    bool empty() const { return factors_.empty(); }
    bool is_zero() const { return zero_; }
    static StripIntegrand zero();
    void require_continuations() const;

private:
    std::vector<StripFactor> factors_;
    bool zero_ = false;
};

QuadResult integrate_contour(const StripIntegrand& g, const Contour& c,
                             const QuadratureConfig& cfg);

// |int_R g - int_{R + i pi} g|
double contour_shift_compare(const StripIntegrand& g, const QuadratureConfig& cfg);

// Worker count from ZFSCALE_THREADS (default: hardware concurrency).
unsigned thread_count();

// Runs body(i) for i in [0, n); results must be written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace zfscale
