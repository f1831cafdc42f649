#pragma once

#include "zfscale/numerics.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

namespace zfscale {

struct Support {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    bool contains(double x) const { return x > lo && x < hi; }
};

// Fourier convention: f~(p) = (2 pi)^{-1/2} int f(x) e^{i p x} dx.
class TestFunction1D {
public:
    struct Impl;

    TestFunction1D();  // identically zero

    // e^{i k y} e^{-y^2 / 2 w^2} sum_n a_n y^n with y = x - center
    static TestFunction1D gaussian(double center, double width, double modulation = 0.0,
                                   std::vector<cplx> coeffs = {1.0});
    // amplitude * exp(-shape / (1 - t^2)), t the affine image of (a, b) on (-1, 1)
    static TestFunction1D bump(double a, double b, double shape = 1.0, cplx amplitude = 1.0);

    cplx operator()(double x) const;
    cplx fourier(cplx p) const;
    // f^±(zeta) = ± i e^zeta f~(± e^zeta); complex zeta continues into the strip
    cplx hat(int sign, cplx zeta) const;

    // Declared support; effective_support also truncates rapidly decaying tails.
    Support support() const;
    Support effective_support() const;

    bool is_zero() const;
    bool is_derivative() const { return parent_ != nullptr; }
    const TestFunction1D& parent() const;

    TestFunction1D derivative() const;
    // f^j(x) = conj f(-x)
    TestFunction1D reflect() const;
    // f^{xi, lambda}(x) = f(e^{-lambda}(x - xi))
    TestFunction1D push(double xi, double lambda) const;
    TestFunction1D scaled(cplx c) const;

    // pointwise derivative of the represented function
    cplx dvalue(double x) const;

    explicit TestFunction1D(std::shared_ptr<const Impl> impl,
                            std::shared_ptr<const TestFunction1D> parent = nullptr);
    const std::shared_ptr<const Impl>& impl() const { return impl_; }

private:
    std::shared_ptr<const Impl> impl_;
    std::shared_ptr<const TestFunction1D> parent_;
};

struct TestFunction1D::Impl {
    virtual ~Impl() = default;
    virtual cplx value(double x) const = 0;
    virtual cplx dvalue(double x) const = 0;
    virtual cplx fourier(cplx p) const = 0;
    virtual Support support() const = 0;
    virtual Support effective_support() const { return support(); }
    virtual bool is_zero() const { return false; }
};

// Hat transforms as standalone functions of the rapidity.
std::function<cplx(cplx)> hat_transform(const TestFunction1D& f, int sign);

// phi^v±(xi) = ∓ i (2 pi)^{-1/2} int phi(beta) e^{∓ i xi e^beta} d beta for a bounded-support phi.
TestFunction1D check_transform(const TestFunction1D& phi, int sign);

TestFunction1D affine_push(const TestFunction1D& f, double xi, double lambda);

// Gaussian packet in rapidity space, used for one-particle wavefunctions.
Fn1 rapidity_packet(double center, double width, double phase = 0.0, cplx amplitude = 1.0);

// int f g dx evaluated in Fourier space: int f~(p) g~(-p) dp
cplx pairing(const TestFunction1D& f, const TestFunction1D& g, const QuadratureConfig& cfg);

struct TensorTerm {
    cplx coeff = 1.0;
    TestFunction1D a;  // factor in x0
    TestFunction1D b;  // factor in x1
};

class TestFunction2D {
public:
    TestFunction2D() = default;
    explicit TestFunction2D(std::vector<TensorTerm> terms);
    static TestFunction2D tensor(const TestFunction1D& a, const TestFunction1D& b,
                                 cplx coeff = 1.0);

    cplx operator()(double x0, double x1) const;
    const std::vector<TensorTerm>& terms() const { return terms_; }

    // f^{m±}(p) = (1/2 pi) int f(x) e^{± i (w_p x0 - p x1)} d^2x
    cplx mass_shell(double m, int sign, double p) const;

    TestFunction2D derivative(int k) const;
    bool is_derivative() const { return parent_ != nullptr; }
    int derivative_index() const { return k_; }
    const TestFunction2D& parent() const;

    TestFunction2D reflect() const;                       // conj f(-x)
    TestFunction2D translate(double a0, double a1) const;  // f(x - a)
    TestFunction2D scaled(double lambda) const;           // lambda^{-2} f(x / lambda)
    TestFunction2D operator+(const TestFunction2D& o) const;

private:
    std::vector<TensorTerm> terms_;
    std::shared_ptr<const TestFunction2D> parent_;
    int k_ = -1;
};

cplx mass_shell_restriction(const TestFunction2D& f, double m, int sign, double p);

// f_l(xi) = 1/2 int f((xi + xi')/2, (xi - xi')/2) dxi', f_r with x1 -> -x1.
struct ChiralPair {
    TestFunction1D left, right;
};
ChiralPair chiral_components(const TestFunction2D& f);

// {"family":"bump","support":[a,b],"shape":s,"amplitude":A}
// {"family":"gaussian","center":c,"width":w,"modulation":k,"coeffs":[[re,im],...]}
// optional "derivative": true
TestFunction1D testfn1d_from_json(const nlohmann::json& j);
// {"tensor2d":[{"coeff":[re,im],"x0":{...},"x1":{...}}, ...], "derivative_index":0|1}
TestFunction2D testfn2d_from_json(const nlohmann::json& j);

}  // namespace zfscale
