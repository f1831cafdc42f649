#pragma once

#include "zfscale/numerics.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace zfscale {

// S(zeta) = epsilon * prod_k (sinh zeta - sinh b_k) / (sinh zeta + sinh b_k)
class ScatteringFunction {
public:
    ScatteringFunction() = default;

    static ScatteringFunction make_limit_family(int epsilon, std::vector<cplx> zeros,
                                                bool auto_complete = true);
    static ScatteringFunction free_function();
    static ScatteringFunction ising();
    // zero at i*a, a = pi g^2 / (4 pi + g^2), folded into (0, pi/2]
    static ScatteringFunction sinh_gordon(double g);

    int epsilon() const { return epsilon_; }
    const std::vector<cplx>& zeros() const { return zeros_; }
    std::size_t zero_count() const { return zeros_.size(); }
    bool is_constant() const { return zeros_.empty(); }

    // Closed-form value for any complex zeta; throws PoleHit.
    cplx operator()(cplx zeta) const;
    cplx at(double theta) const;
    // Same product written in terms of s = sinh(zeta).
    cplx from_sinh(cplx s) const;

    int limit_value() const { return epsilon_; }
    std::string describe() const;

private:
    int epsilon_ = 1;
    std::vector<cplx> zeros_;
    std::vector<cplx> sinh_zeros_;
};

// Evaluation restricted to the closed strip 0 <= Im zeta <= pi.
cplx eval_strip(const ScatteringFunction& S, cplx zeta);
int limit_value(const ScatteringFunction& S);

struct RelationResiduals {
    double unitarity = 0;  // |conj(S(t)) S(t) - 1|
    double crossing = 0;   // |S(t + i pi) - S(-t)|
    double inverse = 0;    // |S(-t) S(t) - 1|
    double hermitian = 0;  // |conj(S(t)) - S(-t)|
    double boundary = 0;   // ||S(t + i pi)| - 1|
    double max() const;
};
RelationResiduals relation_residuals(const ScatteringFunction& S,
                                     const std::vector<double>& thetas);

class MassKernel {
public:
    MassKernel(ScatteringFunction S, double mass);

    const ScatteringFunction& base() const { return S_; }
    double mass() const { return m_; }
    bool massless() const { return m_ == 0.0; }
    MassKernel with_mass(double m) const { return MassKernel(S_, m); }

    // S_m(p, q) for m > 0, S_0(p, q) for m = 0.
    cplx operator()(double p, double q) const;

private:
    ScatteringFunction S_;
    double m_;
};

cplx massive_eval(const MassKernel& K, double p, double q);
cplx massless_eval(const MassKernel& K, double p, double q);

struct ScalingRow {
    double lambda, p, q, diff;
};

// |S_{lambda m}(p, q) - S_0(p, q)| for every point and lambda.
std::vector<ScalingRow> scaling_convergence_table(const ScatteringFunction& S, double m,
                                                  const std::vector<std::pair<double, double>>& points,
                                                  const std::vector<double>& lambdas);

// Non-increasing in the row order for each (p, q), up to noise.
bool scaling_trend_ok(const std::vector<ScalingRow>& rows, double noise = 1e-9);

// {"type":"blaschke","epsilon":1,"zeros":[[re,im],...]} | {"type":"sinh_gordon","g":1.2}
// | {"type":"ising"} | {"type":"free"}
ScatteringFunction scattering_from_json(const nlohmann::json& j);
nlohmann::json scattering_to_json(const ScatteringFunction& S);

}  // namespace zfscale
