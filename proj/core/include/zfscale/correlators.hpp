#pragma once

#include "zfscale/scattering.hpp"
#include "zfscale/testfn.hpp"
#include "zfscale/zf.hpp"

#include <vector>

namespace zfscale {

struct FieldSpec {
    TestFunction2D f;
    bool primed = false;
};

struct CorrelatorRequest {
    MassKernel kernel;
    double lambda = 1.0;
    std::vector<FieldSpec> fields;
};

constexpr std::size_t kMaxFields = 4;

// phi_m(f) = z+(f^{m+}) + z(f^{m-}) with scaled arguments f^{lambda m ±}(lambda p).
OperatorExpr scaled_field(const TestFunction2D& f, double mass, double lambda);

// W_m^{n, lambda}(f_1, ..., f_n) = <Omega, phi(f_1 lambda) ... phi(f_n lambda) Omega>
cplx npoint(const CorrelatorRequest& req, const QuadratureConfig& cfg);

struct ConvergenceRow {
    double lambda;
    cplx massive, massless;
    double abs_diff, rel_diff;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool verdict = false;
};

std::vector<double> default_lambdas();  // 1, 1e-1, ..., 1e-6

ConvergenceReport scaling_limit_experiment(const MassKernel& kernel,
                                           const std::vector<FieldSpec>& fields,
                                           const std::vector<double>& lambdas,
                                           const QuadratureConfig& cfg, double noise = 1e-9);

// Massless creation-word state: left movers first, then right movers (rapidity functions).
struct LightRayState {
    std::vector<Fn1> left, right;
};

struct FieldSplitElement {
    cplx lhs, rhs;
};

// <Phi, phi_0(f) Psi> directly and through the chiral fields of the primitive g, f = d_k g.
FieldSplitElement field_split_element(const ScatteringFunction& S, const TestFunction2D& f,
                                      const LightRayState& bra, const LightRayState& ket,
                                      const QuadratureConfig& cfg);

double massless_chiral_decomposition_check(
    const ScatteringFunction& S, const TestFunction2D& f,
    const std::vector<std::pair<LightRayState, LightRayState>>& elements,
    const QuadratureConfig& cfg);

}  // namespace zfscale
