#pragma once

#include "zfscale/fock.hpp"
#include "zfscale/testfn.hpp"
#include "zfscale/zf.hpp"

#include <utility>
#include <vector>

namespace zfscale {

using RapidityWord = std::vector<Fn1>;  // y+(psi_1) ... y+(psi_n) Omega
using StatePair = std::pair<RapidityWord, RapidityWord>;

// psi(f) = y+(e^{b/2} sqrt(i) f~(e^b)) + y(e^{b/2} f~(-e^b) / sqrt(i)), sqrt(i) = e^{i pi/4}
OperatorExpr fermi_field(const TestFunction1D& f);

// sup over elements of |<Phi, {psi(f), psi(g)} Psi> - (int f g) <Phi, Psi>|
double anticommutator_check(const TestFunction1D& f, const TestFunction1D& g,
                            const std::vector<StatePair>& elements, const QuadratureConfig& cfg);

struct CarNorm {
    double computed;  // norm of y+(psi) on the S-symmetric states below the cap
    double grid;      // (sum_i w_i |psi_i|^2)^{1/2}
};
CarNorm car_norm_check(const std::vector<cplx>& psi, const TruncatedFock& tf);

// T(h) as four double-rapidity blocks; window hi cuts the rapidities where h^ is negligible.
OperatorExpr energy_density(const TestFunction1D& h, double hi);
// Unsmeared T(xi); the blocks factorize into one-particle arguments.
OperatorExpr energy_density_at(double xi);

struct EnergyDensityElement {
    cplx value;
    bool selection_rule_violation;  // particle numbers differ by something other than 0, 2
};
EnergyDensityElement energy_density_matrix_element(const TestFunction1D& h, const RapidityWord& bra,
                                                   const RapidityWord& ket, const QuadratureConfig& cfg);

struct IntegralTResult {
    cplx t_integral;                            // widest flat-top smearing
    cplx h_value;                               // <Phi, H Psi>
    std::vector<std::pair<double, cplx>> sweep;  // (W, int h_W T)
    double rel;
};
IntegralTResult integral_T_element(const RapidityWord& bra, const RapidityWord& ket,
                                   const QuadratureConfig& cfg,
                                   const std::vector<double>& widths = {5, 10, 20, 40},
                                   double edge = 1.0);
double integral_T_equals_H(const std::vector<StatePair>& elements, const QuadratureConfig& cfg);

struct SmearingCase {
    double width1, width2, separation;
};

struct CentralChargeRow {
    SmearingCase smearing;
    double data;    // <Omega, i[T(h1), T(h2)] Omega>
    double shape;   // (1/24 pi) int h1 h2'''
    double c_fit;   // data / shape
};

struct CentralChargeResult {
    double c_closed;  // from the full two-point function against its k^3 form
    double c_fit;     // least-squares coefficient of the delta''' term
    std::vector<CentralChargeRow> rows;
};

std::vector<SmearingCase> default_smearing_cases();
CentralChargeResult central_charge_extract(const QuadratureConfig& cfg,
                                           const std::vector<SmearingCase>& cases = default_smearing_cases());

// <Omega, T(h1) T(h2) Omega> through the operator engine.
cplx energy_two_point(const TestFunction1D& h1, const TestFunction1D& h2, const QuadratureConfig& cfg);
// int_0^inf k^3 2 pi h1~(-k) h2~(k) dk
cplx energy_two_point_shape(const TestFunction1D& h1, const TestFunction1D& h2, const QuadratureConfig& cfg);
// <Omega, i[T(h1), T(h2)] Omega> from the two-particle wavefunctions of T(h) Omega.
double commutator_data(const TestFunction1D& h1, const TestFunction1D& h2, const QuadratureConfig& cfg);

struct LuscherMack {
    double lhs, rhs, residual;
};
LuscherMack luscher_mack_residual(const TestFunction1D& h1, const TestFunction1D& h2,
                                  const QuadratureConfig& cfg);

}  // namespace zfscale
