#pragma once

#include "zfscale/numerics.hpp"
#include "zfscale/scattering.hpp"

#include <json.hpp>

#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace zfscale {

enum class GenKind { Create, Annihilate };

struct Generator {
    GenKind kind;
    int var;
};
using Word = std::vector<Generator>;

inline Generator cre(int v) { return {GenKind::Create, v}; }
inline Generator ann(int v) { return {GenKind::Annihilate, v}; }

enum class Mode { Momentum, Rapidity };

// Contractions carry omega_p delta(p - q) in momentum mode, delta(b - b') in rapidity mode.
struct NormalTerm {
    std::vector<std::pair<int, int>> contractions;  // (annihilator var, creator var)
    std::vector<std::pair<int, int>> s_factors;     // (u, v): S(u, v), or S(u - v) in rapidity mode
    Word residual;                                  // creators then annihilators
};

struct ZFNormalForm {
    Mode mode = Mode::Momentum;
    std::vector<NormalTerm> terms;

    nlohmann::json to_json() const;
};

constexpr std::size_t kMaxWordLength = 8;

ZFNormalForm normal_order(const Word& word, Mode mode);
ZFNormalForm vacuum_part(const ZFNormalForm& nf);

// Binding of the symbolic S-factors and measures. Every mode integrates over a rapidity t:
// massive p = m sinh t (dp/w_p = dt), massless p = -e^t (left) or e^t (right), rapidity beta = t.
enum class EvalMode { Massive, Massless, Rapidity };

struct EvalContext {
    EvalMode mode = EvalMode::Rapidity;
    ScatteringFunction S;
    double mass = 1.0;

    static EvalContext massive(ScatteringFunction S, double m);
    static EvalContext massless(ScatteringFunction S);
    static EvalContext rapidity(ScatteringFunction S);

    Mode symbolic_mode() const { return mode == EvalMode::Rapidity ? Mode::Rapidity : Mode::Momentum; }
    double physical(double t, int branch) const;
    cplx kernel(double tu, int bu, double tv, int bv) const;
    // True when S between the two branches does not depend on the rapidities.
    bool constant_between(int bu, int bv) const;
};

constexpr unsigned kLeftBranch = 1u;
constexpr unsigned kRightBranch = 2u;

// One-particle argument as a function of the physical variable (momentum or rapidity).
struct Arg {
    Fn1 f;
    unsigned branches = kLeftBranch | kRightBranch;  // massless mode only
    double lo = -std::numeric_limits<double>::infinity();  // window in t
    double hi = std::numeric_limits<double>::infinity();
};

// Non-factorizing weight in the physical variables of several word variables.
struct Coupling {
    std::vector<int> vars;
    FnN fn;
};

cplx evaluate_vacuum_expectation(const ZFNormalForm& nf, const EvalContext& ctx,
                                 const std::map<int, Arg>& args, const QuadratureConfig& cfg,
                                 const std::vector<Coupling>& couplings = {});

// Grid evaluation: variables sit on grid points, delta -> delta_ij / w_i.
using TwoPointKernel = std::function<cplx(double, double)>;
cplx evaluate_discrete(const ZFNormalForm& nf, const std::map<int, int>& grid_index,
                       const std::vector<double>& x, const std::vector<double>& w,
                       const TwoPointKernel& S2);

// Smeared operator algebra on top of the engine.
struct SmearedGen {
    GenKind kind;
    Arg arg;
};

struct SmearedWord {
    cplx coeff = 1.0;
    std::vector<SmearedGen> gens;
    std::vector<Coupling> couplings;  // vars index positions in gens
};

struct OperatorExpr {
    std::vector<SmearedWord> words;

    static OperatorExpr identity();
    static OperatorExpr single(GenKind kind, Arg arg, cplx coeff = 1.0);
    static OperatorExpr word(SmearedWord w);

    OperatorExpr operator*(const OperatorExpr& o) const;
    OperatorExpr operator+(const OperatorExpr& o) const;
    OperatorExpr scaled(cplx c) const;
    OperatorExpr adjoint() const;
};

// z^dagger(psi_1) ... z^dagger(psi_n) as an operator.
OperatorExpr creation_word(const std::vector<Arg>& psis);

cplx vacuum_expectation(const OperatorExpr& expr, const EvalContext& ctx,
                        const QuadratureConfig& cfg);
// <bra Omega, op ket Omega>
cplx matrix_element(const OperatorExpr& bra, const OperatorExpr& op, const OperatorExpr& ket,
                    const EvalContext& ctx, const QuadratureConfig& cfg);

}  // namespace zfscale
