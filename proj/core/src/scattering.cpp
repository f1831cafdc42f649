#include "zfscale/scattering.hpp"

#include "zfscale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace zfscale {

namespace {

constexpr double kPoleTol = 1e-14;
constexpr double kPairTol = 1e-12;

bool same(cplx a, cplx b) { return std::abs(a - b) <= kPairTol * std::max(1.0, std::abs(a)); }

cplx partner(cplx b) { return -std::conj(b); }

}  // namespace

ScatteringFunction ScatteringFunction::make_limit_family(int epsilon, std::vector<cplx> zeros,
                                                         bool auto_complete) {
    if (epsilon != 1 && epsilon != -1)
        throw InvalidArgument("epsilon must be +1 or -1, got " + std::to_string(epsilon));
    for (const cplx& b : zeros) {
        if (!(b.imag() > 0.0) || b.imag() > M_PI / 2 + 1e-15) {
            std::ostringstream os;
            os << "zero " << b << " violates 0 < Im b <= pi/2";
            throw ZeroOutOfStrip(os.str());
        }
    }

    // Pair every zero with its reflection -conj(b); self-paired zeros sit on the imaginary axis.
    std::vector<cplx> closed;
    std::vector<bool> used(zeros.size(), false);
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const cplx b = zeros[i];
        closed.push_back(b);
        if (same(b, partner(b))) continue;
        bool found = false;
        for (std::size_t k = i + 1; k < zeros.size(); ++k) {
            if (!used[k] && same(zeros[k], partner(b))) {
                used[k] = true;
                closed.push_back(zeros[k]);
                found = true;
                break;
            }
        }
        if (!found) {
            if (!auto_complete) {
                std::ostringstream os;
                os << "zero " << b << " has no partner " << partner(b);
                throw NonClosedUnderReflection(os.str());
            }
            closed.push_back(partner(b));
        }
    }

    ScatteringFunction S;
    S.epsilon_ = epsilon;
    S.zeros_ = std::move(closed);
    for (const cplx& b : S.zeros_) S.sinh_zeros_.push_back(std::sinh(b));
    return S;
}

ScatteringFunction ScatteringFunction::free_function() { return make_limit_family(1, {}); }

ScatteringFunction ScatteringFunction::ising() { return make_limit_family(-1, {}); }

ScatteringFunction ScatteringFunction::sinh_gordon(double g) {
    if (!(g > 0)) throw InvalidArgument("sinh-Gordon coupling must be positive");
    const double g2 = g * g;
    double a = M_PI * g2 / (4 * M_PI + g2);
    // sinh(i a) = i sin a, so a and pi - a give the same function.
    a = std::min(a, M_PI - a);
    return make_limit_family(1, {cplx(0.0, a)});
}

cplx ScatteringFunction::from_sinh(cplx s) const {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) return double(epsilon_);
    cplx v = double(epsilon_);
    for (const cplx& sb : sinh_zeros_) {
        const cplx den = s + sb;
        if (std::abs(den) < kPoleTol) {
            std::ostringstream os;
            os << "sinh(zeta) = " << s << " hits the pole of the factor with sinh b = " << sb;
            throw PoleHit(os.str());
        }
        v *= (s - sb) / den;
    }
    return v;
}

cplx ScatteringFunction::operator()(cplx zeta) const {
    if (zeros_.empty()) return double(epsilon_);
    // Far out on the strip the factors equal 1 to double precision.
    if (std::abs(zeta.real()) > 700.0) return double(epsilon_);
    return from_sinh(std::sinh(zeta));
}

cplx ScatteringFunction::at(double theta) const { return (*this)(cplx(theta, 0.0)); }

std::string ScatteringFunction::describe() const {
    std::ostringstream os;
    os << "epsilon=" << epsilon_ << " zeros=[";
    for (std::size_t i = 0; i < zeros_.size(); ++i) os << (i ? "," : "") << zeros_[i];
    os << "]";
    return os.str();
}

cplx eval_strip(const ScatteringFunction& S, cplx zeta) {
    if (zeta.imag() < -1e-15 || zeta.imag() > M_PI + 1e-15) {
        std::ostringstream os;
        os << "zeta = " << zeta << " lies outside the closed strip 0 <= Im <= pi";
        throw InvalidArgument(os.str());
    }
    return S(zeta);
}

int limit_value(const ScatteringFunction& S) { return S.limit_value(); }

double RelationResiduals::max() const {
    return std::max({unitarity, crossing, inverse, hermitian, boundary});
}

RelationResiduals relation_residuals(const ScatteringFunction& S,
                                     const std::vector<double>& thetas) {
    RelationResiduals r;
    for (double t : thetas) {
        const cplx s = S.at(t);
        const cplx sm = S.at(-t);
        const cplx sp = S(cplx(t, M_PI));
        r.unitarity = std::max(r.unitarity, std::abs(std::conj(s) * s - 1.0));
        r.crossing = std::max(r.crossing, std::abs(sp - sm));
        r.inverse = std::max(r.inverse, std::abs(sm * s - 1.0));
        r.hermitian = std::max(r.hermitian, std::abs(std::conj(s) - sm));
        r.boundary = std::max(r.boundary, std::abs(std::abs(sp) - 1.0));
    }
    return r;
}

MassKernel::MassKernel(ScatteringFunction S, double mass) : S_(std::move(S)), m_(mass) {
    if (!(mass >= 0)) throw InvalidArgument("mass must be non-negative");
}

cplx MassKernel::operator()(double p, double q) const {
    return m_ > 0 ? massive_eval(*this, p, q) : massless_eval(*this, p, q);
}

cplx massive_eval(const MassKernel& K, double p, double q) {
    const double m = K.mass();
    if (!(m > 0)) throw InvalidArgument("massive_eval requires m > 0");
    const ScatteringFunction& S = K.base();
    if (S.is_constant()) return double(S.epsilon());
    const double wp = std::hypot(p, m);
    const double wq = std::hypot(q, m);
    // sinh(theta_p - theta_q); the second form avoids cancellation for same-sign momenta.
    double x;
    if (p * q > 0)
        x = (p - q) * (p + q) / (p * wq + q * wp);
    else
        x = (p * wq - q * wp) / (m * m);
    return S.from_sinh(x);
}

cplx massless_eval(const MassKernel& K, double p, double q) {
    const ScatteringFunction& S = K.base();
    if (p > 0 && q > 0) return S.at(std::log(p) - std::log(q));
    if (p < 0 && q < 0) return S.at(std::log(-q) - std::log(-p));
    if (p == 0 && q == 0) return S.at(0.0);
    return double(S.epsilon());
}

std::vector<ScalingRow> scaling_convergence_table(const ScatteringFunction& S, double m,
                                                  const std::vector<std::pair<double, double>>& points,
                                                  const std::vector<double>& lambdas) {
    if (!(m > 0)) throw InvalidArgument("scaling table needs m > 0");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0)) throw InvalidArgument("lambdas must be positive");
        if (i > 0 && !(lambdas[i] < lambdas[i - 1]))
            throw InvalidArgument("lambdas must be strictly decreasing");
    }
    const MassKernel K0(S, 0.0);
    std::vector<ScalingRow> rows;
    for (const auto& [p, q] : points) {
        const cplx limit = massless_eval(K0, p, q);
        for (double lam : lambdas) {
            const cplx v = massive_eval(MassKernel(S, lam * m), p, q);
            rows.push_back({lam, p, q, std::abs(v - limit)});
        }
    }
    return rows;
}

bool scaling_trend_ok(const std::vector<ScalingRow>& rows, double noise) {
    std::map<std::pair<double, double>, double> last;
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.p, r.q);
        auto it = last.find(key);
        if (it != last.end() && r.diff > it->second + noise) return false;
        last[key] = r.diff;
    }
    return true;
}

ScatteringFunction scattering_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ConfigParseError("scattering spec needs a string field 'type'");
    const std::string type = j["type"];
    if (type == "free") return ScatteringFunction::free_function();
    if (type == "ising") return ScatteringFunction::ising();
    if (type == "sinh_gordon") {
        if (!j.contains("g") || !j["g"].is_number())
            throw ConfigParseError("sinh_gordon spec needs numeric 'g'");
        const double g = j["g"];
        const ScatteringFunction S = ScatteringFunction::sinh_gordon(g);
        const int sign = j.value("epsilon", 1);
        if (sign == 1) return S;
        return ScatteringFunction::make_limit_family(sign, S.zeros());
    }
    if (type == "blaschke") {
        if (!j.contains("epsilon") || !j["epsilon"].is_number_integer())
            throw ConfigParseError("blaschke spec needs integer 'epsilon'");
        std::vector<cplx> zeros;
        for (const auto& z : j.value("zeros", nlohmann::json::array())) {
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                throw ConfigParseError("each zero must be a [re, im] pair");
            zeros.emplace_back(z[0].get<double>(), z[1].get<double>());
        }
        return ScatteringFunction::make_limit_family(j["epsilon"].get<int>(), zeros,
                                                     j.value("auto_complete", true));
    }
    throw ConfigParseError("unknown scattering type '" + type + "'");
}

nlohmann::json scattering_to_json(const ScatteringFunction& S) {
    nlohmann::json zs = nlohmann::json::array();
    for (const cplx& b : S.zeros()) zs.push_back({b.real(), b.imag()});
    return {{"type", "blaschke"}, {"epsilon", S.epsilon()}, {"zeros", zs}};
}

}  // namespace zfscale
