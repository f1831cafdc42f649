#include "zfscale/zf.hpp"

#include "zfscale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace zfscale {

namespace {

bool is_cre(const Generator& g) { return g.kind == GenKind::Create; }

void rewrite(NormalTerm term, std::vector<NormalTerm>& out) {
    Word& w = term.residual;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const Generator l = w[i], r = w[i + 1];
        if (!is_cre(l) && is_cre(r)) {
            // z(p) z+(q) = S(q, p) z+(q) z(p) + delta
            NormalTerm contracted = term;
            contracted.contractions.emplace_back(l.var, r.var);
            contracted.residual.erase(contracted.residual.begin() + i,
                                      contracted.residual.begin() + i + 2);
            NormalTerm swapped = std::move(term);
            swapped.s_factors.emplace_back(r.var, l.var);
            std::swap(swapped.residual[i], swapped.residual[i + 1]);
            rewrite(std::move(swapped), out);
            rewrite(std::move(contracted), out);
            return;
        }
        const bool cc = is_cre(l) && is_cre(r) && l.var < r.var;
        const bool aa = !is_cre(l) && !is_cre(r) && l.var > r.var;
        if (cc || aa) {
            term.s_factors.emplace_back(l.var, r.var);
            std::swap(w[i], w[i + 1]);
            rewrite(std::move(term), out);
            return;
        }
    }
    out.push_back(std::move(term));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

nlohmann::json ZFNormalForm::to_json() const {
    nlohmann::json terms_json = nlohmann::json::array();
    for (const auto& t : terms) {
        nlohmann::json word = nlohmann::json::array();
        for (const auto& g : t.residual)
            word.push_back({{"kind", is_cre(g) ? "create" : "annihilate"}, {"var", g.var}});
        terms_json.push_back({{"contractions", t.contractions},
                              {"s_factors", t.s_factors},
                              {"weight", mode == Mode::Momentum ? "omega*delta" : "delta"},
                              {"residual", word}});
    }
    return {{"mode", mode == Mode::Momentum ? "momentum" : "rapidity"}, {"terms", terms_json}};
}

ZFNormalForm normal_order(const Word& word, Mode mode) {
    if (word.size() > kMaxWordLength)
        throw WordTooLong("word of length " + std::to_string(word.size()) + " exceeds " +
                          std::to_string(kMaxWordLength));
    std::set<int> seen;
    for (const auto& g : word)
        if (!seen.insert(g.var).second)
            throw InvalidWord("variable " + std::to_string(g.var) + " occurs twice");
    ZFNormalForm nf;
    nf.mode = mode;
    NormalTerm start;
    start.residual = word;
    rewrite(std::move(start), nf.terms);
    return nf;
}

ZFNormalForm vacuum_part(const ZFNormalForm& nf) {
    ZFNormalForm out;
    out.mode = nf.mode;
    for (const auto& t : nf.terms)
        if (t.residual.empty()) out.terms.push_back(t);
    return out;
}

EvalContext EvalContext::massive(ScatteringFunction S, double m) {
    if (!(m > 0)) throw InvalidArgument("massive context needs m > 0");
    return {EvalMode::Massive, std::move(S), m};
}
EvalContext EvalContext::massless(ScatteringFunction S) { return {EvalMode::Massless, std::move(S), 0.0}; }
EvalContext EvalContext::rapidity(ScatteringFunction S) { return {EvalMode::Rapidity, std::move(S), 0.0}; }

double EvalContext::physical(double t, int branch) const {
    switch (mode) {
        case EvalMode::Massive: return mass * std::sinh(t);
        case EvalMode::Massless: return branch == 0 ? -std::exp(t) : std::exp(t);
        case EvalMode::Rapidity: return t;
    }
    return t;
}

cplx EvalContext::kernel(double tu, int bu, double tv, int bv) const {
    if (mode != EvalMode::Massless) return S.at(tu - tv);
    if (bu != bv) return double(S.epsilon());
    return bu == 1 ? S.at(tu - tv) : S.at(tv - tu);
}

bool EvalContext::constant_between(int bu, int bv) const {
    return S.is_constant() || (mode == EvalMode::Massless && bu != bv);
}

cplx evaluate_vacuum_expectation(const ZFNormalForm& nf, const EvalContext& ctx,
                                 const std::map<int, Arg>& args, const QuadratureConfig& cfg,
                                 const std::vector<Coupling>& couplings) {
    const bool massless = ctx.mode == EvalMode::Massless;
    cplx total = 0.0;
    for (const auto& term : nf.terms) {
        if (!term.residual.empty()) continue;
        const int k = int(term.contractions.size());
        std::map<int, int> cls;
        std::vector<std::pair<const Arg*, const Arg*>> pair_args(k);
        std::vector<double> lo(k, -cfg.cutoff), hi(k, cfg.cutoff);
        std::vector<unsigned> masks(k, massless ? 3u : 1u);
        bool empty = false;
        for (int c = 0; c < k; ++c) {
            const auto [u, v] = term.contractions[c];
            cls[u] = c;
            cls[v] = c;
            auto iu = args.find(u), iv = args.find(v);
            if (iu == args.end() || iv == args.end())
                throw InvalidArgument("no argument bound to a contracted variable");
            pair_args[c] = {&iu->second, &iv->second};
            for (const Arg* a : {&iu->second, &iv->second}) {
                lo[c] = std::max(lo[c], a->lo);
                hi[c] = std::min(hi[c], a->hi);
                if (massless) masks[c] &= a->branches;
            }
            if (!(hi[c] > lo[c]) || masks[c] == 0) empty = true;
        }
        if (empty) continue;

        struct BoundCoupling {
            std::vector<int> classes;
            const FnN* fn;
        };
        std::vector<BoundCoupling> bound;
        for (const auto& cp : couplings) {
            BoundCoupling b{{}, &cp.fn};
            for (int v : cp.vars) {
                auto it = cls.find(v);
                if (it == cls.end()) throw InvalidArgument("coupling names an uncontracted variable");
                b.classes.push_back(it->second);
            }
            bound.push_back(std::move(b));
        }

        // Enumerate branch assignments (a single pass outside massless mode).
        std::vector<int> branch(k, massless ? 0 : 1);
        const long n_assign = massless ? (1L << k) : 1L;
        for (long code = 0; code < n_assign; ++code) {
            bool allowed = true;
            if (massless) {
                for (int c = 0; c < k; ++c) {
                    branch[c] = int((code >> c) & 1);
                    if (!(masks[c] & (1u << branch[c]))) allowed = false;
                }
            }
            if (!allowed) continue;

            UnionFind uf(k);
            cplx constant = 1.0;
            std::vector<std::pair<int, int>> live_s;
            for (const auto& [a, b] : term.s_factors) {
                const int ca = cls.at(a), cb = cls.at(b);
                if (ca == cb) {
                    constant *= ctx.kernel(0.0, branch[ca], 0.0, branch[cb]);
                } else if (ctx.constant_between(branch[ca], branch[cb])) {
                    constant *= ctx.kernel(0.0, branch[ca], 0.0, branch[cb]);
                } else {
                    live_s.emplace_back(ca, cb);
                    uf.unite(ca, cb);
                }
            }
            for (const auto& b : bound)
                for (std::size_t i = 1; i < b.classes.size(); ++i) uf.unite(b.classes[0], b.classes[i]);

            std::map<int, std::vector<int>> components;
            for (int c = 0; c < k; ++c) components[uf.find(c)].push_back(c);

            cplx value = constant;
            for (const auto& [root, members] : components) {
                (void)root;
                std::vector<int> slot(k, -1);
                for (std::size_t i = 0; i < members.size(); ++i) slot[members[i]] = int(i);
                std::vector<const BoundCoupling*> local_couplings;
                for (const auto& b : bound)
                    if (slot[b.classes[0]] >= 0) local_couplings.push_back(&b);
                std::vector<std::pair<int, int>> local_s;
                for (const auto& [a, b] : live_s)
                    if (slot[a] >= 0) local_s.emplace_back(slot[a], slot[b]);

                auto integrand = [&](const std::vector<double>& t) -> cplx {
                    cplx v = 1.0;
                    std::vector<double> phys(members.size());
                    for (std::size_t i = 0; i < members.size(); ++i) {
                        const int c = members[i];
                        phys[i] = ctx.physical(t[i], branch[c]);
                        v *= pair_args[c].first->f(phys[i]) * pair_args[c].second->f(phys[i]);
                        if (v == 0.0) return 0.0;
                    }
                    for (const auto& [a, b] : local_s)
                        v *= ctx.kernel(t[a], branch[members[a]], t[b], branch[members[b]]);
                    for (const BoundCoupling* bc : local_couplings) {
                        std::vector<double> xs;
                        for (int c : bc->classes) xs.push_back(phys[slot[c]]);
                        v *= (*bc->fn)(xs);
                    }
                    return v;
                };

                cplx piece;
                if (members.size() == 1) {
                    const int c = members[0];
                    const int panels = std::max(cfg.initial_panels, int(std::ceil((hi[c] - lo[c]) / 2.5)));
                    piece = integrate([&](double t) { return integrand({t}); }, lo[c], hi[c], cfg, panels)
                                .value;
                } else {
                    Box box;
                    for (int c : members) box.emplace_back(lo[c], hi[c]);
                    piece = integrate_nd(integrand, box, cfg).value;
                }
                value *= piece;
                if (value == 0.0) break;
            }
            total += value;
        }
    }
    return total;
}

cplx evaluate_discrete(const ZFNormalForm& nf, const std::map<int, int>& grid_index,
                       const std::vector<double>& x, const std::vector<double>& w,
                       const TwoPointKernel& S2) {
    cplx total = 0.0;
    for (const auto& term : nf.terms) {
        if (!term.residual.empty()) continue;
        cplx v = 1.0;
        for (const auto& [u, c] : term.contractions) {
            const int i = grid_index.at(u), j = grid_index.at(c);
            if (i != j) {
                v = 0.0;
                break;
            }
            v /= w.at(i);
        }
        if (v == 0.0) continue;
        for (const auto& [a, b] : term.s_factors) v *= S2(x.at(grid_index.at(a)), x.at(grid_index.at(b)));
        total += v;
    }
    return total;
}

OperatorExpr OperatorExpr::identity() { return {{SmearedWord{}}}; }

OperatorExpr OperatorExpr::single(GenKind kind, Arg arg, cplx coeff) {
    SmearedWord w;
    w.coeff = coeff;
    w.gens.push_back({kind, std::move(arg)});
    return {{std::move(w)}};
}

OperatorExpr OperatorExpr::word(SmearedWord w) { return {{std::move(w)}}; }

OperatorExpr OperatorExpr::operator*(const OperatorExpr& o) const {
    OperatorExpr out;
    for (const auto& a : words)
        for (const auto& b : o.words) {
            SmearedWord w;
            w.coeff = a.coeff * b.coeff;
            w.gens = a.gens;
            w.gens.insert(w.gens.end(), b.gens.begin(), b.gens.end());
            w.couplings = a.couplings;
            const int shift = int(a.gens.size());
            for (Coupling c : b.couplings) {
                for (int& v : c.vars) v += shift;
                w.couplings.push_back(std::move(c));
            }
            out.words.push_back(std::move(w));
        }
    return out;
}

OperatorExpr OperatorExpr::operator+(const OperatorExpr& o) const {
    OperatorExpr out = *this;
    out.words.insert(out.words.end(), o.words.begin(), o.words.end());
    return out;
}

OperatorExpr OperatorExpr::scaled(cplx c) const {
    OperatorExpr out = *this;
    for (auto& w : out.words) w.coeff *= c;
    return out;
}

OperatorExpr OperatorExpr::adjoint() const {
    OperatorExpr out;
    for (const auto& w : words) {
        SmearedWord a;
        a.coeff = std::conj(w.coeff);
        const int L = int(w.gens.size());
        for (int i = L - 1; i >= 0; --i) {
            SmearedGen g = w.gens[i];
            g.kind = g.kind == GenKind::Create ? GenKind::Annihilate : GenKind::Create;
            Fn1 f = g.arg.f;
            g.arg.f = [f](double x) { return std::conj(f(x)); };
            a.gens.push_back(std::move(g));
        }
        for (const auto& c : w.couplings) {
            Coupling r;
            for (int v : c.vars) r.vars.push_back(L - 1 - v);
            FnN fn = c.fn;
            r.fn = [fn](const std::vector<double>& xs) { return std::conj(fn(xs)); };
            a.couplings.push_back(std::move(r));
        }
        out.words.push_back(std::move(a));
    }
    return out;
}

OperatorExpr creation_word(const std::vector<Arg>& psis) {
    SmearedWord w;
    for (const auto& a : psis) w.gens.push_back({GenKind::Create, a});
    return OperatorExpr::word(std::move(w));
}

cplx vacuum_expectation(const OperatorExpr& expr, const EvalContext& ctx,
                        const QuadratureConfig& cfg) {
    std::map<std::vector<bool>, ZFNormalForm> cache;
    cplx total = 0.0;
    for (const auto& w : expr.words) {
        if (w.coeff == 0.0) continue;
        std::vector<bool> pattern;
        int balance = 0;
        for (const auto& g : w.gens) {
            pattern.push_back(g.kind == GenKind::Create);
            balance += g.kind == GenKind::Create ? 1 : -1;
        }
        if (balance != 0) continue;
        if (w.gens.empty()) {
            total += w.coeff;
            continue;
        }
        auto it = cache.find(pattern);
        if (it == cache.end()) {
            Word word;
            for (std::size_t i = 0; i < w.gens.size(); ++i) word.push_back({w.gens[i].kind, int(i)});
            it = cache.emplace(pattern, vacuum_part(normal_order(word, ctx.symbolic_mode()))).first;
        }
        if (it->second.terms.empty()) continue;
        std::map<int, Arg> args;
        for (std::size_t i = 0; i < w.gens.size(); ++i) args[int(i)] = w.gens[i].arg;
        total += w.coeff * evaluate_vacuum_expectation(it->second, ctx, args, cfg, w.couplings);
    }
    return total;
}

cplx matrix_element(const OperatorExpr& bra, const OperatorExpr& op, const OperatorExpr& ket,
                    const EvalContext& ctx, const QuadratureConfig& cfg) {
    return vacuum_expectation(bra.adjoint() * op * ket, ctx, cfg);
}

}  // namespace zfscale
