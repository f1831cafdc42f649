#include "runner.hpp"

#include "zfscale/chiral.hpp"
#include "zfscale/correlators.hpp"
#include "zfscale/errors.hpp"
#include "zfscale/fock.hpp"
#include "zfscale/ising.hpp"
#include "zfscale/scattering.hpp"
#include "zfscale/testfn.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <random>

namespace zfscale::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

class Table {
public:
    Table(std::string caption, std::vector<std::string> columns)
        : caption_(std::move(caption)), columns_(std::move(columns)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void write(const fs::path& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "# " << caption_ << '\n';
        for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
        out << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
            out << '\n';
        }
    }

private:
    std::string caption_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

void write_plot(const fs::path& path, const std::vector<std::pair<double, double>>& xy) {
    std::ofstream out(path);
    for (const auto& [x, y] : xy) out << num(x) << ' ' << num(y) << '\n';
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

struct Context {
    const json& cfg;
    const RunOptions& opts;
    std::ostream& log;
    QuadratureConfig quad;
    json summary = json::object();
    bool pass = true;

    double tol(const std::string& key, double fallback) const {
        double t = fallback;
        if (cfg.contains("tolerances") && cfg["tolerances"].contains(key)) {
            if (!cfg["tolerances"][key].is_number()) throw ConfigParseError("tolerance '" + key + "' must be numeric");
            t = cfg["tolerances"][key].get<double>();
        }
        if (!(t > 0)) throw ConfigParseError("tolerance '" + key + "' must be positive");
        return t * opts.tol_scale;
    }

    void verdict(const std::string& name, double value, double tolerance, bool below = true) {
        const bool ok = below ? value < tolerance : value > tolerance;
        summary["verdicts"][name] = {{"value", value}, {"tolerance", tolerance}, {"pass", ok}};
        log << (ok ? "PASS " : "FAIL ") << name << ": " << num(value) << (below ? " < " : " > ") << num(tolerance)
            << '\n';
        pass = pass && ok;
    }

    void flag(const std::string& name, bool ok) {
        summary["verdicts"][name] = {{"pass", ok}};
        log << (ok ? "PASS " : "FAIL ") << name << '\n';
        pass = pass && ok;
    }

    fs::path out(const std::string& name) const { return opts.out_dir / name; }
};

const json& need(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigParseError(std::string("missing field '") + key + "'");
    return j[key];
}

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigParseError(std::string("field '") + key + "' must be numeric");
    return j[key].get<double>();
}

std::vector<double> num_list(const json& j, const char* key, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_array()) throw ConfigParseError(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigParseError(std::string("field '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

Fn1 packet(const json& j) {
    if (!j.is_object()) throw ConfigParseError("packet must be an object");
    return rapidity_packet(get_num(j, "center", 0.0), get_num(j, "width", 0.5), get_num(j, "phase", 0.0));
}

std::vector<Fn1> packets(const json& j) {
    if (!j.is_array()) throw ConfigParseError("packet list must be an array");
    std::vector<Fn1> out;
    for (const auto& p : j) out.push_back(packet(p));
    return out;
}

QuadratureConfig quadrature(const json& cfg) {
    QuadratureConfig q;
    if (cfg.contains("quadrature")) {
        const auto& j = cfg["quadrature"];
        q.abs_tol = get_num(j, "abs_tol", q.abs_tol);
        q.rel_tol = get_num(j, "rel_tol", q.rel_tol);
        q.cutoff = get_num(j, "cutoff", q.cutoff);
        q.max_subdivisions = int(get_num(j, "max_subdivisions", q.max_subdivisions));
        q.initial_panels = int(get_num(j, "initial_panels", q.initial_panels));
    }
    try {
        q.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigParseError(e.what());
    }
    return q;
}

std::vector<FieldSpec> fields(const json& j) {
    if (!j.is_array()) throw ConfigParseError("'fields' must be an array");
    std::vector<FieldSpec> out;
    for (const auto& f : j) out.push_back({testfn2d_from_json(f), f.value("primed", false)});
    return out;
}

void run_scattering_check(Context& c, const ScatteringFunction& S) {
    const auto range = num_list(c.cfg, "range", {-10.0, 10.0});
    if (range.size() != 2 || !(range[1] > range[0])) throw ConfigParseError("'range' must be [lo, hi]");
    const int n = int(get_num(c.cfg, "samples", 1000));
    std::mt19937_64 rng(std::uint64_t(get_num(c.cfg, "seed", 7)));
    std::uniform_real_distribution<double> u(range[0], range[1]);
    Table t("scattering relation residuals; theta dimensionless rapidity, residuals dimensionless",
            {"theta", "unitarity", "crossing", "inverse", "hermitian", "boundary"});
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double th = u(rng);
        const auto r = relation_residuals(S, {th});
        worst = std::max(worst, r.max());
        t.add({num(th), num(r.unitarity), num(r.crossing), num(r.inverse), num(r.hermitian), num(r.boundary)});
    }
    t.write(c.out("scattering-check.csv"));
    c.summary["max_relation_residual"] = worst;
    c.verdict("relations", worst, c.tol("relations", 1e-12));

    const double m = get_num(c.cfg, "mass", 1.0);
    std::vector<std::pair<double, double>> pts;
    if (c.cfg.contains("points")) {
        for (const auto& p : c.cfg["points"]) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    } else {
        pts = {{2, 3}, {2, -3}, {-2, -3}};
    }
    const auto rows = scaling_convergence_table(S, m, pts, num_list(c.cfg, "lambdas", default_lambdas()));
    Table lt("massless limit |S_{lambda m}(p,q) - S_0(p,q)|; p, q momenta in units of m",
             {"lambda", "p", "q", "diff"});
    double last = 0.0;
    for (const auto& r : rows) {
        lt.add({num(r.lambda), num(r.p), num(r.q), num(r.diff)});
        if (r.lambda == rows.back().lambda) last = std::max(last, r.diff);
    }
    lt.write(c.out("massless-limit.csv"));
    c.verdict("massless_limit", last, c.tol("massless_limit", 1e-4));
    c.flag("massless_limit_trend", scaling_trend_ok(rows));
}

void run_scaling_limit(Context& c, const ScatteringFunction& S) {
    const double m = get_num(c.cfg, "mass", 1.0);
    const auto lambdas = num_list(c.cfg, "lambdas", default_lambdas());
    const auto rep = scaling_limit_experiment(MassKernel(S, m), fields(need(c.cfg, "fields")), lambdas, c.quad);
    Table t("scaled n-point function vs massless limit; lambda dimensionless scale, values dimensionless",
            {"lambda", "re_massive", "im_massive", "re_massless", "im_massless", "abs_diff", "rel_diff"});
    std::vector<std::pair<double, double>> plot;
    double at_target = -1.0;
    const double target = get_num(c.cfg, "check_lambda", 1e-3);
    for (const auto& r : rep.rows) {
        t.add({num(r.lambda), num(r.massive.real()), num(r.massive.imag()), num(r.massless.real()),
               num(r.massless.imag()), num(r.abs_diff), num(r.rel_diff)});
        plot.emplace_back(r.lambda, r.rel_diff);
        if (std::abs(std::log10(r.lambda / target)) < 1e-9) at_target = r.rel_diff;
    }
    t.write(c.out("scaling-limit.csv"));
    write_plot(c.out("scaling-limit.dat"), plot);
    if (at_target >= 0) c.verdict("rel_diff_at_check_lambda", at_target, c.tol("rel_diff", 1e-2));
    c.flag("rel_diff_non_increasing", rep.verdict);
}

void run_npoint(Context& c, const ScatteringFunction& S) {
    CorrelatorRequest req{MassKernel(S, get_num(c.cfg, "mass", 1.0)), get_num(c.cfg, "lambda", 1.0),
                          fields(need(c.cfg, "fields"))};
    const cplx v = npoint(req, c.quad);
    Table t("n-point function; dimensionless", {"n", "lambda", "re", "im"});
    t.add({std::to_string(req.fields.size()), num(req.lambda), num(v.real()), num(v.imag())});
    t.write(c.out("npoint.csv"));
    c.summary["value"] = {v.real(), v.imag()};
    if (c.cfg.contains("expected")) {
        const auto& e = c.cfg["expected"];
        const cplx ex(e.at(0).get<double>(), e.at(1).get<double>());
        c.verdict("expected_value", std::abs(v - ex), c.tol("abs", 1e-8));
    }
}

std::vector<std::vector<double>> sample_points(int n_max, int per_n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<std::vector<double>> out;
    for (int n = 1; n <= n_max; ++n)
        for (int k = 0; k < per_n; ++k) {
            std::vector<double> b(n);
            for (auto& x : b) x = u(rng);
            out.push_back(b);
        }
    return out;
}

void run_locality(Context& c, const ScatteringFunction& S) {
    const auto f = testfn1d_from_json(need(c.cfg, "f"));
    const auto g = testfn1d_from_json(need(c.cfg, "g"));
    const int n_max = int(get_num(c.cfg, "n_max", 3));
    if (n_max < 1 || n_max > 3) throw ConfigParseError("'n_max' must lie in 1..3");
    const auto samples = sample_points(n_max, int(get_num(c.cfg, "samples_per_n", 6)),
                                       std::uint64_t(get_num(c.cfg, "seed", 11)));
    const bool separated = f.support().lo >= g.support().hi;
    if (!separated)
        c.log << "note: supports overlap; running as a negative control, a nonzero residual is expected\n";
    Table t("half-line commutator kernel residual; rapidities dimensionless", {"n", "sample", "residual"});
    double worst = 0.0;
    std::vector<double> res(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        res[i] = halfline_locality_residual(S, f, g, {samples[i]}, c.quad, !separated);
        worst = std::max(worst, res[i]);
        t.add({std::to_string(samples[i].size()), std::to_string(i), num(res[i])});
    }
    t.write(c.out("locality.csv"));
    c.summary["negative_control"] = !separated;
    c.verdict("kernel_residual", worst, c.tol("residual", 1e-6));
}

void run_chiral_split(Context& c, const ScatteringFunction& S) {
    Table t("massless split checks; matrix elements dimensionless",
            {"check", "element", "re_lhs", "im_lhs", "re_rhs", "im_rhs", "residual"});
    double fact = 0.0, field = 0.0;
    const auto& states = need(c.cfg, "states");
    std::vector<std::pair<LightRayState, LightRayState>> els;
    for (const auto& e : states) {
        auto st = [](const json& j) {
            return LightRayState{packets(j.value("left", json::array())), packets(j.value("right", json::array()))};
        };
        els.push_back({st(need(e, "bra")), st(need(e, "ket"))});
    }
    for (std::size_t i = 0; i < els.size(); ++i) {
        const auto& [bra, ket] = els[i];
        const auto r = split_factorization_check(S, bra.left, bra.right, ket.left, ket.right, c.quad);
        fact = std::max(fact, r.residual);
        t.add({"factorization", std::to_string(i), num(r.lhs.real()), num(r.lhs.imag()), num(r.rhs.real()),
               num(r.rhs.imag()), num(r.residual)});
    }
    if (c.cfg.contains("field")) {
        const auto f = testfn2d_from_json(c.cfg["field"]);
        for (std::size_t i = 0; i < els.size(); ++i) {
            const auto e = field_split_element(S, f, els[i].first, els[i].second, c.quad);
            const double r = std::abs(e.lhs - e.rhs);
            field = std::max(field, r);
            t.add({"field", std::to_string(i), num(e.lhs.real()), num(e.lhs.imag()), num(e.rhs.real()),
                   num(e.rhs.imag()), num(r)});
        }
        c.verdict("field_split", field, c.tol("field", 1e-6));
    }
    t.write(c.out("chiral-split.csv"));
    c.verdict("factorization", fact, c.tol("factorization", 1e-8));
}

void run_clustering(Context& c, const ScatteringFunction& S) {
    const Fn1 p1 = packet(need(c.cfg, "psi1")), p2 = packet(need(c.cfg, "psi2"));
    const auto lambdas = num_list(c.cfg, "lambdas", {0, 2, 4, 6, 8});
    if (lambdas.empty()) throw ConfigParseError("'lambdas' must not be empty");
    Table t("dilation clustering; lambda dimensionless, matrix elements dimensionless",
            {"which", "case", "lambda", "re_value", "im_value", "re_target", "im_target", "magnitude"});
    double worst = 0.0;
    const double tol = c.tol("decay", 1e-3);
    int idx = 0;
    for (const auto& cs : need(c.cfg, "cases")) {
        ClusteringGrid grid;
        if (cs.contains("grid")) {
            grid.lo = get_num(cs["grid"], "lo", grid.lo);
            grid.hi = get_num(cs["grid"], "hi", grid.hi);
            grid.panels = int(get_num(cs["grid"], "panels", grid.panels));
        }
        const int which = int(get_num(cs, "which", 0));
        const auto rows = dilation_clustering(S, p1, p2, packets(need(cs, "bra")), packets(need(cs, "ket")),
                                              lambdas, which, grid);
        for (const auto& r : rows)
            t.add({std::to_string(which), std::to_string(idx), num(r.lambda), num(r.value.real()),
                   num(r.value.imag()), num(r.target.real()), num(r.target.imag()), num(r.magnitude)});
        const double ratio = rows.front().magnitude > 0 ? rows.back().magnitude / rows.front().magnitude : 0.0;
        worst = std::max(worst, ratio);
        ++idx;
    }
    t.write(c.out("clustering.csv"));
    c.verdict("decay_ratio", worst, tol);
}

void run_ising_cc(Context& c) {
    std::vector<SmearingCase> cases = default_smearing_cases();
    if (c.cfg.contains("cases")) {
        cases.clear();
        for (const auto& s : c.cfg["cases"])
            cases.push_back({s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>()});
    }
    const auto r = central_charge_extract(c.quad, cases);
    Table t("central charge sweep; widths and separation in length units, c dimensionless",
            {"width1", "width2", "separation", "c_fit"});
    for (const auto& row : r.rows)
        t.add({num(row.smearing.width1), num(row.smearing.width2), num(row.smearing.separation), num(row.c_fit)});
    t.write(c.out("central-charge.csv"));
    c.summary["c_closed"] = r.c_closed;
    c.summary["c_fit"] = r.c_fit;
    const double expected = get_num(c.cfg, "expected_c", 0.5);
    c.verdict("c_closed", std::abs(r.c_closed - expected), c.tol("c_closed", 1e-6));
    c.verdict("c_fit", std::abs(r.c_fit - expected), c.tol("c_fit", 1e-3));

    if (c.cfg.contains("integral_T")) {
        Table it("int T = H; energies in units of the rapidity scale",
                 {"element", "W", "re_T", "im_T", "re_H", "im_H"});
        double worst = 0.0;
        int idx = 0;
        for (const auto& e : c.cfg["integral_T"]) {
            const auto res = integral_T_element(packets(need(e, "bra")), packets(need(e, "ket")), c.quad);
            for (const auto& [W, v] : res.sweep)
                it.add({std::to_string(idx), num(W), num(v.real()), num(v.imag()), num(res.h_value.real()),
                        num(res.h_value.imag())});
            worst = std::max(worst, res.rel);
            ++idx;
        }
        it.write(c.out("integral-T.csv"));
        c.verdict("integral_T_rel", worst, c.tol("integral_T", 1e-5));
    }
}

void run_oracle_xcheck(Context& c, const ScatteringFunction& S) {
    const int M = int(get_num(c.cfg, "grid_size", 3));
    const int n_max = int(get_num(c.cfg, "n_max", 3));
    const int L = int(get_num(c.cfg, "max_length", 6));
    const double lo = get_num(c.cfg, "grid_lo", -1.0), hi = get_num(c.cfg, "grid_hi", 1.0);
    if (M < 1 || !(hi > lo)) throw ConfigParseError("need grid_size >= 1 and grid_hi > grid_lo");
    std::vector<double> x(M), w(M, (hi - lo) / M);
    for (int i = 0; i < M; ++i) x[i] = lo + (i + 0.5) * w[i];
    const TruncatedFock tf(rapidity_kernel(S), x, w, n_max);
    const auto sweep = symbolic_oracle_sweep(tf, L);
    Table t("symbolic vs matrix-oracle vacuum expectations; relative deviation", {"length", "max_rel"});
    for (int l = 0; l < L; ++l) t.add({std::to_string(l + 1), num(sweep.max_rel_by_length[l])});
    t.write(c.out("oracle-xcheck.csv"));
    c.summary["cases"] = sweep.cases;
    c.summary["relation_residual"] = zf_relation_residual(tf);
    c.verdict("max_rel", sweep.max_rel, c.tol("rel", 1e-8));
    c.verdict("relation_residual", zf_relation_residual(tf), c.tol("relation", 1e-10));
}

}  // namespace

int run_config(const json& config, const RunOptions& opts, std::ostream& log) {
    std::string kind;
    ScatteringFunction S;
    QuadratureConfig quad;
    try {
        if (!config.is_object()) throw ConfigParseError("config must be a JSON object");
        if (!config.contains("kind") || !config["kind"].is_string()) throw ConfigParseError("missing string field 'kind'");
        kind = config["kind"];
        if (config.contains("scattering")) S = scattering_from_json(config["scattering"]);
        quad = quadrature(config);
        if (!(opts.tol_scale > 0)) throw ConfigParseError("--tol-scale must be positive");
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kInputError;
    }
    Context c{config, opts, log, quad};
    c.summary["kind"] = kind;
    try {
        fs::create_directories(opts.out_dir);
        if (kind == "scattering-check") run_scattering_check(c, S);
        else if (kind == "scaling-limit") run_scaling_limit(c, S);
        else if (kind == "npoint") run_npoint(c, S);
        else if (kind == "locality") run_locality(c, S);
        else if (kind == "chiral-split") run_chiral_split(c, S);
        else if (kind == "clustering") run_clustering(c, S);
        else if (kind == "ising-cc") run_ising_cc(c);
        else if (kind == "oracle-xcheck") run_oracle_xcheck(c, S);
        else throw ConfigParseError("unknown experiment kind '" + kind + "'");
    } catch (const ConfigParseError& e) {
        log << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        log << "error: ConfigParseError: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kModuleError;
    }
    c.summary["pass"] = c.pass;
    write_json(c.out(kind + ".json"), c.summary);
    return c.pass ? kPass : kVerdictFailed;
}

int run_file(const fs::path& path, const RunOptions& opts, std::ostream& log) {
    std::ifstream in(path);
    if (!in) {
        log << "error: cannot read " << path.string() << '\n';
        return kInputError;
    }
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        log << "error: ConfigParseError: " << e.what() << '\n';
        return kInputError;
    }
    return run_config(config, opts, log);
}

}  // namespace zfscale::cli
