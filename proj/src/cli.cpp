#include "ppi/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "ppi/correlation.hpp"
#include "ppi/montecarlo.hpp"
#include "ppi/multi_obs.hpp"
#include "ppi/nofading.hpp"
#include "ppi/single_obs.hpp"

namespace ppi {

namespace {

using json = nlohmann::ordered_json;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParamError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParamError(path + ": " + e.what());
    }
}

double number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ParamError(where + ": missing key \"" + key + "\"");
    if (!j[key].is_number()) throw ParamError(where + ": \"" + key + "\" must be a number");
    return j[key].get<double>();
}

int integer(const json& j, const char* key, const std::string& where) {
    const double v = number(j, key, where);
    if (v != std::floor(v)) throw ParamError(where + ": \"" + key + "\" must be an integer");
    return static_cast<int>(v);
}

AlohaParams aloha_from(const json& j, const std::string& where) {
    return AlohaParams(number(j, "p", where), integer(j, "N", where));
}

json scenario_json(const ModelParams& p) {
    return {{"n", p.n()}, {"lambda", p.lambda()}, {"alpha", p.alpha()},
            {"beta", p.beta()}, {"r_T", p.r_T()}, {"eta", p.eta()}};
}

std::string hex64(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

std::string cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "nan";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    return v.dump();
}

// non-finite doubles become null in JSON and "nan"/"inf" in CSV
json num(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return nullptr;
    return x > 0 ? "inf" : "-inf";
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json summary = json::object();
};

struct Common {
    std::string scenario;
    std::string out;
    std::string format = "csv";
    std::string grid;
    std::uint64_t seed = 1;
};

void emit(const std::string& command, const Common& c, const json& config, const Table& t, std::ostream& out) {
    const std::string hash = hex64(fnv1a(command + config.dump()));
    std::ostringstream body;
    if (c.format == "json") {
        json doc;
        doc["command"] = command;
        doc["config_hash"] = hash;
        doc["config"] = config;
        doc["columns"] = t.columns;
        json rows = json::array();
        for (const auto& r : t.rows) {
            json o;
            for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = r[i];
            rows.push_back(o);
        }
        doc["rows"] = rows;
        doc["summary"] = t.summary;
        body << doc.dump(2) << "\n";
    } else {
        body << "# ppi " << command << " config_hash=" << hash << "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i) body << (i ? "," : "") << t.columns[i];
        body << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) body << (i ? "," : "") << cell(r[i]);
            body << "\n";
        }
        for (const auto& [k, v] : t.summary.items()) body << "# " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
    if (c.out.empty()) {
        out << body.str();
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw ParamError("cannot write " + c.out);
    f << body.str();
    json manifest;
    manifest["scenario"] = c.scenario;
    manifest["command"] = command;
    manifest["output"] = c.out;
    manifest["seed"] = c.seed;
    manifest["timestamp"] = utc_now();
    manifest["library_version"] = library_version;
    manifest["config_hash"] = hash;
    std::ofstream m(c.out + ".manifest.json");
    if (!m) throw ParamError("cannot write " + c.out + ".manifest.json");
    m << manifest.dump(2) << "\n";
}

std::string default_radius_grid(const ModelParams& p, double lo, double hi, int n) {
    std::ostringstream s;
    s << std::setprecision(17) << "log:" << lo * p.r_T() << ":" << hi * p.r_T() << ":" << n;
    return s.str();
}

std::vector<double> grid_or(const std::string& spec, const std::string& fallback) {
    return parse_grid(spec.empty() ? fallback : spec);
}

json point(double r, const TypeErrors& e) { return {{"r_O", num(r)}, {"p_I", num(e.p_I)}, {"p_II", num(e.p_II)}}; }

// ---- correlation

struct CorrelationOpts {
    bool sweep = false;
};

Table cmd_correlation(const ModelParams& p, const Common& c, const CorrelationOpts& o, json& config) {
    Table t;
    if (o.sweep) {
        const auto scales = grid_or(c.grid, "log:1e-4:100:200");
        config["grid"] = scales;
        const double deltas[] = {1.0 / 3, 0.5, 2.0 / 3};
        t.columns = {"scale", "chi_star_delta_1_3", "chi_star_delta_1_2", "chi_star_delta_2_3"};
        for (double s : scales) {
            std::vector<json> row{s};
            for (double d : deltas) row.push_back(num(chi_star_for_scale(s, d).chi));
            t.rows.push_back(row);
        }
        t.summary["limit_delta_1_3"] = chi_star_limit(deltas[0]);
        t.summary["limit_delta_1_2"] = chi_star_limit(deltas[1]);
        t.summary["limit_delta_2_3"] = chi_star_limit(deltas[2]);
        return t;
    }
    const auto chis = grid_or(c.grid, "log:1e-3:1e4:400");
    config["grid"] = chis;
    t.columns = {"chi", "rho", "log_rho", "f1", "f2"};
    for (double x : chis)
        t.rows.push_back({x, num(rho(p, x)), num(log_rho(p, x)), num(corr_f1(p, x)), num(corr_f2(p, x))});
    const ChiStar cs = chi_star(p);
    t.summary["chi_star"] = cs.chi;
    t.summary["rho_star"] = cs.rho;
    t.summary["r_O_star"] = radius_of_chi(derive(p), cs.chi);
    t.summary["chi_hat"] = cs.chi_hat;
    t.summary["local_maxima"] = cs.stationary_points;
    return t;
}

// ---- risk

Table cmd_risk(const ModelParams& p, const Common& c, const CostMatrix& cost, json& config) {
    const auto rs = grid_or(c.grid, default_radius_grid(p, 0.1, 100, 400));
    config["grid"] = rs;
    Table t;
    t.columns = {"r_O", "risk", "d_risk", "d2_risk", "f_L", "f_R"};
    double best_r = rs.empty() ? 0 : rs[0], best = std::numeric_limits<double>::infinity();
    for (double r : rs) {
        const double h = 1e-3 * r;
        const double R0 = bayes_risk(p, cost, r), Rp = bayes_risk(p, cost, r + h), Rm = bayes_risk(p, cost, r - h);
        t.rows.push_back({r, R0, (Rp - Rm) / (2 * h), (Rp - 2 * R0 + Rm) / (h * h), num(risk_fL(p, cost, r)),
                          num(risk_fR(p, r))});
        if (R0 < best) {
            best = R0;
            best_r = r;
        }
    }
    t.summary["grid_argmin"] = best_r;
    t.summary["grid_min_risk"] = best;
    if (!cost.optimizable()) {
        t.summary["optimization"] = "skipped: cost matrix needs c10 > c00 and c01 > c11";
        return t;
    }
    const OptimalRadius opt = optimal_radius(p, cost);
    t.summary["interior"] = opt.interior;
    if (!opt.interior) {
        t.summary["optimization"] = "no finite minimizer: risk decreases toward its r_O -> infinity limit";
        t.summary["risk_limit"] = opt.risk;
        return t;
    }
    t.summary["r_O_star"] = opt.r_O;
    t.summary["chi_star"] = opt.chi;
    t.summary["risk_star"] = opt.risk;
    t.summary["first_order_residual"] = opt.residual;
    if (p.eta() == 0.0) {
        const Sensitivities s = sensitivities(p, cost);
        t.summary["dr_star_dlambda"] = s.d_lambda;
        t.summary["dr_star_dsigma"] = s.d_sigma;
    } else {
        t.summary["sensitivities"] = "skipped: noise-free scenarios only";
    }
    return t;
}

// ---- roc

Table cmd_roc(const ModelParams& p, const Common& c, const CostMatrix& cost, json& config) {
    const auto rs = grid_or(c.grid, default_radius_grid(p, 1e-3, 1e3, 400));
    config["grid"] = rs;
    const DerivedParams d = derive(p);
    Table t;
    t.columns = {"r_O", "chi", "p_I", "p_II", "risk", "rho"};
    for (const RocPoint& pt : roc_curve(p, rs, SingleObsRule::identity(), cost)) {
        const double chi = chi_of_radius(d, pt.r_O);
        t.rows.push_back({pt.r_O, chi, pt.p_I, pt.p_II, pt.risk, num(rho(p, chi))});
    }
    const OperatingPoints op = operating_points(p);
    t.summary["r_T"] = point(p.r_T(), type_errors(p, p.r_T()));
    if (op.r_DI)
        t.summary["r_DI"] = point(*op.r_DI, type_errors(p, *op.r_DI));
    else
        t.summary["r_DI"] = "omitted: 1/sigma <= eta, no single interferer is decisive";
    t.summary["r_MM"] = point(op.r_MM, type_errors(p, op.r_MM));
    t.summary["r_EE"] = point(op.r_EE, type_errors(p, op.r_EE));
    const double r_corr = radius_of_chi(d, chi_star(p).chi);
    t.summary["r_corr_star"] = point(r_corr, type_errors(p, r_corr));
    if (cost.optimizable()) {
        const OptimalRadius opt = optimal_radius(p, cost);
        if (opt.interior)
            t.summary["r_risk_star"] = point(opt.r_O, type_errors(p, opt.r_O));
        else
            t.summary["r_risk_star"] = "omitted: no finite risk minimizer";
    } else {
        t.summary["r_risk_star"] = "omitted: cost matrix not optimizable";
    }
    return t;
}

// ---- fading-compare

struct IltOpts {
    std::string method = "euler";
    int terms = IltConfig{}.terms;
};

Table cmd_fading_compare(const ModelParams& p, const Common& c, const IltOpts& io, json& config) {
    if (std::abs(p.alpha() - 2.0 * p.n()) > 1e-12 * p.alpha())
        throw ParamError("fading comparison requires alpha = 2n (delta = 1/2)");
    IltConfig ic;
    ic.method = ilt_method_from_string(io.method);
    ic.terms = io.terms;
    ic.validate();
    const auto rs = grid_or(c.grid, default_radius_grid(p, 0.05, 20, 300));
    config["grid"] = rs;
    config["ilt"] = {{"method", to_string(ic.method)}, {"terms", ic.terms}, {"precision_target", ic.precision_target}};
    const DerivedParams d = derive(p);
    Table t;
    t.columns = {"r_O",          "rho_rayleigh", "rho_nofade",   "p_I_rayleigh", "p_II_rayleigh",
                 "p_I_nofade",   "p_II_nofade",  "ilt_error",    "ilt_converged"};
    double peak_f = -2, peak_n = -2, r_f = 0, r_n = 0;
    int bad = 0;
    for (double r : rs) {
        const double rf = rho(p, chi_of_radius(d, r));
        const TypeErrors ef = type_errors(p, r);
        const NofadeValue rn = rho_nofade(p, r, ic);
        const NofadeTypeErrors en = type_errors_nofade(p, r, ic);
        const bool ok = rn.converged && en.converged;
        bad += !ok;
        t.rows.push_back({r, rf, rn.value, ef.p_I, ef.p_II, en.p_I, en.p_II, std::max(rn.error_estimate, en.error_estimate), ok});
        if (rf > peak_f) peak_f = rf, r_f = r;
        if (rn.value > peak_n) peak_n = rn.value, r_n = r;
    }
    t.summary["peak_rho_rayleigh"] = peak_f;
    t.summary["peak_r_O_rayleigh"] = r_f;
    t.summary["peak_rho_nofade"] = peak_n;
    t.summary["peak_r_O_nofade"] = r_n;
    t.summary["levy_prior"] = levy_prior(p);
    t.summary["rayleigh_prior"] = prior_success(p);
    t.summary["nonconverged_points"] = bad;
    return t;
}

// ---- multiobs

struct MultiOpts {
    std::string aloha;
    std::optional<double> r_O;
    std::string history;
};

AlohaParams resolve_aloha(const std::string& file, const Common& c) {
    if (!file.empty()) return aloha_from(read_json(file), file);
    const json s = read_json(c.scenario);
    if (s.contains("aloha")) return aloha_from(s["aloha"], c.scenario + " (aloha)");
    throw ParamError("Aloha parameters needed: pass --aloha <file> or add an \"aloha\" object to the scenario");
}

Table cmd_multiobs(const ModelParams& p, const Common& c, const MultiOpts& o, json& config) {
    if (p.eta() != 0.0) throw ParamError("multi-observation model requires eta = 0");
    const AlohaParams al = resolve_aloha(o.aloha, c);
    if (al.N > max_enumerated_N)
        throw ParamError("rule enumeration limited to N <= 8: 2^(2(N+1)) tables would be required");
    double r = o.r_O.value_or(0.0);
    std::string source = "user";
    if (o.r_O && !(r > 0 && std::isfinite(r))) throw ParamError("--r-O must be positive and finite");
    if (!o.r_O) {
        r = thinned_optimal_radius(p, al);
        source = "thinned uniform-cost optimum";
        if (!std::isfinite(r)) throw ParamError("no finite thinned optimum; pass --r-O");
    }
    config["aloha"] = {{"p", al.p}, {"N", al.N}};
    config["r_O"] = r;
    const RuleEnumeration e = enumerate_rules(p, al, r);
    Table t;
    t.columns = {"rule", "p_I", "p_II", "risk", "best", "worst"};
    for (std::size_t i = 0; i < e.rules.size(); ++i) {
        const auto& rr = e.rules[i];
        t.rows.push_back({rr.rule.bitstring(), rr.p_I, rr.p_II, rr.risk, i == e.best, i == e.worst});
    }
    t.summary["r_O"] = r;
    t.summary["r_O_source"] = source;
    t.summary["rule_count"] = e.rules.size();
    t.summary["best_rule"] = e.rules[e.best].rule.bitstring();
    t.summary["best_risk"] = e.rules[e.best].risk;
    t.summary["worst_rule"] = e.rules[e.worst].rule.bitstring();
    t.summary["worst_risk"] = e.rules[e.worst].risk;
    t.summary["best_is_g_equals_d"] = e.rules[e.best].rule == DecisionRuleTable::identity(al.N);
    t.summary["worst_is_g_equals_not_d"] = e.rules[e.worst].rule == DecisionRuleTable::complement(al.N);
    if (!o.history.empty()) {
        std::vector<int> h;
        for (char ch : o.history) {
            if (ch != '0' && ch != '1') throw ParamError("--history takes a string of 0/1 characters");
            h.push_back(ch - '0');
        }
        if (static_cast<int>(h.size()) != al.N) throw ParamError("--history length must equal N");
        const int K = successes(h);
        config["history"] = o.history;
        t.summary["K"] = K;
        t.summary["p_H_given_K"] = p_h_given_K(p, al, r, K);
        t.summary["p_D_given_K"] = p_d_given_K(p, al, r, K);
        t.summary["p_H_given_K_D0"] = posterior_given_K_d(p, al, r, K, 0);
        t.summary["p_H_given_K_D1"] = posterior_given_K_d(p, al, r, K, 1);
    }
    return t;
}

// ---- validate

struct ValidateOpts {
    std::uint64_t trials = 100000;
    std::string fading = "rayleigh";
    std::string aloha;
    std::optional<double> r_O;
    unsigned threads = 0;
    double corrupt_beta = 1.0;
    double k = 3.0;
};

struct Report {
    Table t;
    int passed = 0, failed = 0, skipped = 0;

    void add(const std::string& q, double r, double analytic, const Estimate& e, double k) {
        std::string verdict = "skip";
        if (e.n > 0) {
            const bool ok = agrees(e, analytic, k);
            verdict = ok ? "pass" : "fail";
            ok ? ++passed : ++failed;
        } else {
            ++skipped;
        }
        t.rows.push_back({q, num(r), num(analytic), num(e.value), num(e.se), e.n, e.low_confidence, verdict});
    }
};

Table cmd_validate(const ModelParams& p, const Common& c, const ValidateOpts& o, json& config, bool& failed) {
    if (!(o.k > 0)) throw ParamError("--k must be positive");
    if (!(o.corrupt_beta > 0)) throw ParamError("--corrupt-beta must be positive");
    SimConfig sc;
    sc.trials = o.trials;
    sc.seed = c.seed;
    sc.threads = o.threads;
    sc.fading = fading_from_string(o.fading);
    Report rep;
    rep.t.columns = {"quantity", "r_O", "analytic", "estimate", "stderr", "n", "low_confidence", "verdict"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // negative control: one analytic branch evaluated at a wrong beta
    const ModelParams pc = p.with_beta(p.beta() * o.corrupt_beta);

    if (!o.aloha.empty()) {
        const AlohaParams al = aloha_from(read_json(o.aloha), o.aloha);
        if (o.r_O && !(*o.r_O > 0 && std::isfinite(*o.r_O))) throw ParamError("--r-O must be positive and finite");
        const double r = o.r_O ? *o.r_O : thinned_optimal_radius(p, al);
        if (!std::isfinite(r)) throw ParamError("no finite thinned optimum; pass --r-O");
        sc.aloha = al;
        sc.r_O_grid = {r};
        sc.validate();
        config["aloha"] = {{"p", al.p}, {"N", al.N}};
        config["r_O"] = r;
        const MultiSimEstimate est = estimate_multiobs(p, sc);
        rep.add("p_H", r, thinned_prior(p, al), est.p_H, o.k);
        for (int K = 0; K <= al.N; ++K) {
            const std::string s = std::to_string(K);
            rep.add("p_K[" + s + "]", r, p_K(p, al, r, K), est.p_K[K], o.k);
            rep.add("p_H_given_K[" + s + "]", r, p_h_given_K(pc, al, r, K), est.p_h_given_K[K], o.k);
            rep.add("p_D_given_K[" + s + "]", r, p_d_given_K(p, al, r, K), est.p_d_given_K[K], o.k);
            rep.add("p_H_given_KD[" + s + ",0]", r, posterior_given_K_d(p, al, r, K, 0), est.post_d0[K], o.k);
            rep.add("p_H_given_KD[" + s + ",1]", r, posterior_given_K_d(p, al, r, K, 1), est.post_d1[K], o.k);
        }
        const auto g = DecisionRuleTable::identity(al.N);
        const auto an = rule_errors(p, al, r, g);
        const auto em = estimate_rule_errors(est, g);
        rep.add("p_I[g=d]", r, an.p_I, em.p_I, o.k);
        rep.add("p_II[g=d]", r, an.p_II, em.p_II, o.k);
        rep.t.summary["region_radius"] = est.region_radius;
        rep.t.summary["truncation_bias_bound"] = est.bias_bound;
    } else {
        sc.r_O_grid = grid_or(c.grid, "list:10,30,50,80");
        sc.validate();
        config["grid"] = sc.r_O_grid;
        const SimEstimate est = estimate_single(p, sc);
        const bool fade = sc.fading == Fading::rayleigh;
        const double pH = fade ? prior_success(p) : levy_prior(p);
        rep.add("p_H", nan, pH, est.p_H, o.k);
        const DerivedParams dc = derive(pc);
        for (const RadiusEstimate& re : est.radii) {
            const double r = re.r_O;
            const double pD = evidence_success(p, r);
            double p11, p10, rh, pI, pII;
            if (fade) {
                const PosteriorTable post = posterior(p, r);
                const TypeErrors te = type_errors(p, r);
                p11 = post.p_h1_d1;
                p10 = post.p_h1_d0;
                rh = rho(pc, chi_of_radius(dc, r));
                pI = te.p_I;
                pII = te.p_II;
            } else {
                p11 = posterior_nofade(p, r).value;
                p10 = std::clamp((pH - p11 * pD) / (1 - pD), 0.0, 1.0);
                rh = rho_nofade(pc, r).value;
                const NofadeTypeErrors te = type_errors_nofade(p, r);
                pI = te.p_I;
                pII = te.p_II;
            }
            rep.add("p_D", r, pD, re.p_D, o.k);
            rep.add("p_H_given_D1", r, p11, re.p_H_given_D1, o.k);
            rep.add("p_H_given_D0", r, p10, re.p_H_given_D0, o.k);
            rep.add("rho", r, rh, re.rho, o.k);
            rep.add("p_I", r, pI, re.p_I, o.k);
            rep.add("p_II", r, pII, re.p_II, o.k);
        }
        rep.t.summary["region_radius"] = est.region_radius;
        rep.t.summary["truncation_bias_bound"] = est.bias_bound;
    }
    config["trials"] = o.trials;
    config["seed"] = c.seed;
    config["fading"] = o.fading;
    config["k"] = o.k;
    if (o.corrupt_beta != 1.0) config["corrupt_beta"] = o.corrupt_beta;
    rep.t.summary["trials"] = o.trials;
    rep.t.summary["passed"] = rep.passed;
    rep.t.summary["failed"] = rep.failed;
    rep.t.summary["skipped"] = rep.skipped;
    failed = rep.failed > 0;
    return rep.t;
}

void add_common(CLI::App* sub, Common& c, bool grid = true) {
    sub->add_option("--scenario", c.scenario, "scenario JSON {n, lambda, alpha, beta, r_T, eta}")->required();
    sub->add_option("--out", c.out, "output file (a manifest is written next to it)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (grid) sub->add_option("--grid", c.grid, "log:a:b:n, lin:a:b:n or a comma list");
}

}  // namespace

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::vector<double> parse_grid(const std::string& spec) {
    auto fail = [&](const std::string& why) { return ParamError("bad grid \"" + spec + "\": " + why); };
    auto to_d = [&](const std::string& s) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw fail("not a number: " + s);
        }
        if (pos != s.size() || !std::isfinite(v)) throw fail("not a number: " + s);
        return v;
    };
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, sep)) parts.push_back(item);
        return parts;
    };
    const auto colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? "list" : spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? spec : spec.substr(colon + 1);
    std::vector<double> g;
    if (kind == "list") {
        for (const auto& s : split(rest, ',')) g.push_back(to_d(s));
        if (g.empty()) throw fail("empty list");
        return g;
    }
    if (kind != "log" && kind != "lin") throw fail("unknown kind " + kind);
    const auto parts = split(rest, ':');
    if (parts.size() != 3) throw fail("expected kind:a:b:n");
    const double a = to_d(parts[0]), b = to_d(parts[1]), nd = to_d(parts[2]);
    if (nd < 1 || nd != std::floor(nd) || nd > 1e7) throw fail("n must be a positive integer");
    const int n = static_cast<int>(nd);
    if (kind == "log" && !(a > 0 && b > 0)) throw fail("log grid needs positive end points");
    for (int i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : double(i) / (n - 1);
        g.push_back(kind == "lin" ? a + (b - a) * f : std::exp(std::log(a) + (std::log(b) - std::log(a)) * f));
    }
    if (n > 1) g.back() = b;
    return g;
}

ModelParams load_scenario(const std::string& path) {
    const json j = read_json(path);
    if (!j.is_object()) throw ParamError(path + ": scenario must be a JSON object");
    const double eta = j.contains("eta") ? number(j, "eta", path) : 0.0;
    return ModelParams(integer(j, "n", path), number(j, "lambda", path), number(j, "alpha", path),
                       number(j, "beta", path), number(j, "r_T", path), eta);
}

CostMatrix load_cost(const std::string& path) {
    const json j = read_json(path);
    CostMatrix c{number(j, "c00", path), number(j, "c01", path), number(j, "c10", path), number(j, "c11", path)};
    c.validate();
    return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Physical vs protocol interference model inference", "ppi"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version);

    Common c;
    std::string cost_file;
    CorrelationOpts co;
    IltOpts io;
    MultiOpts mo;
    ValidateOpts vo;

    auto* corr = app.add_subcommand("correlation", "correlation of the physical and protocol outcomes vs chi");
    add_common(corr, c);
    corr->add_flag("--sweep-density", co.sweep, "chi* vs lambda c_n sigma^delta for delta in {1/3,1/2,2/3}");

    auto* risk = app.add_subcommand("risk", "Bayes risk vs guard radius and its optimum");
    add_common(risk, c);
    risk->add_option("--cost", cost_file, "cost JSON {c00, c01, c10, c11}");

    auto* roc = app.add_subcommand("roc", "ROC of the identity rule with marked operating points");
    add_common(roc, c);
    roc->add_option("--cost", cost_file, "cost JSON {c00, c01, c10, c11}");

    auto* fad = app.add_subcommand("fading-compare", "Rayleigh vs unit fading (alpha = 2n)");
    add_common(fad, c);
    fad->add_option("--ilt-method", io.method, "euler or talbot")->check(CLI::IsMember({"euler", "talbot"}));
    fad->add_option("--ilt-terms", io.terms, "inversion terms");

    auto* mob = app.add_subcommand("multiobs", "all decision rules under slotted Aloha");
    add_common(mob, c, false);
    mob->add_option("--aloha", mo.aloha, "Aloha JSON {p, N}");
    mob->add_option("--r-O", mo.r_O, "guard radius (default: thinned uniform-cost optimum)");
    mob->add_option("--history", mo.history, "past protocol outcomes, e.g. 0110");

    auto* val = app.add_subcommand("validate", "analytic values vs Monte Carlo");
    add_common(val, c);
    val->add_option("--trials", vo.trials, "simulated networks");
    val->add_option("--seed", c.seed, "master seed");
    val->add_option("--fading", vo.fading, "rayleigh or none")->check(CLI::IsMember({"rayleigh", "none"}));
    val->add_option("--aloha", vo.aloha, "Aloha JSON {p, N}: validate the multi-slot model");
    val->add_option("--r-O", vo.r_O, "guard radius for the multi-slot check");
    val->add_option("--threads", vo.threads, "worker threads (0: all cores)");
    val->add_option("--k", vo.k, "tolerance in standard errors");
    val->add_option("--corrupt-beta", vo.corrupt_beta)->group("");

    for (auto* sub : {corr, risk, roc, fad, mob})
        sub->add_option("--seed", c.seed, "recorded in the manifest");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        const ModelParams p = load_scenario(c.scenario);
        json config;
        config["scenario"] = scenario_json(p);
        const CostMatrix cost = cost_file.empty() ? CostMatrix::uniform() : load_cost(cost_file);
        if (!cost_file.empty()) config["cost"] = {{"c00", cost.c00}, {"c01", cost.c01}, {"c10", cost.c10}, {"c11", cost.c11}};
        if (*corr) {
            config["sweep_density"] = co.sweep;
            auto t = cmd_correlation(p, c, co, config);
            emit("correlation", c, config, t, out);
        } else if (*risk) {
            auto t = cmd_risk(p, c, cost, config);
            emit("risk", c, config, t, out);
        } else if (*roc) {
            auto t = cmd_roc(p, c, cost, config);
            emit("roc", c, config, t, out);
        } else if (*fad) {
            auto t = cmd_fading_compare(p, c, io, config);
            emit("fading-compare", c, config, t, out);
        } else if (*mob) {
            auto t = cmd_multiobs(p, c, mo, config);
            emit("multiobs", c, config, t, out);
        } else if (*val) {
            bool failed = false;
            auto t = cmd_validate(p, c, vo, config, failed);
            emit("validate", c, config, t, out);
            return failed ? exit_validation_failed : exit_ok;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_ok;
}

}  // namespace ppi
