#include "ppi/multi_obs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppi/single_obs.hpp"
#include "ppi/specfn.hpp"

namespace ppi {

AlohaParams::AlohaParams(double p_, int N_) : p(p_), N(N_) {
    if (!(p > 0 && p < 1)) throw ParamError("Aloha transmission probability must lie in (0,1)");
    if (N < 0) throw ParamError("number of prior observations must be nonnegative");
}

namespace {

void check_inputs(const ModelParams& params, const AlohaParams& aloha, double r_O) {
    if (params.eta() != 0.0) throw ParamError("multi-observation model requires eta = 0");
    if (!(std::isfinite(r_O) && r_O > 0)) throw ParamError("r_O must be positive and finite");
    if (aloha.N < 0) throw ParamError("number of prior observations must be nonnegative");
}

void check_K(const AlohaParams& aloha, int K) {
    if (K < 0 || K > aloha.N) throw ParamError("K must lie in 0..N");
}

double log_binom(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_sum_exp(const std::vector<double>& v) {
    const double mx = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

// E[a^(kM) (1 - a^M)^l] by summing the Poisson law directly
double log_f_d_poisson(double nu, double a, int k, int l) {
    const int top = static_cast<int>(nu + 12.0 * std::sqrt(nu) + 20.0);
    const double la = std::log(a);
    std::vector<double> terms;
    terms.reserve(top + 1);
    double log_pm = -nu;
    for (int m = 0; m <= top; ++m) {
        if (m > 0) log_pm += std::log(nu / m);
        const double am = std::exp(m * la);
        if (l > 0 && m == 0) continue;
        terms.push_back(log_pm + k * m * la + l * std::log1p(-am));
    }
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    return log_sum_exp(terms);
}

// Ratio of f_d values, as a probability
double f_ratio(double nu, double a, int k1, int l1, int k0, int l0) {
    return std::exp(log_f_d(nu, a, k1, l1) - log_f_d(nu, a, k0, l0));
}

}  // namespace

double log_f_d(double nu, double a, int k, int l) {
    if (!(nu > 0)) throw ParamError("f_d requires nu > 0");
    if (!(a > 0 && a < 1)) throw ParamError("f_d requires 0 < a < 1");
    if (k < 0 || l < 0) throw ParamError("f_d requires nonnegative k, l");
    const double ak = std::pow(a, k);
    const double lead = -nu * (1.0 - ak);
    if (l == 0) return lead;
    if (l <= 20) {
        double sum = 0.0, mag = 0.0, c = 1.0, aj = 1.0;
        for (int j = 0; j <= l; ++j) {
            const double t = c * std::exp(nu * ak * -(1.0 - aj));
            sum += (j % 2 ? -t : t);
            mag += t;
            c = c * (l - j) / (j + 1);
            aj *= a;
        }
        if (sum > 0 && mag / sum < 1e6) return lead + std::log(sum);
    }
    return log_f_d_poisson(nu, a, k, l);
}

double f_d(double nu, double a, int k, int l) { return std::exp(log_f_d(nu, a, k, l)); }

MultiObsDerived multi_obs_derived(const ModelParams& params, const AlohaParams& aloha, double r_O) {
    check_inputs(params, aloha, r_O);
    const DerivedParams d = derive(params);
    const double chi = chi_of_radius(d, r_O);
    MultiObsDerived m{};
    m.mu_d = params.lambda() * d.c_n * std::pow(r_O, params.n());
    m.xi = aloha.p / aloha.pbar() * std::pow(chi, -d.delta) * int_I(chi, d.delta);
    return m;
}

int successes(const std::vector<int>& history) {
    int K = 0;
    for (int x : history) {
        if (x != 0 && x != 1) throw ParamError("observation history entries must be 0 or 1");
        K += x;
    }
    return K;
}

double thinned_prior(const ModelParams& params, const AlohaParams& aloha) {
    return prior_success(params.with_lambda(aloha.p * params.lambda()));
}

double thinned_posterior_d1(const ModelParams& params, const AlohaParams& aloha, double r_O) {
    check_inputs(params, aloha, r_O);
    return std::exp(log_posterior_d1(params.with_lambda(aloha.p * params.lambda()), r_O));
}

double p_h_given_m(const ModelParams& params, const AlohaParams& aloha, double r_O, int m) {
    if (m < 0) throw ParamError("m must be nonnegative");
    const MultiObsDerived md = multi_obs_derived(params, aloha, r_O);
    const DerivedParams d = derive(params);
    const double chi = chi_of_radius(d, r_O);
    // p mu_d (1 - chi^-delta (kappa + I)) = -p lambda c_n sigma^delta T(chi)
    const double outside = -aloha.p * interference_scale(params, d) * int_T(chi, d.delta);
    return std::exp(outside + m * (std::log1p(md.xi) + std::log(aloha.pbar())));
}

double p_h_given_K(const ModelParams& params, const AlohaParams& aloha, double r_O, int K) {
    check_K(aloha, K);
    const MultiObsDerived md = multi_obs_derived(params, aloha, r_O);
    const DerivedParams d = derive(params);
    const double scale = interference_scale(params, d);
    const double pre = aloha.p * md.mu_d * (1.0 + md.xi) - aloha.p * scale * d.kappa_delta;
    const int l = aloha.N - K;
    return std::exp(pre + log_f_d(md.mu_d * (1.0 + md.xi), aloha.pbar(), K + 1, l) -
                    log_f_d(md.mu_d, aloha.pbar(), K, l));
}

double p_d_given_K(const ModelParams& params, const AlohaParams& aloha, double r_O, int K) {
    check_K(aloha, K);
    const MultiObsDerived md = multi_obs_derived(params, aloha, r_O);
    const int l = aloha.N - K;
    return f_ratio(md.mu_d, aloha.pbar(), K + 1, l, K, l);
}

double p_K(const ModelParams& params, const AlohaParams& aloha, double r_O, int K) {
    check_K(aloha, K);
    const MultiObsDerived md = multi_obs_derived(params, aloha, r_O);
    return std::exp(log_binom(aloha.N, K) + log_f_d(md.mu_d, aloha.pbar(), K, aloha.N - K));
}

double posterior_given_K_d(const ModelParams& params, const AlohaParams& aloha, double r_O, int K, int d) {
    check_K(aloha, K);
    if (d != 0 && d != 1) throw ParamError("d must be 0 or 1");
    const double post1 = thinned_posterior_d1(params, aloha, r_O);
    if (d == 1) return post1;
    const double pD = p_d_given_K(params, aloha, r_O, K);
    const double den = 1.0 - pD;
    if (!(den > 1e-14)) throw std::domain_error("D = 0 is numerically impossible at this r_O");
    const double pH = p_h_given_K(params, aloha, r_O, K);
    return std::clamp((pH - post1 * pD) / den, 0.0, 1.0);
}

MultiObsTables multi_obs_tables(const ModelParams& params, const AlohaParams& aloha, double r_O) {
    MultiObsTables t;
    for (int K = 0; K <= aloha.N; ++K) {
        t.p_K.push_back(p_K(params, aloha, r_O, K));
        t.p_h_given_K.push_back(p_h_given_K(params, aloha, r_O, K));
        t.p_d_given_K.push_back(p_d_given_K(params, aloha, r_O, K));
    }
    t.p_H = thinned_prior(params, aloha);
    t.post_d1 = thinned_posterior_d1(params, aloha, r_O);
    return t;
}

TypeErrors rule_errors(const MultiObsTables& t, const DecisionRuleTable& rule) {
    const int N = static_cast<int>(t.p_K.size()) - 1;
    if (rule.N() != N) throw ParamError("rule table does not match N");
    double d11 = 0, d10 = 0, d01 = 0, d00 = 0, dI = 0, dII = 0;
    for (int K = 0; K <= N; ++K) {
        const double w = t.p_d_given_K[K] * t.p_K[K];
        (rule(K, 1) ? d11 : d01) += w;
        if (rule(K, 0)) {
            d10 += w;
            dI += (1.0 - t.p_h_given_K[K]) * t.p_K[K];
        } else {
            d00 += w;
            dII += t.p_h_given_K[K] * t.p_K[K];
        }
    }
    TypeErrors e{};
    e.p_I = std::clamp(((1.0 - t.post_d1) * (d11 - d10) + dI) / (1.0 - t.p_H), 0.0, 1.0);
    e.p_II = std::clamp((t.post_d1 * (d01 - d00) + dII) / t.p_H, 0.0, 1.0);
    return e;
}

TypeErrors rule_errors(const ModelParams& params, const AlohaParams& aloha, double r_O,
                       const DecisionRuleTable& rule) {
    return rule_errors(multi_obs_tables(params, aloha, r_O), rule);
}

RuleEnumeration enumerate_rules(const ModelParams& params, const AlohaParams& aloha, double r_O) {
    if (aloha.N > max_enumerated_N)
        throw ParamError("rule enumeration limited to N <= 8: 2^(2(N+1)) tables would be required");
    const MultiObsTables t = multi_obs_tables(params, aloha, r_O);
    const std::uint64_t count = std::uint64_t{1} << (2 * (aloha.N + 1));
    RuleEnumeration out;
    out.rules.reserve(count);
    out.best = out.worst = 0;
    for (std::uint64_t code = 0; code < count; ++code) {
        auto rule = DecisionRuleTable::from_code(aloha.N, code);
        const TypeErrors e = rule_errors(t, rule);
        const double risk = (1.0 - t.p_H) * e.p_I + t.p_H * e.p_II;
        out.rules.push_back({std::move(rule), e.p_I, e.p_II, risk});
        if (risk < out.rules[out.best].risk) out.best = out.rules.size() - 1;
        if (risk > out.rules[out.worst].risk) out.worst = out.rules.size() - 1;
    }
    return out;
}

double thinned_optimal_radius(const ModelParams& params, const AlohaParams& aloha) {
    if (params.eta() != 0.0) throw ParamError("multi-observation model requires eta = 0");
    return optimal_radius(params.with_lambda(aloha.p * params.lambda()), CostMatrix::uniform()).r_O;
}

DecisionRuleTable::DecisionRuleTable(int N, std::vector<int> entries) : N_(N), h_(std::move(entries)) {
    if (N < 0) throw ParamError("N must be nonnegative");
    if (h_.size() != static_cast<std::size_t>(2 * (N + 1))) throw ParamError("rule table must have 2(N+1) entries");
    for (int h : h_)
        if (h != 0 && h != 1) throw ParamError("rule entries must be 0 or 1");
}

DecisionRuleTable DecisionRuleTable::from_code(int N, std::uint64_t code) {
    const int len = 2 * (N + 1);
    if (len > 63) throw ParamError("rule table too large for a 64-bit code");
    if (code >> len) throw ParamError("rule code out of range");
    std::vector<int> h(len);
    for (int i = 0; i < len; ++i) h[i] = (code >> (len - 1 - i)) & 1;
    return DecisionRuleTable(N, std::move(h));
}

DecisionRuleTable DecisionRuleTable::identity(int N) {
    std::vector<int> h(2 * (N + 1));
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = i % 2;
    return DecisionRuleTable(N, std::move(h));
}

DecisionRuleTable DecisionRuleTable::complement(int N) {
    std::vector<int> h(2 * (N + 1));
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = 1 - int(i % 2);
    return DecisionRuleTable(N, std::move(h));
}

DecisionRuleTable DecisionRuleTable::constant(int N, int v) {
    return DecisionRuleTable(N, std::vector<int>(2 * (N + 1), v));
}

std::uint64_t DecisionRuleTable::code() const {
    std::uint64_t c = 0;
    for (int h : h_) c = (c << 1) | std::uint64_t(h);
    return c;
}

std::string DecisionRuleTable::bitstring() const {
    std::string s;
    for (int h : h_) s.push_back(h ? '1' : '0');
    return s;
}

}  // namespace ppi
