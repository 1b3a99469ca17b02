#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppi/params.hpp"
#include "ppi/risk.hpp"

namespace ppi {

// Slotted Aloha: each node attempts with probability p in every slot
struct AlohaParams {
    double p;
    int N;  // prior observations, reference TX attempted in each

    AlohaParams(double p, int N);
    double pbar() const { return 1.0 - p; }
};

struct MultiObsDerived {
    double mu_d;  // lambda c_n r_O^n
    double xi;    // (p/pbar) chi^-delta I(chi, delta)
};

MultiObsDerived multi_obs_derived(const ModelParams& params, const AlohaParams& aloha, double r_O);

// g(K, d) for K in 0..N, stored at index 2K + d
class DecisionRuleTable {
public:
    explicit DecisionRuleTable(int N, std::vector<int> entries);

    // bit i of the bitstring (left to right) is entry i
    static DecisionRuleTable from_code(int N, std::uint64_t code);
    static DecisionRuleTable identity(int N);    // g(K,d) = d
    static DecisionRuleTable complement(int N);  // g(K,d) = 1 - d
    static DecisionRuleTable constant(int N, int h);

    int N() const { return N_; }
    int operator()(int K, int d) const { return h_[2 * K + d]; }
    std::uint64_t code() const;
    std::string bitstring() const;
    bool operator==(const DecisionRuleTable& o) const { return N_ == o.N_ && h_ == o.h_; }

private:
    int N_;
    std::vector<int> h_;
};

// Number of successes in a raw protocol-observation history
int successes(const std::vector<int>& history);

// sum_j C(l,j) (-1)^j exp(-nu (1 - a^(k+j))) = E[a^(kM) (1 - a^M)^l], M ~ Poisson(nu)
double f_d(double nu, double a, int k, int l);
double log_f_d(double nu, double a, int k, int l);

double p_h_given_m(const ModelParams& params, const AlohaParams& aloha, double r_O, int m);
double p_h_given_K(const ModelParams& params, const AlohaParams& aloha, double r_O, int K);
double p_d_given_K(const ModelParams& params, const AlohaParams& aloha, double r_O, int K);
double p_K(const ModelParams& params, const AlohaParams& aloha, double r_O, int K);
double posterior_given_K_d(const ModelParams& params, const AlohaParams& aloha, double r_O, int K, int d);

// Thinned single-observation quantities (lambda -> p lambda)
double thinned_prior(const ModelParams& params, const AlohaParams& aloha);
double thinned_posterior_d1(const ModelParams& params, const AlohaParams& aloha, double r_O);

// Everything the rule errors depend on, per K
struct MultiObsTables {
    std::vector<double> p_K, p_h_given_K, p_d_given_K;
    double p_H;        // thinned prior
    double post_d1;    // p_{H|D}(1|1), thinned
};

MultiObsTables multi_obs_tables(const ModelParams& params, const AlohaParams& aloha, double r_O);

TypeErrors rule_errors(const MultiObsTables& t, const DecisionRuleTable& rule);
TypeErrors rule_errors(const ModelParams& params, const AlohaParams& aloha, double r_O,
                       const DecisionRuleTable& rule);

struct RuleResult {
    DecisionRuleTable rule;
    double p_I;
    double p_II;
    double risk;  // uniform costs
};

struct RuleEnumeration {
    std::vector<RuleResult> rules;  // ascending bitstring order
    std::size_t best;               // smallest bitstring among risk minimizers
    std::size_t worst;              // smallest bitstring among risk maximizers
};

inline constexpr int max_enumerated_N = 8;

RuleEnumeration enumerate_rules(const ModelParams& params, const AlohaParams& aloha, double r_O);

// Uniform-cost optimal guard radius with density p lambda
double thinned_optimal_radius(const ModelParams& params, const AlohaParams& aloha);

}  // namespace ppi
