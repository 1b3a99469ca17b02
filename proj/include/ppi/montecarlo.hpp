#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ppi/multi_obs.hpp"
#include "ppi/params.hpp"

namespace ppi {

enum class Fading { rayleigh, none };

std::string to_string(Fading f);
Fading fading_from_string(const std::string& s);

struct SimConfig {
    double region_radius = 0.0;  // 0: sized from the truncation bound
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    Fading fading = Fading::rayleigh;
    std::optional<AlohaParams> aloha;
    std::vector<double> r_O_grid;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

inline constexpr std::uint64_t min_trials = 10000;
inline constexpr double truncation_target = 1e-3;
inline constexpr std::uint64_t low_confidence_n = 100;

// sigma lambda c_n n R^(n-alpha) / (alpha - n), lambda thinned by p under Aloha
double truncation_bias_bound(const ModelParams& p, double lambda_active, double R);
double auto_region_radius(const ModelParams& p, const SimConfig& cfg);

// Independent generator for one trial, derived from (seed, trial)
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

struct Realization {
    int n;
    std::vector<double> positions;  // n coordinates per interferer
    std::vector<double> distances;  // to the reference RX at the origin
    std::vector<double> fades;
    std::vector<double> reference_tx;  // at distance r_T along the first axis
    double reference_fade;
};

Realization sample_network(const ModelParams& p, const SimConfig& cfg, std::mt19937_64& rng);

double sinr(const ModelParams& p, const Realization& net);

struct Estimate {
    double value = 0.0;
    double se = 0.0;  // standard error
    std::uint64_t n = 0;  // effective sample size
    bool low_confidence = true;
};

Estimate bernoulli_estimate(std::uint64_t hits, std::uint64_t n);

// |value - truth| <= k SE; a sample with zero SE falls back to the Bernoulli SE at truth
bool agrees(const Estimate& e, double truth, double k = 3.0);

struct RadiusEstimate {
    double r_O;
    Estimate p_D;
    Estimate p_HD;          // P(H=1, D=1)
    Estimate p_H_given_D1;  // P(H=1 | D=1)
    Estimate p_H_given_D0;
    Estimate rho;
    Estimate p_I;   // P(D=1 | H=0)
    Estimate p_II;  // P(D=0 | H=1)
};

struct SimEstimate {
    Estimate p_H;
    std::vector<RadiusEstimate> radii;
    double region_radius;
    double bias_bound;
    std::uint64_t trials;
};

SimEstimate estimate_single(const ModelParams& p, const SimConfig& cfg);

struct MultiSimEstimate {
    int N;
    double r_O;
    Estimate p_H, p_D;
    std::vector<Estimate> p_K, p_h_given_K, p_d_given_K, post_d0, post_d1;
    std::vector<std::uint64_t> counts;  // index (2K + d) * 2 + h
    double region_radius;
    double bias_bound;
    std::uint64_t trials;
};

// r_O is taken from cfg.r_O_grid, which must hold exactly one radius
MultiSimEstimate estimate_multiobs(const ModelParams& p, const SimConfig& cfg);

struct RuleErrorEstimate {
    Estimate p_I, p_II;
};

RuleErrorEstimate estimate_rule_errors(const MultiSimEstimate& est, const DecisionRuleTable& rule);

// E[exp(-s I) | no interferer within r_O], Rayleigh fading; r_O from cfg.r_O_grid
Estimate estimate_void_laplace(const ModelParams& p, const SimConfig& cfg, double s);

}  // namespace ppi
