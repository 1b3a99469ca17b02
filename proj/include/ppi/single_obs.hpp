#pragma once

#include "ppi/params.hpp"

namespace ppi {

struct AbcTerms {
    double A;
    double B;
    double C;
    double B_minus_C;  // lambda c_n sigma^delta G(chi), computed without differencing
};

struct PosteriorTable {
    double p_h1_d1;
    double p_h1_d0;
    double p_h0_d1;
    double p_h0_d0;
};

// p_H(1): physical-model success probability
double prior_success(const ModelParams& p);

// p_D(1): no interferer inside the guard zone
double evidence_success(const ModelParams& p, double r_O);

AbcTerms abc_terms(const ModelParams& p, double r_O);

// log p_{H|D}(1|1) = -lambda c_n sigma^delta T(chi) - sigma eta
double log_posterior_d1(const ModelParams& p, double r_O);

PosteriorTable posterior(const ModelParams& p, double r_O);

// p_{H|D}(1|1) limits for r_O -> 0 and r_O -> infinity
double posterior_d1_limit_zero(const ModelParams& p);
double posterior_d1_limit_infinity(const ModelParams& p);

// E[exp(-s I) | no interferer within r_O], Rayleigh fading, real s >= 0
double lt_interference_given_void(const ModelParams& p, double r_O, double s);

}  // namespace ppi
