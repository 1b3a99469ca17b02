#pragma once

#include <complex>

#include "ppi/ilt.hpp"
#include "ppi/params.hpp"

namespace ppi {

// Unit fades, delta = 1/2 only.

struct NofadeValue {
    double value;           // clamped to [0,1] for probabilities
    double raw;             // before clamping
    double error_estimate;  // inversion error estimate
    bool converged;
};

// 2 Q(c_n lambda sqrt((pi/2) / (1/sigma - eta)))
double levy_prior(const ModelParams& p);

// (1/2) int_0^u (1 - e^{-s y}) y^{-3/2} dy; u may be +infinity
std::complex<double> J(std::complex<double> s, double u);

// E[exp(-s I) | no interferer within r_O]
std::complex<double> lt_nofade_given_void(const ModelParams& p, double r_O, std::complex<double> s);

// P(SINR >= beta | no interferer within r_O)
NofadeValue posterior_nofade(const ModelParams& p, double r_O, const IltConfig& cfg = {});

NofadeValue rho_nofade(const ModelParams& p, double r_O, const IltConfig& cfg = {});

struct NofadeTypeErrors {
    double p_I;
    double p_II;
    double error_estimate;
    bool converged;
};

// identity rule
NofadeTypeErrors type_errors_nofade(const ModelParams& p, double r_O, const IltConfig& cfg = {});

}  // namespace ppi
