#pragma once

#include <vector>

#include "ppi/params.hpp"

namespace ppi {

struct CorrelationCurve {
    std::vector<double> chi_grid;
    std::vector<double> rho_values;
};

struct ChiStar {
    double chi;          // global maximizer of rho
    double rho;          // rho at chi
    double chi_hat;      // upper end of the guaranteed bracket [1, chi_hat]
    double residual;     // (1-chi)e^B + (1+chi)e^C - 2 at chi
    int stationary_points;  // local maxima found by the grid scan
};

// Pearson correlation of the physical and protocol success indicators
double rho(const ModelParams& p, double chi);
double log_rho(const ModelParams& p, double chi);

// (1-chi) e^B and 2 - (1+chi) e^C; they cross at the stationary point
double corr_f1(const ModelParams& p, double chi);
double corr_f2(const ModelParams& p, double chi);

ChiStar chi_star(const ModelParams& p);

// Noise-free maximizer as a function of lambda c_n sigma^delta alone
ChiStar chi_star_for_scale(double scale, double delta);

// Root of I(chi,delta) = (chi-1)/(chi+1) chi^delta, the small-density limit of chi*
double chi_star_limit(double delta);

CorrelationCurve correlation_curve(const ModelParams& p, const std::vector<double>& chi_grid);

}  // namespace ppi
