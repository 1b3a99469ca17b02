#pragma once

#include <optional>
#include <vector>

#include "ppi/params.hpp"

namespace ppi {

// c_ij: cost of predicting h = i when the truth is h = j
struct CostMatrix {
    double c00 = 0.0, c01 = 1.0, c10 = 1.0, c11 = 0.0;

    static CostMatrix uniform() { return {}; }
    void validate() const;
    bool optimizable() const { return c10 > c00 && c01 > c11; }
};

struct SingleObsRule {
    int g0 = 0;  // prediction when D = 0
    int g1 = 1;  // prediction when D = 1

    static SingleObsRule identity() { return {0, 1}; }
    int operator()(int d) const { return d ? g1 : g0; }
};

struct RocPoint {
    double r_O;
    double p_I;
    double p_II;
    double risk;
};

struct TypeErrors {
    double p_I;   // predict success although SINR < beta
    double p_II;  // predict failure although SINR >= beta
};

// Joint law of (H, D) at one guard-zone radius
struct JointHD {
    double h1d1, h0d1, h1d0, h0d0;
    double p_h1() const { return h1d1 + h1d0; }
    double p_h0() const { return h0d1 + h0d0; }
};

JointHD joint_hd(const ModelParams& p, double r_O);

double bayes_risk(const ModelParams& p, const CostMatrix& c, double r_O);
double bayes_risk(const ModelParams& p, const CostMatrix& c, double r_O, SingleObsRule rule);

// Terms of the first-order condition: f_L decreases, f_R increases, they meet at r_O*
double risk_fL(const ModelParams& p, const CostMatrix& c, double r_O);
double risk_fR(const ModelParams& p, double r_O);

struct OptimalRadius {
    bool interior;    // false when no finite minimizer exists
    double r_O;       // infinity when !interior
    double chi;
    double risk;      // minimum, or the r_O -> infinity limit
    double residual;  // first-order condition residual at r_O
};

OptimalRadius optimal_radius(const ModelParams& p, const CostMatrix& c);

struct Sensitivities {
    double d_lambda;
    double d_sigma;
};

// derivatives of r_O* in lambda and in sigma, noise-free scenarios only
Sensitivities sensitivities(const ModelParams& p, const CostMatrix& c);

TypeErrors type_errors(const ModelParams& p, double r_O, SingleObsRule rule = SingleObsRule::identity());

struct OperatingPoints {
    std::optional<double> r_DI;  // unset when 1/sigma <= eta
    double r_MM;
    double r_EE;
};

OperatingPoints operating_points(const ModelParams& p);

std::vector<RocPoint> roc_curve(const ModelParams& p, const std::vector<double>& r_O_grid,
                                SingleObsRule rule = SingleObsRule::identity(),
                                const CostMatrix& c = CostMatrix::uniform());

}  // namespace ppi
