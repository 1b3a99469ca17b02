#pragma once

#include <stdexcept>
#include <string>

namespace ppi {

struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Physical scenario. Validated on construction, immutable afterwards.
class ModelParams {
public:
    ModelParams(int n, double lambda, double alpha, double beta, double r_T, double eta = 0.0);

    int n() const { return n_; }
    double lambda() const { return lambda_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double r_T() const { return r_T_; }
    double eta() const { return eta_; }

    ModelParams with_lambda(double lambda) const { return {n_, lambda, alpha_, beta_, r_T_, eta_}; }
    ModelParams with_beta(double beta) const { return {n_, lambda_, alpha_, beta, r_T_, eta_}; }
    ModelParams with_eta(double eta) const { return {n_, lambda_, alpha_, beta_, r_T_, eta}; }

private:
    int n_;
    double lambda_, alpha_, beta_, r_T_, eta_;
};

struct DerivedParams {
    double delta;        // n / alpha
    double c_n;          // unit ball volume
    double sigma;        // beta * r_T^alpha
    double kappa_delta;  // pi delta / sin(pi delta)
    double alpha;
};

double unit_ball_volume(int n);

DerivedParams derive(const ModelParams& p);

double chi_of_radius(const DerivedParams& d, double r_O);
double radius_of_chi(const DerivedParams& d, double chi);

// lambda c_n sigma^delta, the scale multiplying kappa and I in the exponents
double interference_scale(const ModelParams& p, const DerivedParams& d);

}  // namespace ppi
