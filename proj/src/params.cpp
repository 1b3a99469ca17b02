#include "ppi/params.hpp"

#include <cmath>
#include <numbers>

#include "ppi/specfn.hpp"

namespace ppi {

ModelParams::ModelParams(int n, double lambda, double alpha, double beta, double r_T, double eta)
    : n_(n), lambda_(lambda), alpha_(alpha), beta_(beta), r_T_(r_T), eta_(eta) {
    if (n < 1 || n > 3) throw ParamError("n must be 1, 2 or 3");
    if (!(std::isfinite(lambda) && lambda > 0)) throw ParamError("lambda must be positive");
    if (!(std::isfinite(alpha) && alpha > n)) throw ParamError("alpha must exceed n");
    if (!(std::isfinite(beta) && beta > 0)) throw ParamError("beta must be positive");
    if (!(std::isfinite(r_T) && r_T > 0)) throw ParamError("r_T must be positive");
    if (!(std::isfinite(eta) && eta >= 0)) throw ParamError("eta must be nonnegative");
}

double unit_ball_volume(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi / 3.0;
    }
    throw ParamError("n must be 1, 2 or 3");
}

DerivedParams derive(const ModelParams& p) {
    DerivedParams d{};
    d.delta = p.n() / p.alpha();
    d.c_n = unit_ball_volume(p.n());
    d.sigma = p.beta() * std::pow(p.r_T(), p.alpha());
    d.kappa_delta = kappa(d.delta);
    d.alpha = p.alpha();
    return d;
}

double chi_of_radius(const DerivedParams& d, double r_O) {
    if (!(r_O >= 0)) throw ParamError("r_O must be nonnegative");
    return std::pow(r_O, d.alpha) / d.sigma;
}

double radius_of_chi(const DerivedParams& d, double chi) {
    if (!(chi >= 0)) throw ParamError("chi must be nonnegative");
    return std::pow(chi * d.sigma, 1.0 / d.alpha);
}

double interference_scale(const ModelParams& p, const DerivedParams& d) {
    return p.lambda() * d.c_n * std::pow(d.sigma, d.delta);
}

}  // namespace ppi
