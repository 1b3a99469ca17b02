#include "ppi/single_obs.hpp"

#include <cmath>

#include "ppi/specfn.hpp"

namespace ppi {

namespace {

void check_radius(double r_O) {
    if (!std::isfinite(r_O)) throw ParamError("r_O must be finite");
    if (!(r_O > 0)) throw ParamError("r_O must be positive");
}

}  // namespace

double prior_success(const ModelParams& p) {
    const auto d = derive(p);
    return std::exp(-interference_scale(p, d) * d.kappa_delta - d.sigma * p.eta());
}

double evidence_success(const ModelParams& p, double r_O) {
    if (!(r_O >= 0)) throw ParamError("r_O must be nonnegative");
    const auto d = derive(p);
    return std::exp(-p.lambda() * d.c_n * std::pow(r_O, p.n()));
}

AbcTerms abc_terms(const ModelParams& p, double r_O) {
    if (!(r_O >= 0)) throw ParamError("r_O must be nonnegative");
    const auto d = derive(p);
    const double scale = interference_scale(p, d);
    const double chi = chi_of_radius(d, r_O);
    AbcTerms t{};
    t.A = scale * d.kappa_delta + d.sigma * p.eta();
    t.B = p.lambda() * d.c_n * std::pow(r_O, p.n());
    t.C = scale * int_I(chi, d.delta);
    t.B_minus_C = scale * int_G(chi, d.delta);
    return t;
}

double log_posterior_d1(const ModelParams& p, double r_O) {
    const auto d = derive(p);
    const double chi = chi_of_radius(d, r_O);
    return -interference_scale(p, d) * int_T(chi, d.delta) - d.sigma * p.eta();
}

PosteriorTable posterior(const ModelParams& p, double r_O) {
    check_radius(r_O);
    const auto t = abc_terms(p, r_O);
    PosteriorTable pt{};
    pt.p_h1_d1 = std::exp(log_posterior_d1(p, r_O));
    // (e^-A - e^-(A+C)) / (1 - e^-B)
    pt.p_h1_d0 = std::exp(-t.A) * (-std::expm1(-t.C)) / (-std::expm1(-t.B));
    pt.p_h0_d1 = 1.0 - pt.p_h1_d1;
    pt.p_h0_d0 = 1.0 - pt.p_h1_d0;
    return pt;
}

double posterior_d1_limit_zero(const ModelParams& p) { return prior_success(p); }

double posterior_d1_limit_infinity(const ModelParams& p) {
    return std::exp(-derive(p).sigma * p.eta());
}

double lt_interference_given_void(const ModelParams& p, double r_O, double s) {
    if (!(s >= 0)) throw ParamError("s must be nonnegative");
    if (!(r_O >= 0)) throw ParamError("r_O must be nonnegative");
    if (s == 0) return 1.0;
    const auto d = derive(p);
    const double u = std::pow(r_O, p.alpha()) / s;
    return std::exp(-p.lambda() * d.c_n * std::pow(s, d.delta) * int_T(u, d.delta));
}

}  // namespace ppi
