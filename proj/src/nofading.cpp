#include "ppi/nofading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ppi/single_obs.hpp"
#include "ppi/specfn.hpp"

namespace ppi {

namespace {

void check_half(const ModelParams& p) {
    if (std::abs(p.alpha() - 2.0 * p.n()) > 1e-12 * p.alpha())
        throw ParamError("the no-fading branch requires alpha = 2n (delta = 1/2)");
}

double threshold(const ModelParams& p) {
    const double x = 1.0 / derive(p).sigma - p.eta();
    if (!(x > 0)) throw ParamError("1/sigma must exceed eta: SINR target unreachable even without interference");
    return x;
}

}  // namespace

double levy_prior(const ModelParams& p) {
    check_half(p);
    const double x = threshold(p);
    return 2.0 * gauss_Q(unit_ball_volume(p.n()) * p.lambda() * std::sqrt(0.5 * std::numbers::pi / x));
}

std::complex<double> J(std::complex<double> s, double u) {
    if (!(u > 0)) throw ParamError("u must be positive");
    const std::complex<double> sq_pis = std::sqrt(std::numbers::pi * s);
    if (std::isinf(u)) return sq_pis;
    const std::complex<double> su = s * u;
    if (std::abs(su) < 1.0) {
        std::complex<double> term = 1.0, sum = 0.0;
        for (int k = 1; k < 40; ++k) {
            term *= -su / double(k);
            const std::complex<double> add = -term / (2.0 * k - 1.0);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        return sum / std::sqrt(u);
    }
    return sq_pis * (1.0 - 2.0 * gauss_Q(std::sqrt(2.0 * su))) - (1.0 - std::exp(-su)) / std::sqrt(u);
}

std::complex<double> lt_nofade_given_void(const ModelParams& p, double r_O, std::complex<double> s) {
    check_half(p);
    if (!(r_O >= 0)) throw ParamError("r_O must be nonnegative");
    const double u = r_O > 0 ? std::pow(r_O, -p.alpha()) : std::numeric_limits<double>::infinity();
    return std::exp(-p.lambda() * unit_ball_volume(p.n()) * J(s, u));
}

NofadeValue posterior_nofade(const ModelParams& p, double r_O, const IltConfig& cfg) {
    check_half(p);
    if (!(std::isfinite(r_O) && r_O > 0)) throw ParamError("r_O must be positive and finite");
    const double x = threshold(p);
    const auto res = invert_laplace([&](std::complex<double> s) { return lt_nofade_given_void(p, r_O, s) / s; }, x, cfg);
    return {std::clamp(res.value, 0.0, 1.0), res.value, res.error_estimate, res.converged};
}

NofadeValue rho_nofade(const ModelParams& p, double r_O, const IltConfig& cfg) {
    const auto post = posterior_nofade(p, r_O, cfg);
    const double pH = levy_prior(p);
    const double pD = evidence_success(p, r_O);
    const double w = std::sqrt(pH * pD / ((1.0 - pH) * -std::expm1(-p.lambda() * unit_ball_volume(p.n()) *
                                                                  std::pow(r_O, p.n()))));
    const double raw = (post.raw / pH - 1.0) * w;
    return {std::clamp(raw, -1.0, 1.0), raw, post.error_estimate * w / pH, post.converged};
}

NofadeTypeErrors type_errors_nofade(const ModelParams& p, double r_O, const IltConfig& cfg) {
    const auto post = posterior_nofade(p, r_O, cfg);
    const double pH = levy_prior(p);
    const double pD = evidence_success(p, r_O);
    NofadeTypeErrors e{};
    e.p_I = std::clamp((1.0 - post.value) * pD / (1.0 - pH), 0.0, 1.0);
    e.p_II = std::clamp(1.0 - post.value * pD / pH, 0.0, 1.0);
    e.error_estimate = post.error_estimate * pD * std::max(1.0 / (1.0 - pH), 1.0 / pH);
    e.converged = post.converged;
    return e;
}

}  // namespace ppi
