#include "ppi/risk.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppi/single_obs.hpp"
#include "ppi/specfn.hpp"
#include "roots.hpp"

namespace ppi {

void CostMatrix::validate() const {
    for (double v : {c00, c01, c10, c11})
        if (!(std::isfinite(v) && v >= 0)) throw ParamError("costs must be finite and nonnegative");
}

namespace {

void check_radius(double r_O) {
    if (!(std::isfinite(r_O) && r_O > 0)) throw ParamError("r_O must be positive and finite");
}

double cost(const CostMatrix& c, int decide, int truth) {
    if (decide == 0) return truth == 0 ? c.c00 : c.c01;
    return truth == 0 ? c.c10 : c.c11;
}

// Brackets a decreasing function around a starting radius
template <class F>
std::pair<double, double> bracket_decreasing(F f, double start) {
    double lo = start, hi = start;
    for (int i = 0; f(lo) <= 0; ++i) {
        if (i > 200) throw std::runtime_error("lower bracket not found");
        lo *= 0.5;
    }
    for (int i = 0; f(hi) >= 0; ++i) {
        if (i > 200) throw std::runtime_error("upper bracket not found");
        hi *= 2.0;
    }
    return {lo, hi};
}

}  // namespace

JointHD joint_hd(const ModelParams& p, double r_O) {
    if (!(r_O >= 0)) throw ParamError("r_O must be nonnegative");
    const auto t = abc_terms(p, r_O);
    const double lpost = log_posterior_d1(p, r_O);
    JointHD j{};
    j.h1d1 = std::exp(-t.B + lpost);
    j.h0d1 = std::exp(-t.B) * -std::expm1(lpost);
    j.h1d0 = std::exp(-t.A) * -std::expm1(-t.C);
    j.h0d0 = t.B < 1.0 ? -std::expm1(-t.B) - j.h1d0 : -std::expm1(-t.A) - j.h0d1;
    if (j.h0d0 < 0) j.h0d0 = 0;
    return j;
}

double bayes_risk(const ModelParams& p, const CostMatrix& c, double r_O) {
    return bayes_risk(p, c, r_O, SingleObsRule::identity());
}

double bayes_risk(const ModelParams& p, const CostMatrix& c, double r_O, SingleObsRule rule) {
    check_radius(r_O);
    c.validate();
    const auto j = joint_hd(p, r_O);
    return cost(c, rule(1), 1) * j.h1d1 + cost(c, rule(1), 0) * j.h0d1 + cost(c, rule(0), 1) * j.h1d0 +
           cost(c, rule(0), 0) * j.h0d0;
}

double risk_fL(const ModelParams& p, const CostMatrix& c, double r_O) {
    const double chi = chi_of_radius(derive(p), r_O);
    return std::log1p(1.0 / chi) - std::log1p((c.c01 - c.c11) / (c.c10 - c.c00));
}

double risk_fR(const ModelParams& p, double r_O) { return log_posterior_d1(p, r_O); }

OptimalRadius optimal_radius(const ModelParams& p, const CostMatrix& c) {
    c.validate();
    if (!c.optimizable()) throw ParamError("optimization requires c10 > c00 and c01 > c11");
    const auto d = derive(p);
    const double gamma = c.c10 - c.c00;
    const double nu = c.c01 - c.c11;
    const double A = interference_scale(p, d) * d.kappa_delta + d.sigma * p.eta();

    OptimalRadius out{};
    if (!(std::log1p(nu / gamma) > d.sigma * p.eta())) {
        out.interior = false;
        out.r_O = std::numeric_limits<double>::infinity();
        out.chi = out.r_O;
        out.risk = c.c00 + (c.c01 - c.c00) * std::exp(-A);
        out.residual = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    auto F = [&](double r) { return risk_fL(p, c, r) - risk_fR(p, r); };
    auto [lo, hi] = bracket_decreasing(F, p.r_T());
    const double r = detail::solve_bracketed(F, lo, hi);
    const double chi = chi_of_radius(d, r);
    const auto t = abc_terms(p, r);
    out.interior = true;
    out.r_O = r;
    out.chi = chi;
    out.risk = c.c00 + (c.c01 - c.c00) * std::exp(-A) - gamma / chi * std::exp(-t.B);
    out.residual = (1.0 + 1.0 / chi) / (1.0 + nu / gamma) - std::exp(log_posterior_d1(p, r));
    return out;
}

Sensitivities sensitivities(const ModelParams& p, const CostMatrix& c) {
    if (p.eta() != 0) throw ParamError("sensitivities are defined for eta = 0 only");
    const auto opt = optimal_radius(p, c);
    if (!opt.interior) throw std::runtime_error("no interior optimum");
    const auto d = derive(p);
    const double r = opt.r_O;
    const double chi = opt.chi;
    const double sd = std::pow(d.sigma, d.delta);
    const double T = int_T(chi, d.delta);
    const double denom = d.alpha * (1.0 + d.c_n * d.delta * p.lambda() * std::pow(r, p.n()));
    Sensitivities s{};
    s.d_lambda = d.c_n * sd * r * (1.0 + chi) * T / denom;
    // (1+chi)(kappa+I) - chi^(delta+1) = (1+chi) T + chi^delta
    const double bracket = (1.0 + chi) * T + std::pow(chi, d.delta);
    s.d_sigma = r * (1.0 + p.lambda() * d.c_n * d.delta * sd * bracket) / (d.sigma * denom);
    return s;
}

TypeErrors type_errors(const ModelParams& p, double r_O, SingleObsRule rule) {
    check_radius(r_O);
    const auto j = joint_hd(p, r_O);
    const double A = abc_terms(p, r_O).A;
    const double ph0 = -std::expm1(-A);
    const double ph1 = std::exp(-A);
    TypeErrors e{};
    e.p_I = ((rule(1) == 1 ? j.h0d1 : 0.0) + (rule(0) == 1 ? j.h0d0 : 0.0)) / ph0;
    e.p_II = ((rule(1) == 0 ? j.h1d1 : 0.0) + (rule(0) == 0 ? j.h1d0 : 0.0)) / ph1;
    return e;
}

OperatingPoints operating_points(const ModelParams& p) {
    const auto d = derive(p);
    OperatingPoints op{};
    if (1.0 / d.sigma > p.eta()) op.r_DI = std::pow(1.0 / d.sigma - p.eta(), -1.0 / p.alpha());
    op.r_MM = std::pow(d.kappa_delta * std::pow(d.sigma, d.delta) + d.sigma * p.eta() / (p.lambda() * d.c_n),
                       1.0 / p.n());
    auto F = [&](double r) {
        const auto e = type_errors(p, r);
        return e.p_I - e.p_II;
    };
    auto [lo, hi] = bracket_decreasing(F, p.r_T());
    op.r_EE = detail::solve_bracketed(F, lo, hi);
    return op;
}

std::vector<RocPoint> roc_curve(const ModelParams& p, const std::vector<double>& r_O_grid, SingleObsRule rule,
                                const CostMatrix& c) {
    std::vector<RocPoint> out;
    out.reserve(r_O_grid.size());
    double prev = 0.0;
    for (double r : r_O_grid) {
        if (!(r > prev)) throw ParamError("r_O grid must be positive and strictly increasing");
        prev = r;
        const auto e = type_errors(p, r, rule);
        out.push_back({r, e.p_I, e.p_II, bayes_risk(p, c, r, rule)});
    }
    return out;
}

}  // namespace ppi
