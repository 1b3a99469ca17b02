#include "ppi/correlation.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "ppi/specfn.hpp"
#include "roots.hpp"

namespace ppi {

namespace {

// rho depends on the scenario only through A, lambda c_n sigma^delta and delta
struct Shape {
    double A;
    double scale;
    double delta;

    double B(double chi) const { return scale * std::pow(chi, delta); }
    double g1(double chi) const { return scale * int_G(chi, delta); }

    double rho(double chi) const {
        const double b = B(chi);
        return std::expm1(g1(chi)) / std::sqrt(std::expm1(A)) * std::exp(-0.5 * b) / std::sqrt(-std::expm1(-b));
    }

    double log_rho(double chi) const {
        const double b = B(chi);
        return std::log(std::expm1(g1(chi))) - 0.5 * std::log(std::expm1(A)) - 0.5 * b -
               0.5 * std::log(-std::expm1(-b));
    }

    // e^-B times the stationarity residual; positive where rho increases
    double psi(double chi) const {
        return (1.0 + chi) * std::expm1(-g1(chi)) - 2.0 * std::expm1(-B(chi));
    }

    double residual(double chi) const {
        const double b = B(chi);
        const double c = b - g1(chi);
        return (1.0 - chi) * std::exp(b) + (1.0 + chi) * std::exp(c) - 2.0;
    }
};

Shape shape_of(const ModelParams& p) {
    const auto d = derive(p);
    const double scale = interference_scale(p, d);
    return {scale * d.kappa_delta + d.sigma * p.eta(), scale, d.delta};
}

ChiStar maximize(const Shape& s) {
    if (!(s.A > 0) || !(s.scale > 0)) throw std::domain_error("degenerate scenario for correlation");

    // chi_hat solves g1 = log((1+chi)/(chi-1)) on chi > 1
    auto h = [&](double chi) { return s.g1(chi) - std::log1p(2.0 / (chi - 1.0)); };
    double lo = 1.0 + 1e-12;
    double hi = 2.0;
    std::tie(lo, hi) = detail::expand_upward(h, lo, hi);
    const double chi_hat = detail::solve_bracketed(h, lo, hi);

    auto psi = [&](double chi) { return s.psi(chi); };
    const double p1 = psi(1.0);
    const double ph = psi(chi_hat);
    if (!(p1 > 0 && ph < 0)) throw std::runtime_error("stationary point not bracketed in [1, chi_hat]");

    ChiStar best{};
    best.chi = detail::solve_bracketed(psi, 1.0, chi_hat, p1, ph);
    best.rho = s.rho(best.chi);
    best.chi_hat = chi_hat;
    best.stationary_points = 0;

    // look for further local maxima on a coarse log grid
    constexpr int kScan = 240;
    const double lg0 = std::log(1.0), lg1 = std::log(1e12);
    double xa = 1.0, fa = p1;
    for (int i = 1; i <= kScan; ++i) {
        const double xb = std::exp(lg0 + (lg1 - lg0) * i / kScan);
        const double fb = psi(xb);
        if (fa > 0 && fb <= 0) {
            ++best.stationary_points;
            const double x = detail::solve_bracketed(psi, xa, xb, fa, fb);
            const double r = s.rho(x);
            if (r > best.rho) {
                best.chi = x;
                best.rho = r;
            }
        }
        xa = xb;
        fa = fb;
    }
    if (best.stationary_points == 0) best.stationary_points = 1;
    best.residual = s.residual(best.chi);
    return best;
}

}  // namespace

double rho(const ModelParams& p, double chi) {
    if (!(chi > 0)) throw ParamError("chi must be positive");
    return shape_of(p).rho(chi);
}

double log_rho(const ModelParams& p, double chi) {
    if (!(chi > 0)) throw ParamError("chi must be positive");
    return shape_of(p).log_rho(chi);
}

double corr_f1(const ModelParams& p, double chi) {
    return (1.0 - chi) * std::exp(shape_of(p).B(chi));
}

double corr_f2(const ModelParams& p, double chi) {
    const auto s = shape_of(p);
    return 2.0 - (1.0 + chi) * std::exp(s.B(chi) - s.g1(chi));
}

ChiStar chi_star(const ModelParams& p) { return maximize(shape_of(p)); }

ChiStar chi_star_for_scale(double scale, double delta) {
    return maximize({scale * kappa(delta), scale, delta});
}

double chi_star_limit(double delta) {
    // with G = chi^delta - I the condition reads (1+chi) G = 2 chi^delta
    auto h = [delta](double chi) { return (1.0 + chi) * int_G(chi, delta) - 2.0 * std::pow(chi, delta); };
    auto [lo, hi] = detail::expand_upward(h, 1.0, 2.0);
    return detail::solve_bracketed(h, lo, hi);
}

CorrelationCurve correlation_curve(const ModelParams& p, const std::vector<double>& chi_grid) {
    const auto s = shape_of(p);
    CorrelationCurve c;
    c.chi_grid = chi_grid;
    c.rho_values.reserve(chi_grid.size());
    for (double chi : chi_grid) {
        if (!(chi > 0)) throw ParamError("chi must be positive");
        c.rho_values.push_back(s.rho(chi));
    }
    return c;
}

}  // namespace ppi
