#include "ppi/ilt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ppi {

std::string to_string(IltMethod m) { return m == IltMethod::euler ? "euler" : "talbot"; }

IltMethod ilt_method_from_string(const std::string& s) {
    if (s == "euler") return IltMethod::euler;
    if (s == "talbot") return IltMethod::talbot;
    throw std::invalid_argument("unknown inversion method: " + s);
}

void IltConfig::validate() const {
    if (terms < 8) throw std::invalid_argument("ILT needs at least 8 terms");
    if (!(precision_target > 0)) throw std::invalid_argument("ILT precision target must be positive");
}

namespace {

// Euler summation on the Bromwich line (unified Abate-Whitt form)
double euler(const LaplaceFn& F, double t, int M) {
    std::vector<double> xi(2 * M + 1);
    xi[0] = 0.5;
    for (int k = 1; k <= M; ++k) xi[k] = 1.0;
    const double pm = std::ldexp(1.0, -M);
    xi[2 * M] = pm;
    double binom = 1.0;  // C(M, k) built from k = 0 upwards
    std::vector<double> c(M + 1);
    for (int k = 0; k <= M; ++k) {
        c[k] = binom;
        binom = binom * (M - k) / (k + 1);
    }
    for (int k = 1; k < M; ++k) xi[2 * M - k] = xi[2 * M - k + 1] + pm * c[k];

    const double a = M * std::log(10.0) / 3.0;
    const double scale = std::pow(10.0, M / 3.0);
    double sum = 0.0;
    for (int k = 0; k <= 2 * M; ++k) {
        const std::complex<double> beta(a, std::numbers::pi * k);
        const double eta = (k % 2 == 0 ? 1.0 : -1.0) * scale * xi[k];
        sum += eta * F(beta / t).real();
    }
    return sum / t;
}

// Fixed Talbot contour
double talbot(const LaplaceFn& F, double t, int M) {
    const double r = 2.0 * M / (5.0 * t);
    double sum = 0.5 * std::exp(r * t) * F(r).real();
    for (int k = 1; k < M; ++k) {
        const double th = k * std::numbers::pi / M;
        const double cot = std::cos(th) / std::sin(th);
        const std::complex<double> s = r * th * std::complex<double>(cot, 1.0);
        const double sig = th + (th * cot - 1.0) * cot;
        sum += (std::exp(t * s) * F(s) * std::complex<double>(1.0, sig)).real();
    }
    return r / M * sum;
}

double run(const LaplaceFn& F, double t, IltMethod m, int terms) {
    return m == IltMethod::euler ? euler(F, t, terms) : talbot(F, t, terms);
}

}  // namespace

IltResult invert_laplace(const LaplaceFn& F, double t, const IltConfig& cfg) {
    cfg.validate();
    if (!(t > 0)) throw std::invalid_argument("ILT evaluation point must be positive");
    IltResult res{};
    res.terms = cfg.terms;
    res.value = run(F, t, cfg.method, cfg.terms);
    const double coarse = run(F, t, cfg.method, cfg.terms - 4);
    res.error_estimate = std::abs(res.value - coarse);
    res.converged = std::isfinite(res.value) && res.error_estimate <= cfg.precision_target;
    return res;
}

}  // namespace ppi
