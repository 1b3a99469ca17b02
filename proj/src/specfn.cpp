#include "ppi/specfn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ppi {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kLow = 0.5;
constexpr double kHigh = 2.0;

template <class F>
double integrate(F f, double a, double b) {
    return gauss_kronrod<double, 15>::integrate(f, a, b, 10, 1e-14);
}

void check_delta(double delta) {
    if (!(delta > 0 && delta < 1)) throw std::domain_error("delta must lie in (0,1)");
}

// sum_k (-1)^k x^k / (k + c), 0 <= x <= 1/2
double alt_series(double x, double c) {
    double sum = 0.0, xp = 1.0;
    for (int k = 0; k < 80; ++k) {
        const double term = xp / (k + c);
        sum += (k % 2 == 0) ? term : -term;
        if (term < 1e-17 * std::abs(sum)) break;
        xp *= x;
    }
    return sum;
}

// delta * int_a^b t^p / (1+t) dt on the smooth stretch [1/2, 2]
double middle(double a, double b, double delta, double pw) {
    return delta * integrate([pw](double t) { return std::pow(t, pw) / (1.0 + t); }, a, b);
}

double I_small(double u, double delta) { return delta * std::pow(u, 1.0 + delta) * alt_series(u, 1.0 + delta); }

// G(u) = delta * int_0^u t^(delta-1)/(1+t) dt, u <= 1
double head(double u, double delta) {
    if (u <= kLow) return delta * std::pow(u, delta) * alt_series(u, delta);
    return delta * std::pow(kLow, delta) * alt_series(kLow, delta) + middle(kLow, u, delta, delta - 1.0);
}

// T(u) = delta * int_u^inf t^(delta-1)/(1+t) dt, u >= 1
double tail(double u, double delta) {
    if (u >= kHigh) return delta * std::pow(u, delta - 1.0) * alt_series(1.0 / u, 1.0 - delta);
    return delta * std::pow(kHigh, delta - 1.0) * alt_series(1.0 / kHigh, 1.0 - delta) +
           middle(u, kHigh, delta, delta - 1.0);
}

}  // namespace

double kappa(double delta) {
    check_delta(delta);
    return std::numbers::pi * delta / std::sin(std::numbers::pi * delta);
}

double int_I(double u, double delta) {
    check_delta(delta);
    if (!(u >= 0)) throw std::domain_error("u must be nonnegative");
    if (u == 0) return 0.0;
    if (std::isinf(u)) return u;
    if (u <= kLow) return I_small(u, delta);
    if (u <= 1.0) return I_small(kLow, delta) + middle(kLow, u, delta, delta);
    return std::pow(u, delta) - kappa(delta) + tail(u, delta);
}

double int_G(double u, double delta) {
    check_delta(delta);
    if (!(u >= 0)) throw std::domain_error("u must be nonnegative");
    if (u == 0) return 0.0;
    if (std::isinf(u)) return kappa(delta);
    if (u <= 1.0) return head(u, delta);
    return kappa(delta) - tail(u, delta);
}

double int_T(double u, double delta) {
    check_delta(delta);
    if (!(u >= 0)) throw std::domain_error("u must be nonnegative");
    if (std::isinf(u)) return 0.0;
    if (u <= 1.0) return kappa(delta) - head(u, delta);
    return tail(u, delta);
}

double gauss_Q(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

namespace {

constexpr int kFaddeevaN = 40;

struct FaddeevaTable {
    double L;
    std::array<double, kFaddeevaN> a;  // polynomial coefficients, a[m] multiplies Z^m

    FaddeevaTable() {
        constexpr int N = kFaddeevaN;
        constexpr int M = 2 * N;
        constexpr int M2 = 2 * M;
        L = std::sqrt(N / std::sqrt(2.0));
        std::array<double, M2> f{};
        // f[0] = 0, f[j] for theta index k = j - M
        for (int j = 1; j < M2; ++j) {
            const int k = j - M;
            const double theta = k * std::numbers::pi / M;
            const double t = L * std::tan(0.5 * theta);
            f[j] = std::exp(-t * t) * (L * L + t * t);
        }
        std::array<double, M2> g{};
        for (int i = 0; i < M2; ++i) g[i] = f[(i + M) % M2];
        for (int m = 1; m <= N; ++m) {
            double s = 0.0;
            for (int i = 0; i < M2; ++i) s += g[i] * std::cos(2.0 * std::numbers::pi * i * m / M2);
            a[m - 1] = s / M2;
        }
    }
};

const FaddeevaTable& faddeeva_table() {
    static const FaddeevaTable table;
    return table;
}

// w(z) = exp(-z^2) erfc(-iz), valid for Im z >= 0
std::complex<double> faddeeva_upper(std::complex<double> z) {
    const auto& tb = faddeeva_table();
    const std::complex<double> I(0.0, 1.0);
    const std::complex<double> den = tb.L - I * z;
    const std::complex<double> Z = (tb.L + I * z) / den;
    std::complex<double> p = 0.0;
    for (int m = kFaddeevaN - 1; m >= 0; --m) p = p * Z + tb.a[m];
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(std::numbers::pi)) / den;
}

}  // namespace

std::complex<double> erfc(std::complex<double> z) {
    if (z.real() < 0) return 2.0 - erfc(-z);
    const std::complex<double> I(0.0, 1.0);
    return std::exp(-z * z) * faddeeva_upper(I * z);
}

std::complex<double> gauss_Q(std::complex<double> z) { return 0.5 * erfc(z / std::numbers::sqrt2); }

}  // namespace ppi
