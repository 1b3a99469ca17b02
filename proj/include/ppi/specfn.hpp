#pragma once

#include <complex>

namespace ppi {

// pi delta / sin(pi delta), delta in (0,1)
double kappa(double delta);

// I(u, delta) = delta * int_0^u t^delta / (1 + t) dt
double int_I(double u, double delta);

// u^delta - I(u, delta), in [0, kappa]
double int_G(double u, double delta);

// kappa - u^delta + I(u, delta) = delta * int_u^inf t^(delta-1) / (1 + t) dt
double int_T(double u, double delta);

// standard normal tail probability
double gauss_Q(double z);

std::complex<double> erfc(std::complex<double> z);
std::complex<double> gauss_Q(std::complex<double> z);

}  // namespace ppi
