#pragma once

#include <complex>
#include <functional>
#include <string>

namespace ppi {

enum class IltMethod { euler, talbot };

std::string to_string(IltMethod m);
IltMethod ilt_method_from_string(const std::string& s);

struct IltConfig {
    IltMethod method = IltMethod::euler;
    int terms = 22;                  // Euler: M (2M+1 nodes); Talbot: M nodes
    double precision_target = 1e-7;  // absolute

    void validate() const;
};

struct IltResult {
    double value;
    double error_estimate;  // |f(terms) - f(terms - 4)|
    bool converged;
    int terms;
};

using LaplaceFn = std::function<std::complex<double>(std::complex<double>)>;

// f(t) from its Laplace transform F, t > 0
IltResult invert_laplace(const LaplaceFn& F, double t, const IltConfig& cfg = {});

}  // namespace ppi
