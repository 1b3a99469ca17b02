#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace ppi::detail {

// Root of f in [a, b] given a sign change, relative tolerance near 1e-15.
template <class F>
double solve_bracketed(F f, double a, double b, double fa, double fb) {
    if (fa == 0) return a;
    if (fb == 0) return b;
    if ((fa > 0) == (fb > 0)) throw std::runtime_error("root not bracketed");
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
}

template <class F>
double solve_bracketed(F f, double a, double b) {
    return solve_bracketed(f, a, b, f(a), f(b));
}

// Grows hi geometrically until f changes sign relative to f(lo).
template <class F>
std::pair<double, double> expand_upward(F f, double lo, double hi, double factor = 2.0, int max_steps = 200) {
    const bool s0 = f(lo) > 0;
    for (int i = 0; i < max_steps; ++i) {
        if ((f(hi) > 0) != s0) return {lo, hi};
        lo = hi;
        hi *= factor;
    }
    throw std::runtime_error("no sign change found while expanding bracket");
}

}  // namespace ppi::detail
