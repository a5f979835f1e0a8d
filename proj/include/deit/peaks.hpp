#pragma once

// Peak bookkeeping for absorption spectra.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "params.hpp"
#include "spectral.hpp"

namespace deit {

struct Peak {
    std::size_t index = 0;
    double x = 0.0;      // parabolic-refined location
    double height = 0.0; // sampled maximum
};

/// Strict interior local maxima of y(x), in ascending x.
inline std::vector<Peak> local_maxima(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<Peak> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]))
            continue;
        Peak p{i, x[i], y[i]};
        const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
        if (denom < 0.0) {
            const double shift = 0.5 * (y[i - 1] - y[i + 1]) / denom;
            p.x = x[i] + shift * (x[i + 1] - x[i]);
        }
        out.push_back(p);
    }
    return out;
}

/// Full width at half maximum around sample `peak`, linear interpolation
/// between samples. Returns +inf if the curve never drops to half height
/// on one side.
inline double half_max_width(const std::vector<double>& x, const std::vector<double>& y, std::size_t peak)
{
    const double half = 0.5 * y[peak];
    std::size_t l = peak;
    while (l > 0 && y[l] > half)
        --l;
    std::size_t r = peak;
    while (r + 1 < y.size() && y[r] > half)
        ++r;
    if (y[l] > half || y[r] > half)
        return INFINITY;
    auto cross = [&](std::size_t a, std::size_t b) {
        return x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
    };
    return cross(r - 1, r) - cross(l, l + 1);
}

/// Probe detunings in [lo, hi] where Re Delta_s(0) = target, bracketed on a
/// uniform scan and refined to |dx| <= tol.
inline std::vector<double> delta_s_roots(const ScenarioParams& p, double target, double lo, double hi,
                                         std::size_t scan = 4000, double tol = 1e-10)
{
    auto f = [&](double dp) {
        ScenarioParams q = p;
        for (double& d : q.delta_p)
            d = dp;
        return delta_s(0.0, q, 0).real() - target;
    };
    std::vector<double> roots;
    const auto xs = linspace(lo, hi, scan + 1);
    double fa = f(xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double fb = f(xs[i]);
        if (fa == 0.0) {
            roots.push_back(xs[i - 1]);
        } else if (fa * fb < 0.0) {
            std::uintmax_t iters = 200;
            auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
            const auto [a, b] = boost::math::tools::toms748_solve(f, xs[i - 1], xs[i], fa, fb, stop, iters);
            roots.push_back(0.5 * (a + b));
        }
        fa = fb;
    }
    return roots;
}

/// Locations where the symmetric (+1) or antisymmetric (-1) square-well
/// denominator Delta_s(0) -+ V0 has a vanishing real part.
inline std::vector<double> shifted_peak_detunings(const ScenarioParams& p, int mode, double lo, double hi)
{
    return delta_s_roots(p, mode > 0 ? p.v0() : -p.v0(), lo, hi);
}

} // namespace deit
