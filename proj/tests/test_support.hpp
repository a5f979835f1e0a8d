#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include <deit/deit.hpp>

namespace deit::test {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

/// Two clouds with the standard parameter set but a custom separation.
inline ScenarioParams two_clouds(double ell = 0.5, double v0 = 10.0)
{
    json d = preset_document("fig3");
    d["separation_ell"] = ell;
    d["v0"] = v0;
    return load_scenario(d);
}

inline Eigen::MatrixXcd dense(const std::vector<cplx>& m, std::size_t n)
{
    Eigen::MatrixXcd out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(static_cast<long>(i), static_cast<long>(j)) = m[i * n + j];
    return out;
}

} // namespace deit::test
