#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "medium.hpp"
#include "quadrature.hpp"

namespace deit {

struct ModePair {
    cplx plus;
    cplx minus;
};

struct CloudPair {
    cplx a;
    cplx b;
};

/// Omega_+- = Omega_A +- e^{-i phi_AB} Omega_B.
inline ModePair normal_modes(cplx omega_a, cplx omega_b, double phi_ab)
{
    const cplx rb = std::polar(1.0, -phi_ab) * omega_b;
    return {omega_a + rb, omega_a - rb};
}

inline CloudPair inverse_normal_modes(cplx plus, cplx minus, double phi_ab)
{
    return {0.5 * (plus + minus), std::polar(0.5, phi_ab) * (plus - minus)};
}

/// Probability of finding the photon in each normal mode along z.
struct PmProfile {
    std::vector<double> z;
    std::vector<double> plus;
    std::vector<double> minus;
};

/// P_+-(z) = int |Omega_+-(z,t)|^2 dt / int (|Omega_+^(0)|^2 + |Omega_-^(0)|^2) dt,
/// trapezoid in time over the recorded samples.
inline PmProfile prob_pm(const ProbeHistory& h, double phi_ab)
{
    if (h.clouds() != 2)
        throw ConfigError("prob_pm needs a two-cloud history");
    if (h.samples() < 2)
        throw ConfigError("prob_pm: history has fewer than two time samples");
    const std::size_t nt = h.samples();
    PmProfile out;
    out.z.resize(h.nodes());
    out.plus.resize(h.nodes());
    out.minus.resize(h.nodes());
    std::vector<double> ip(nt), im(nt);
    auto integrate = [&](std::size_t j, double& p, double& m) {
        for (std::size_t i = 0; i < nt; ++i) {
            const auto md = normal_modes(h.at(0, j, i), h.at(1, j, i), phi_ab);
            ip[i] = std::norm(md.plus);
            im[i] = std::norm(md.minus);
        }
        p = trapezoid<double>(ip, h.sample_dt());
        m = trapezoid<double>(im, h.sample_dt());
    };
    double p0 = 0.0, m0 = 0.0;
    integrate(0, p0, m0);
    const double denom = p0 + m0;
    for (std::size_t j = 0; j < h.nodes(); ++j) {
        double p = 0.0, m = 0.0;
        integrate(j, p, m);
        out.z[j] = h.dz() * static_cast<double>(j);
        out.plus[j] = denom > 0.0 ? p / denom : 0.0;
        out.minus[j] = denom > 0.0 ? m / denom : 0.0;
    }
    return out;
}

} // namespace deit
