#pragma once

// Default time window, step and input pulse for a propagation run.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "ddi_kernel.hpp"
#include "medium.hpp"
#include "params.hpp"
#include "spectral.hpp"

namespace deit {

/// Largest |V| between grid nodes of neighbouring clouds (and of one cloud
/// when the collinear term survives).
inline double max_coupling(const ScenarioParams& p, const DdiKernel& kernel, KernelShape shape, double dz,
                           std::size_t nodes)
{
    if (p.cloud_count < 2)
        return 0.0;
    const bool intra = shape == KernelShape::actual && !kernel.intra_suppressed();
    double v = 0.0;
    for (std::size_t d = 0; d < nodes; ++d) {
        const double off = dz * static_cast<double>(d);
        v = std::max(v, std::abs(kernel.evaluate(shape, off, 0.0, false)));
        if (intra && d > 0)
            v = std::max(v, std::abs(kernel.evaluate(shape, off, 0.0, true)));
    }
    return v;
}

/// Upper estimate of the fastest rate of the amplitude equations.
inline double rate_estimate(const ScenarioParams& p, const DdiKernel& kernel, KernelShape shape, double dz,
                            std::size_t nodes)
{
    const double vmax = max_coupling(p, kernel, shape, dz, nodes);
    double wmax = 0.0;
    for (double w : p.spinwave_weights)
        wmax = std::max(wmax, w);
    double r = 0.0;
    for (std::size_t mu = 0; mu < p.clouds(); ++mu) {
        const double dp = std::abs(complex_probe_detuning(p, mu).value);
        const double dc = std::abs(p.delta_p[mu] + p.delta_c[mu]);
        r = std::max(r, std::max(dp, dc) + p.omega_c[mu] + vmax +
                            p.kappa[mu] * p.rho * wmax * p.length_L * p.length_L);
    }
    return r;
}

/// Courant-like default: dt * rate = 0.3.
inline double default_dt(const ScenarioParams& p, const DdiKernel& kernel, KernelShape shape, int n_z)
{
    return 0.3 / rate_estimate(p, kernel, shape, p.length_L / n_z, static_cast<std::size_t>(n_z) + 1);
}

struct PulseTiming {
    double center = 0.0;
    double width = 0.0; // amplitude exp(-(t - center)^2 / (2 width^2))
    double t_end = 0.0;
};

/// Bandwidth 1/width = 0.1 x the narrowest spectral feature, i.e. the
/// smaller of the EIT window Omega_c^2 / (gamma |Delta_p|) and the
/// interaction-shifted line width Im Delta_s(0). The window covers the
/// pulse, its slowest square-well group delay and the same again as margin.
inline PulseTiming default_pulse_timing(const ScenarioParams& p)
{
    const cplx dp = complex_probe_detuning(p, 0).value;
    const double oc = p.omega_c[0];
    const double window = oc * oc / (p.gamma * std::abs(dp));
    const double line = std::abs(delta_s(0.0, p, 0).imag());
    double feature = window;
    if (line > 0.0)
        feature = std::min(feature, line);
    PulseTiming t;
    t.width = 1.0 / (0.1 * feature);
    t.center = 5.0 * t.width;
    double delay = 0.0;
    if (p.cloud_count == 2) {
        const auto c = normal_mode_coeffs(p);
        delay = std::max({0.0, c.inv_v_plus.real(), c.inv_v_minus.real()}) * p.length_L;
    } else {
        const cplx pre = p.kappa[0] * oc * oc / (dp * dp);
        const cplx ds = delta_s(0.0, p, 0);
        delay = std::max(0.0, (pre / (ds * ds)).real()) * p.rho * p.length_L * p.length_L;
    }
    t.t_end = 2.0 * t.center + 2.0 * delay;
    return t;
}

} // namespace deit
