#pragma once

// Frequency-domain description of the probe: Delta_s(omega), local and
// non-local susceptibilities, square-well normal modes and the integrated
// optical depth of the actual kernel.

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "ddi_kernel.hpp"
#include "errors.hpp"
#include "medium.hpp"
#include "normal_modes.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace deit {

/// Delta_s(omega) = delta_p + delta_c - omega - Omega_c^2 / Delta_p.
inline cplx delta_s(double omega, const ScenarioParams& p, std::size_t cloud = 0)
{
    const cplx dp = complex_probe_detuning(p, cloud).value;
    const double oc = p.omega_c[cloud];
    return p.delta_p[cloud] + p.delta_c[cloud] - omega - oc * oc / dp;
}

/// phi_{mu nu}(z, z') = -(k_c - k_s)(z - z') - (phi_c^mu - phi_c^nu).
inline double phase_matching(double z, double zp, const ScenarioParams& p, std::size_t mu = 0,
                             std::size_t nu = 1)
{
    return -(p.k_c - p.k_s) * (z - zp) - (p.phi_c.at(mu) - p.phi_c.at(nu));
}

/// Susceptibilities on the node grid of a spinwave profile.
///
/// Only nearest-neighbour cloud pairs (and the same cloud when the collinear
/// term survives) carry an exchange kernel; the diagonal z = z' of the
/// intra-cloud kernel is dropped, as in the time-domain solver.
class SpectralModel {
public:
    SpectralModel(const ScenarioParams& p, const DdiKernel& kernel, const SpinwaveProfile& spinwave,
                  KernelShape shape = KernelShape::actual)
        : p_(p), spin_(std::make_shared<const SpinwaveProfile>(spinwave)), n_(spinwave.amp.front().size())
    {
        if (spinwave.clouds() != p.clouds())
            throw ConfigError("spinwave profile does not match cloud_count");
        w_ = trapezoid_weights(n_, spinwave.dz);
        const bool intra = shape == KernelShape::actual && !kernel.intra_suppressed();
        auto build = [&](bool same) {
            auto m = std::make_shared<std::vector<double>>(n_ * n_, 0.0);
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k)
                    if (!(same && j == k))
                        (*m)[j * n_ + k] = kernel.evaluate(shape, z(j), z(k), same);
            return std::shared_ptr<const std::vector<double>>(std::move(m));
        };
        if (p.clouds() >= 2)
            inter_ = build(false);
        if (intra)
            intra_ = build(true);
    }

    const ScenarioParams& params() const { return p_; }
    std::size_t nodes() const { return n_; }
    double z(std::size_t j) const { return spin_->dz * static_cast<double>(j); }
    const std::vector<double>& weights() const { return w_; }

    /// Same kernel and medium at another probe detuning (all clouds).
    SpectralModel with_probe_detuning(double delta_p) const
    {
        SpectralModel m = *this;
        for (double& d : m.p_.delta_p)
            d = delta_p;
        return m;
    }

    /// V^{mu nu}(z_j, z'_k), zero for pairs without an exchange kernel.
    double coupling(std::size_t mu, std::size_t nu, std::size_t j, std::size_t k) const
    {
        const std::size_t d = mu > nu ? mu - nu : nu - mu;
        if (d == 1)
            return (*inter_)[j * n_ + k];
        if (d == 0 && intra_)
            return (*intra_)[j * n_ + k];
        return 0.0;
    }

    /// chi_L^mu(z_j, omega).
    cplx chi_local(std::size_t mu, std::size_t j, double omega) const
    {
        const cplx dp = complex_probe_detuning(p_, mu).value;
        const cplx ds = delta_s(omega, p_, mu);
        const double oc = p_.omega_c[mu];
        const cplx pre = p_.kappa[mu] * oc * oc / (dp * dp);
        const cplx ds2 = ds * ds;
        cplx sum{};
        for (std::size_t nu = 0; nu < p_.clouds(); ++nu) {
            const auto& a = spin_->amp[nu];
            for (std::size_t k = 0; k < n_; ++k) {
                const double v = coupling(mu, nu, j, k);
                sum += w_[k] * std::norm(a[k]) * ds / (ds2 - v * v);
            }
        }
        cplx chi = -p_.kappa[mu] / dp - pre * sum;
        if (!p_.retarded_frame)
            chi -= omega / p_.c_light;
        return chi;
    }

    /// chi_N^{mu nu}(z_j, z'_k, omega).
    cplx chi_nonlocal(std::size_t mu, std::size_t nu, std::size_t j, std::size_t k, double omega) const
    {
        const double v = coupling(mu, nu, j, k);
        if (v == 0.0)
            return {};
        const cplx dp = complex_probe_detuning(p_, mu).value;
        const cplx ds = delta_s(omega, p_, mu);
        const double oc = p_.omega_c[mu];
        const cplx pre = p_.kappa[mu] * oc * oc / (dp * dp);
        const double mag = std::abs(spin_->amp[nu][k]) * std::abs(spin_->amp[mu][j]);
        const cplx phase = std::polar(1.0, phase_matching(z(j), z(k), p_, mu, nu));
        return -pre * phase * mag * v / (ds * ds - v * v);
    }

    /// int_0^L chi_N^{mu nu}(z_j, z', omega) dz'.
    cplx chi_nonlocal_integral(std::size_t mu, std::size_t nu, std::size_t j, double omega) const
    {
        cplx s{};
        for (std::size_t k = 0; k < n_; ++k)
            s += w_[k] * chi_nonlocal(mu, nu, j, k, omega);
        return s;
    }

private:
    ScenarioParams p_;
    std::shared_ptr<const SpinwaveProfile> spin_;
    std::size_t n_;
    std::vector<double> w_;
    std::shared_ptr<const std::vector<double>> inter_;
    std::shared_ptr<const std::vector<double>> intra_;
};

struct NormalModeCoeffs {
    cplx eta_plus;
    cplx eta_minus;
    cplx inv_v_plus;  // 1 / v_+
    cplx inv_v_minus; // 1 / v_-

    cplx v_plus() const { return 1.0 / inv_v_plus; }
    cplx v_minus() const { return 1.0 / inv_v_minus; }
};

/// Square-well coefficients for two equal clouds, each holding half of the
/// excitation (weights z_d rho inside the well, 1 - z_d rho outside).
inline NormalModeCoeffs normal_mode_coeffs(const ScenarioParams& p, double v0)
{
    const cplx dp = complex_probe_detuning(p, 0).value;
    const cplx ds = delta_s(0.0, p, 0);
    const double oc = p.omega_c[0];
    const cplx pre = p.kappa[0] * oc * oc / (dp * dp);
    const double in = fwhm_halfwidth(p.separation_ell) * p.rho;
    const double out = p.rho * p.length_L - in;
    NormalModeCoeffs c;
    c.eta_plus = -p.kappa[0] / dp - pre * (in / (ds - v0) + out / ds);
    c.eta_minus = -p.kappa[0] / dp - pre * (in / (ds + v0) + out / ds);
    c.inv_v_plus = pre * (in / ((ds - v0) * (ds - v0)) + out / (ds * ds));
    c.inv_v_minus = pre * (in / ((ds + v0) * (ds + v0)) + out / (ds * ds));
    if (!p.retarded_frame) {
        c.inv_v_plus += 1.0 / p.c_light;
        c.inv_v_minus += 1.0 / p.c_light;
    }
    return c;
}

inline NormalModeCoeffs normal_mode_coeffs(const ScenarioParams& p)
{
    return normal_mode_coeffs(p, p.v0());
}

/// Omega_{A,B}(z, omega) from the input spectra via the two normal modes,
/// each advancing as exp(i (eta - omega / v) z).
inline CloudPair analytic_two_cloud_field(cplx omega_a0, cplx omega_b0, double z, double omega,
                                          const NormalModeCoeffs& c, double phi_ab)
{
    const ModePair m0 = normal_modes(omega_a0, omega_b0, phi_ab);
    const cplx gp = std::exp(I * (c.eta_plus - omega * c.inv_v_plus) * z);
    const cplx gm = std::exp(I * (c.eta_minus - omega * c.inv_v_minus) * z);
    return inverse_normal_modes(m0.plus * gp, m0.minus * gm, phi_ab);
}

/// Position-resolved optical depth of the symmetric and antisymmetric modes.
struct OpticalDepth {
    std::vector<double> z;
    std::vector<cplx> x_plus;
    std::vector<cplx> x_minus;
    cplx total_plus;
    cplx total_minus;
};

/// X_+-(z) = chi_L^A(z, 0) +- e^{i phi_AB} int_0^L chi_N^{AB}(z, z', 0) dz'.
/// The e^{i phi_AB} factor removes the control-phase carried by chi_N so
/// that X_+- act on Omega_+- = Omega_A +- e^{-i phi_AB} Omega_B.
inline OpticalDepth integrated_optical_depth(const SpectralModel& m, int threads = 1)
{
    if (m.params().clouds() != 2)
        throw ConfigError("integrated_optical_depth needs two clouds");
    const std::size_t n = m.nodes();
    const cplx strip = std::polar(1.0, m.params().phi_ab());
    OpticalDepth d;
    d.z.resize(n);
    d.x_plus.resize(n);
    d.x_minus.resize(n);
    parallel_for(n, threads, [&](std::size_t j) {
        const cplx local = m.chi_local(0, j, 0.0);
        const cplx nonlocal = strip * m.chi_nonlocal_integral(0, 1, j, 0.0);
        d.z[j] = m.z(j);
        d.x_plus[j] = local + nonlocal;
        d.x_minus[j] = local - nonlocal;
    });
    const double h = n > 1 ? d.z[1] - d.z[0] : 0.0;
    d.total_plus = trapezoid<cplx>(d.x_plus, h);
    d.total_minus = trapezoid<cplx>(d.x_minus, h);
    return d;
}

/// P_+-(z) = P_+-(0) exp(-2 Im int_0^z X_+- dz').
inline PmProfile analytic_prob_pm(const OpticalDepth& d, double p_plus0, double p_minus0)
{
    const double h = d.z.size() > 1 ? d.z[1] - d.z[0] : 0.0;
    const auto cp = cumulative_trapezoid<cplx>(d.x_plus, h);
    const auto cm = cumulative_trapezoid<cplx>(d.x_minus, h);
    PmProfile out;
    out.z = d.z;
    for (std::size_t j = 0; j < d.z.size(); ++j) {
        out.plus.push_back(p_plus0 * std::exp(-2.0 * cp[j].imag()));
        out.minus.push_back(p_minus0 * std::exp(-2.0 * cm[j].imag()));
    }
    return out;
}

/// Square-well counterpart: P_+-(z) = P_+-(0) exp(-2 Im eta_+- z).
inline PmProfile square_well_prob_pm(const NormalModeCoeffs& c, const std::vector<double>& z,
                                     double p_plus0, double p_minus0)
{
    PmProfile out;
    out.z = z;
    for (double x : z) {
        out.plus.push_back(p_plus0 * std::exp(-2.0 * c.eta_plus.imag() * x));
        out.minus.push_back(p_minus0 * std::exp(-2.0 * c.eta_minus.imag() * x));
    }
    return out;
}

struct ModeWeights {
    double plus = 0.0;
    double minus = 0.0;
};

/// Mode populations at z = 0 for cloud input (a, b): |Omega_+-|^2 / sum.
inline ModeWeights input_mode_weights(cplx a, cplx b, double phi_ab)
{
    const ModePair m = normal_modes(a, b, phi_ab);
    const double s = std::norm(m.plus) + std::norm(m.minus);
    if (!(s > 0.0))
        throw ConfigError("input amplitudes are all zero");
    return {std::norm(m.plus) / s, std::norm(m.minus) / s};
}

struct SpectrumPoint {
    double delta_p = 0.0;
    cplx eta_plus;
    cplx eta_minus;
    cplx eta_free; // V0 = 0
    cplx x_plus_total;
    cplx x_minus_total;
};

/// eta_+- L and int X_+- dz over a probe-detuning sweep. The optical depth
/// uses the given kernel model; pass a model built with fewer nodes to trade
/// accuracy for speed. Rows keep the order of `detunings`.
inline std::vector<SpectrumPoint> spectrum_sweep(const SpectralModel& model, const std::vector<double>& detunings,
                                                 int threads = 1, bool with_optical_depth = true)
{
    std::vector<SpectrumPoint> rows(detunings.size());
    const double len = model.params().length_L;
    parallel_for(detunings.size(), threads, [&](std::size_t i) {
        const SpectralModel m = model.with_probe_detuning(detunings[i]);
        const auto c = normal_mode_coeffs(m.params());
        const auto f = normal_mode_coeffs(m.params(), 0.0);
        SpectrumPoint& r = rows[i];
        r.delta_p = detunings[i];
        r.eta_plus = c.eta_plus * len;
        r.eta_minus = c.eta_minus * len;
        r.eta_free = f.eta_plus * len;
        if (with_optical_depth) {
            const auto d = integrated_optical_depth(m);
            r.x_plus_total = d.total_plus;
            r.x_minus_total = d.total_minus;
        }
    });
    return rows;
}

} // namespace deit
