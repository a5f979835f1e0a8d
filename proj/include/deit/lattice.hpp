#pragma once

// N parallel clouds with nearest-neighbour exchange at omega = 0:
//
//   d_z W = i X W,  X = tridiag(chi_S, chi_D, chi_S)
//
// X is a symmetric Toeplitz matrix, so its eigensystem is known in closed
// form and has real eigenvectors.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddi_kernel.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"

namespace deit {

struct LatticeChis {
    cplx chi_d;
    cplx chi_s;
};

/// Square-well chi_D and chi_S with rho_N = rho / N. Each cloud overlaps the
/// wells of `neighbours` adjacent clouds (2 in the bulk of a lattice; 1 for a
/// lone pair, where chi_D +- chi_S reduce to eta_+-).
inline LatticeChis lattice_chis(const ScenarioParams& p, int neighbours = 2)
{
    if (p.cloud_count < 2)
        throw ConfigError("lattice_chis needs at least two clouds");
    const cplx dp = complex_probe_detuning(p, 0).value;
    const cplx ds = delta_s(0.0, p, 0);
    const double oc = p.omega_c[0];
    const cplx pre = p.kappa[0] * oc * oc / (dp * dp);
    const double v0 = p.v0();
    const double rho_n = p.rho / static_cast<double>(p.cloud_count);
    const double w = 2.0 * fwhm_halfwidth(p.separation_ell) * rho_n; // one well
    const double wells = neighbours * w;
    const cplx den = ds * ds - v0 * v0;
    LatticeChis c;
    c.chi_d = -p.kappa[0] / dp - pre * (ds * wells / den + (p.rho * p.length_L - wells) / ds);
    c.chi_s = -pre * v0 * w / den;
    return c;
}

class LatticeSystem {
public:
    LatticeSystem(std::size_t n, cplx chi_d, cplx chi_s) : n_(n), chi_d_(chi_d), chi_s_(chi_s)
    {
        if (n < 2)
            throw ConfigError("lattice needs at least two clouds");
        const double scale = std::sqrt(2.0 / static_cast<double>(n + 1));
        u_.resize(n * n);
        eps_.resize(n);
        for (std::size_t k = 1; k <= n; ++k) {
            const double theta = static_cast<double>(k) * std::numbers::pi / static_cast<double>(n + 1);
            eps_[k - 1] = chi_d + 2.0 * chi_s * std::cos(theta);
            for (std::size_t mu = 1; mu <= n; ++mu)
                u_[(k - 1) * n + (mu - 1)] = scale * std::sin(theta * static_cast<double>(mu));
        }
    }

    LatticeSystem(std::size_t n, const LatticeChis& c) : LatticeSystem(n, c.chi_d, c.chi_s) {}

    std::size_t size() const { return n_; }
    cplx chi_d() const { return chi_d_; }
    cplx chi_s() const { return chi_s_; }

    /// eps_k = chi_D + 2 chi_S cos(k pi / (N+1)), k = 1..N.
    cplx eigenvalue(std::size_t k) const { return eps_.at(k - 1); }
    const std::vector<cplx>& eigenvalues() const { return eps_; }

    /// u^k_mu = sqrt(2/(N+1)) sin(k mu pi / (N+1)), mu = 1..N (0-based storage).
    std::vector<double> eigenvector(std::size_t k) const
    {
        if (k < 1 || k > n_)
            throw std::out_of_range("eigenvector index out of range");
        return {u_.begin() + static_cast<long>((k - 1) * n_), u_.begin() + static_cast<long>(k * n_)};
    }

    /// Dense row-major X.
    std::vector<cplx> matrix() const
    {
        std::vector<cplx> m(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            m[i * n_ + i] = chi_d_;
            if (i + 1 < n_) {
                m[i * n_ + i + 1] = chi_s_;
                m[(i + 1) * n_ + i] = chi_s_;
            }
        }
        return m;
    }

    /// W(z) = sum_k <u^k, W0> e^{i eps_k z} u^k.
    std::vector<cplx> propagate(const std::vector<cplx>& w0, double z) const
    {
        if (w0.size() != n_)
            throw ConfigError("lattice input has the wrong length");
        std::vector<cplx> w(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const double* u = u_.data() + k * n_;
            cplx c{};
            for (std::size_t mu = 0; mu < n_; ++mu)
                c += u[mu] * w0[mu];
            c *= std::exp(I * eps_[k] * z);
            for (std::size_t mu = 0; mu < n_; ++mu)
                w[mu] += c * u[mu];
        }
        return w;
    }

private:
    std::size_t n_;
    cplx chi_d_;
    cplx chi_s_;
    std::vector<cplx> eps_;
    std::vector<double> u_;
};

inline double total_intensity(const std::vector<cplx>& w)
{
    double s = 0.0;
    for (const auto& x : w)
        s += std::norm(x);
    return s;
}

/// Continuum parameters: 1/m = 2 chi_S ell^2, Gamma = chi_D + 2 chi_S.
struct DiffusionParams {
    double m_r_inv = 0.0;
    double m_i_inv = 0.0;
    cplx gamma_cap;
};

inline DiffusionParams diffusion_params(const LatticeSystem& s, double ell)
{
    const cplx minv = 2.0 * s.chi_s() * ell * ell;
    return {minv.real(), minv.imag(), s.chi_d() + 2.0 * s.chi_s()};
}

struct GaussianLaw {
    double h = 1.0;
    double sigma_sq = 0.0;
};

/// Norm and width of a Gaussian wavepacket under
///   i d_z Omega = -[(1/2m) d_y^2 + Gamma] Omega,
/// the continuum form of d_z W = i X W:
///   h(z) = exp(-2 Gamma_i z) / sqrt(1 - z m_i^{-1} / (2 sigma0^2)),
///   sigma(z)^2 = s + (z m_r^{-1} / 2)^2 / s,  s = sigma0^2 - z m_i^{-1} / 2.
/// Throws DomainError once the square-root argument is no longer positive.
inline GaussianLaw gaussian_norm_width(double z, double sigma0, const DiffusionParams& d)
{
    if (!(sigma0 > 0.0))
        throw DomainError("gaussian_norm_width: sigma0 must be positive");
    const double s0 = sigma0 * sigma0;
    const double arg = 1.0 - z * d.m_i_inv / (2.0 * s0);
    if (!(arg > 0.0))
        throw DomainError("gaussian_norm_width: closed form breaks down at z = " + std::to_string(z));
    const double s = s0 - 0.5 * z * d.m_i_inv;
    const double b = 0.5 * z * d.m_r_inv;
    return {std::exp(-2.0 * d.gamma_cap.imag() * z) / std::sqrt(arg), s + b * b / s};
}

/// sigma0^2 + z^2 / (4 m_r^2 sigma0^2).
inline double free_particle_sigma_sq(double z, double sigma0, double m_r_inv)
{
    const double s0 = sigma0 * sigma0;
    return s0 + z * z * m_r_inv * m_r_inv / (4.0 * s0);
}

/// Omega(y) = exp(-y^2 / (4 sigma0^2)) / (2 pi sigma0^2)^{1/4} sampled at
/// y = (mu - center) ell.
inline std::vector<cplx> gaussian_lattice_input(std::size_t n, double sigma0, double ell, double center)
{
    std::vector<cplx> w(n);
    const double norm = std::pow(2.0 * std::numbers::pi * sigma0 * sigma0, -0.25);
    for (std::size_t mu = 0; mu < n; ++mu) {
        const double y = (static_cast<double>(mu) - center) * ell;
        w[mu] = norm * std::exp(-y * y / (4.0 * sigma0 * sigma0));
    }
    return w;
}

struct LatticeMoments {
    double norm = 0.0;     // sum_mu |W_mu|^2
    double centroid = 0.0; // in y units
    double sigma_sq = 0.0; // <(y - centroid)^2>
};

inline LatticeMoments lattice_moments(const std::vector<cplx>& w, double ell)
{
    LatticeMoments m;
    double first = 0.0;
    for (std::size_t mu = 0; mu < w.size(); ++mu) {
        const double i = std::norm(w[mu]);
        m.norm += i;
        first += i * ell * static_cast<double>(mu);
    }
    if (!(m.norm > 0.0))
        return m;
    m.centroid = first / m.norm;
    for (std::size_t mu = 0; mu < w.size(); ++mu) {
        const double y = ell * static_cast<double>(mu) - m.centroid;
        m.sigma_sq += std::norm(w[mu]) * y * y;
    }
    m.sigma_sq /= m.norm;
    return m;
}

} // namespace deit
