#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ddi_kernel.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace deit {

/// Space-time discretisation. Nodes z_j = j*dz for j = 0..n_z, so n_z*dz = L.
struct Grid {
    int n_z = 0;
    long n_t = 0;
    double dz = 0.0;
    double dt = 0.0;
    bool retarded_frame = true;

    std::size_t nodes() const { return static_cast<std::size_t>(n_z) + 1; }
    double z(std::size_t j) const { return dz * static_cast<double>(j); }
    double t_end() const { return dt * static_cast<double>(n_t); }
    std::vector<double> z_nodes() const
    {
        std::vector<double> out(nodes());
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] = z(j);
        return out;
    }
};

inline Grid make_grid(const ScenarioParams& p, int n_z, long n_t, double dt)
{
    if (n_z < 1)
        throw ConfigError("grid: n_z must be >= 1");
    if (n_t < 1)
        throw ConfigError("grid: n_t must be >= 1");
    if (!(dt > 0.0))
        throw ConfigError("grid: dt must be positive");
    Grid g{n_z, n_t, p.length_L / n_z, dt, p.retarded_frame};
    if (p.cloud_count >= 2) {
        const double zd = fwhm_halfwidth(p.separation_ell);
        if (zd < 5.0 * g.dz)
            throw ConfigError("grid too coarse: kernel half-width z_d = " + std::to_string(zd) +
                              " is resolved by fewer than 5 cells (dz = " + std::to_string(g.dz) +
                              ")");
    }
    return g;
}

/// dz <= z_d / 20, the resolution the solver is meant to run at.
inline bool kernel_resolved(const ScenarioParams& p, const Grid& g)
{
    return p.cloud_count < 2 || g.dz <= fwhm_halfwidth(p.separation_ell) / 20.0;
}

/// alpha_4^mu(z) sampled on the grid nodes, one row per cloud.
struct SpinwaveProfile {
    std::vector<std::vector<cplx>> amp;
    double dz = 0.0;

    std::size_t clouds() const { return amp.size(); }

    /// sum_mu int |alpha_4^mu|^2 dz (trapezoid).
    double norm() const
    {
        double s = 0.0;
        for (const auto& row : amp) {
            std::vector<double> mag(row.size());
            for (std::size_t j = 0; j < row.size(); ++j)
                mag[j] = std::norm(row[j]);
            s += trapezoid<double>(mag, dz);
        }
        return s;
    }

    double cloud_norm(std::size_t mu) const
    {
        std::vector<double> mag(amp[mu].size());
        for (std::size_t j = 0; j < mag.size(); ++j)
            mag[j] = std::norm(amp[mu][j]);
        return trapezoid<double>(mag, dz);
    }
};

/// |alpha_4^mu|^2 = rho * weight_mu (rho / N by default), phase e^{i k_s z}.
inline SpinwaveProfile uniform_spinwave(const ScenarioParams& p, const Grid& g)
{
    if (p.cloud_count < 1)
        throw ConfigError("uniform_spinwave: cloud_count must be >= 1");
    SpinwaveProfile s;
    s.dz = g.dz;
    s.amp.resize(p.clouds());
    for (std::size_t mu = 0; mu < p.clouds(); ++mu) {
        const double mag = std::sqrt(p.rho * p.spinwave_weights[mu]);
        s.amp[mu].resize(g.nodes());
        for (std::size_t j = 0; j < g.nodes(); ++j)
            s.amp[mu][j] = std::polar(mag, p.k_s * g.z(j));
    }
    return s;
}

/// An interacting ordered cloud pair (mu, nu) stored as a full (z, z') block.
struct PairBlock {
    std::size_t mu = 0;
    std::size_t nu = 0;
    std::size_t partner = 0; // index of the (nu, mu) block
};

/// Ordered pairs with a non-vanishing exchange kernel: the two clouds of a
/// pair, nearest neighbours for more clouds, and the diagonal only when the
/// intra-cloud term survives (non-magic angle, actual profile).
inline std::vector<PairBlock> interacting_pairs(std::size_t clouds, const DdiKernel& kernel,
                                                KernelShape shape)
{
    std::vector<PairBlock> out;
    const bool intra = shape == KernelShape::actual && !kernel.intra_suppressed();
    for (std::size_t mu = 0; mu < clouds; ++mu) {
        for (std::size_t nu = 0; nu < clouds; ++nu) {
            const std::size_t d = mu > nu ? mu - nu : nu - mu;
            if ((d == 0 && intra) || d == 1)
                out.push_back({mu, nu, 0});
        }
    }
    for (auto& b : out) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i].mu == b.nu && out[i].nu == b.mu) {
                b.partner = i;
                break;
            }
        }
    }
    return out;
}

/// alpha_24^{mu nu}(z, z') and alpha_34^{mu nu}(z, z').
///
/// Interacting pairs are full n x n row-major blocks (row z, column z').
/// All other pairs factorise as p_mu(z) alpha_4^nu(z') because their drive
/// does and V = 0; each cloud keeps one such row pair (p_mu, q_mu).
class PairAmplitudeField {
public:
    PairAmplitudeField() = default;

    PairAmplitudeField(std::size_t clouds, std::size_t nodes, std::vector<PairBlock> blocks)
        : clouds_(clouds), n_(nodes), blocks_(std::move(blocks)),
          data_(blocks_.size() * 2 * n_ * n_ + clouds_ * 2 * n_, cplx{})
    {
    }

    std::size_t clouds() const { return clouds_; }
    std::size_t nodes() const { return n_; }
    const std::vector<PairBlock>& blocks() const { return blocks_; }

    std::span<cplx> a24(std::size_t b) { return {data_.data() + b * 2 * n_ * n_, n_ * n_}; }
    std::span<cplx> a34(std::size_t b) { return {data_.data() + (b * 2 + 1) * n_ * n_, n_ * n_}; }
    std::span<const cplx> a24(std::size_t b) const { return {data_.data() + b * 2 * n_ * n_, n_ * n_}; }
    std::span<const cplx> a34(std::size_t b) const
    {
        return {data_.data() + (b * 2 + 1) * n_ * n_, n_ * n_};
    }

    std::span<cplx> free_a24(std::size_t mu) { return {data_.data() + free_offset(mu), n_}; }
    std::span<cplx> free_a34(std::size_t mu) { return {data_.data() + free_offset(mu) + n_, n_}; }
    std::span<const cplx> free_a24(std::size_t mu) const { return {data_.data() + free_offset(mu), n_}; }
    std::span<const cplx> free_a34(std::size_t mu) const
    {
        return {data_.data() + free_offset(mu) + n_, n_};
    }

    std::span<cplx> data() { return data_; }
    std::span<const cplx> data() const { return data_; }

    /// Block index of (mu, nu), or -1 when the pair is stored factorised.
    long block_of(std::size_t mu, std::size_t nu) const
    {
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            if (blocks_[b].mu == mu && blocks_[b].nu == nu)
                return static_cast<long>(b);
        return -1;
    }

    /// alpha_24^{mu nu}(z_j, z'_k) whichever way it is stored.
    cplx a24_at(std::size_t mu, std::size_t nu, std::size_t j, std::size_t k,
                const SpinwaveProfile& s) const
    {
        const long b = block_of(mu, nu);
        if (b >= 0)
            return a24(static_cast<std::size_t>(b))[j * n_ + k];
        return free_a24(mu)[j] * s.amp[nu][k];
    }

    cplx a34_at(std::size_t mu, std::size_t nu, std::size_t j, std::size_t k,
                const SpinwaveProfile& s) const
    {
        const long b = block_of(mu, nu);
        if (b >= 0)
            return a34(static_cast<std::size_t>(b))[j * n_ + k];
        return free_a34(mu)[j] * s.amp[nu][k];
    }

private:
    std::size_t free_offset(std::size_t mu) const
    {
        return blocks_.size() * 2 * n_ * n_ + mu * 2 * n_;
    }

    std::size_t clouds_ = 0;
    std::size_t n_ = 0;
    std::vector<PairBlock> blocks_;
    std::vector<cplx> data_;
};

/// Omega_p^mu(z_j) on one time slice.
class ProbeField {
public:
    ProbeField() = default;
    ProbeField(std::size_t clouds, std::size_t nodes) : clouds_(clouds), n_(nodes), data_(clouds * nodes) {}

    std::size_t clouds() const { return clouds_; }
    std::size_t nodes() const { return n_; }
    std::span<cplx> cloud(std::size_t mu) { return {data_.data() + mu * n_, n_}; }
    std::span<const cplx> cloud(std::size_t mu) const { return {data_.data() + mu * n_, n_}; }
    std::span<const cplx> data() const { return data_; }

private:
    std::size_t clouds_ = 0;
    std::size_t n_ = 0;
    std::vector<cplx> data_;
};

/// Recorded Omega_p^mu(z_j, t_i) at uniformly spaced sample times.
class ProbeHistory {
public:
    ProbeHistory() = default;
    ProbeHistory(std::size_t clouds, std::size_t nodes, double dz, double sample_dt)
        : clouds_(clouds), n_(nodes), dz_(dz), sample_dt_(sample_dt)
    {
    }

    void append(double t, const ProbeField& f)
    {
        times_.push_back(t);
        data_.insert(data_.end(), f.data().begin(), f.data().end());
    }

    std::size_t clouds() const { return clouds_; }
    std::size_t nodes() const { return n_; }
    std::size_t samples() const { return times_.size(); }
    double dz() const { return dz_; }
    double sample_dt() const { return sample_dt_; }
    const std::vector<double>& times() const { return times_; }

    cplx at(std::size_t mu, std::size_t j, std::size_t i) const
    {
        return data_[(i * clouds_ + mu) * n_ + j];
    }

private:
    std::size_t clouds_ = 0;
    std::size_t n_ = 0;
    double dz_ = 0.0;
    double sample_dt_ = 0.0;
    std::vector<double> times_;
    std::vector<cplx> data_;
};

/// Omega_p^mu(0, t) = a_mu exp(-(t - t0)^2 / (2 w^2)), normalised so that
/// sum_mu int |Omega_p^mu(0, t)|^2 dt = 1 (all-zero amplitudes stay zero).
class GaussianPulse {
public:
    GaussianPulse(double center_t, double width_t, std::vector<cplx> amplitudes)
        : center_(center_t), width_(width_t), amp_(std::move(amplitudes))
    {
        if (!(width_t > 0.0))
            throw ConfigError("gaussian_input_pulse: width_t must be positive");
        double s = 0.0;
        for (const auto& a : amp_)
            s += std::norm(a);
        if (s > 0.0) {
            // int exp(-(t-t0)^2 / w^2) dt = w sqrt(pi)
            const double scale = 1.0 / std::sqrt(s * width_t * std::sqrt(std::numbers::pi));
            for (auto& a : amp_)
                a *= scale;
        }
    }

    double center() const { return center_; }
    double width() const { return width_; }
    const std::vector<cplx>& amplitudes() const { return amp_; }

    void operator()(double t, std::span<cplx> out) const
    {
        const double x = (t - center_) / width_;
        const double env = std::exp(-0.5 * x * x);
        for (std::size_t mu = 0; mu < out.size(); ++mu)
            out[mu] = mu < amp_.size() ? amp_[mu] * env : cplx{};
    }

private:
    double center_;
    double width_;
    std::vector<cplx> amp_;
};

inline GaussianPulse gaussian_input_pulse(double center_t, double width_t, std::vector<cplx> amplitudes)
{
    return GaussianPulse(center_t, width_t, std::move(amplitudes));
}

} // namespace deit
