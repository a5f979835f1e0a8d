#pragma once

// Time-domain integration of the pair-amplitude equations coupled to the
// retarded-frame probe propagation
//
//   d_t a24^{mn}(z,z') = i Dp_m a24 + i Op_m(z,t) s_n(z') + i conj(Oc_m(z)) a34
//   d_t a34^{mn}(z,z') = i Dc_m a34 + i Oc_m(z) a24 - i V^{mn}(z,z') a34^{nm}(z',z)
//   d_z Op_m(z)       = i kappa_m sum_n int a24^{mn}(z,z') conj(s_n(z')) dz'
//
// with Dp = delta_p + i gamma, Dc = delta_p + delta_c and s = alpha_4. The
// amplitudes advance with classical RK4; at every stage the probe is rebuilt
// by marching in z from the input boundary with a trapezoidal source.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddi_kernel.hpp"
#include "errors.hpp"
#include "medium.hpp"
#include "normal_modes.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace deit {

/// Callable filling Omega_p^mu(0, t) for every cloud.
template <class B>
concept BoundaryCondition = requires(const B& b, double t, std::span<cplx> out) {
    { b(t, out) };
};

struct SolverOptions {
    KernelShape shape = KernelShape::actual;
    int stride = 1;  // history decimation in time steps
    int threads = 1; // workers for the per-row updates
};

class BlochMaxwellSolver {
public:
    BlochMaxwellSolver(const ScenarioParams& p, const Grid& g, const DdiKernel& kernel,
                       const SpinwaveProfile& spinwave, SolverOptions opts = {})
        : grid_(g), opts_(opts), n_(g.nodes()), clouds_(p.clouds()), spin_(spinwave)
    {
        if (!p.retarded_frame)
            throw ConfigError("the time-domain solver requires the retarded frame");
        if (spinwave.clouds() != clouds_ || spinwave.amp.front().size() != n_)
            throw ConfigError("spinwave profile does not match the grid");
        if (opts_.stride < 1)
            throw ConfigError("stride must be >= 1");

        const auto blocks = interacting_pairs(clouds_, kernel, opts.shape);
        y_ = PairAmplitudeField(clouds_, n_, blocks);
        acc_ = buf_a_ = buf_b_ = y_;
        probe_ = source_ = ProbeField(clouds_, n_);
        boundary_.resize(clouds_);

        for (std::size_t mu = 0; mu < clouds_; ++mu) {
            dp_.push_back(complex_probe_detuning(p, mu).value);
            dc_.push_back(p.delta_p[mu] + p.delta_c[mu]);
            kappa_.push_back(p.kappa[mu]);
            std::vector<cplx> oc(n_);
            for (std::size_t j = 0; j < n_; ++j)
                oc[j] = std::polar(p.omega_c[mu], p.k_c * g.z(j) + p.phi_c[mu]);
            oc_.push_back(std::move(oc));
        }

        const auto w = trapezoid_weights(n_, g.dz);
        weighted_conj_.resize(clouds_);
        std::vector<double> cloud_norm(clouds_, 0.0);
        for (std::size_t nu = 0; nu < clouds_; ++nu) {
            weighted_conj_[nu].resize(n_);
            for (std::size_t k = 0; k < n_; ++k) {
                weighted_conj_[nu][k] = w[k] * std::conj(spin_.amp[nu][k]);
                cloud_norm[nu] += w[k] * std::norm(spin_.amp[nu][k]);
            }
        }
        free_weight_.assign(clouds_, 0.0);
        for (std::size_t mu = 0; mu < clouds_; ++mu)
            for (std::size_t nu = 0; nu < clouds_; ++nu)
                if (y_.block_of(mu, nu) < 0)
                    free_weight_[mu] += cloud_norm[nu];

        // Kernel matrices: one shared inter-cloud matrix, one intra-cloud.
        double vmax = 0.0;
        auto build = [&](bool same) {
            std::vector<double> m(n_ * n_, 0.0);
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k) {
                    if (same && j == k)
                        continue;
                    m[j * n_ + k] = kernel.evaluate(opts.shape, g.z(j), g.z(k), same);
                    vmax = std::max(vmax, std::abs(m[j * n_ + k]));
                }
            return m;
        };
        for (const auto& b : blocks) {
            auto& slot = b.mu == b.nu ? intra_ : inter_;
            if (slot.empty())
                slot = build(b.mu == b.nu);
        }

        double rate = 0.0;
        for (std::size_t mu = 0; mu < clouds_; ++mu) {
            double smax = 0.0;
            for (std::size_t nu = 0; nu < clouds_; ++nu)
                for (const auto& a : spin_.amp[nu])
                    smax = std::max(smax, std::norm(a));
            const double local = std::max(std::abs(dp_[mu]), std::abs(dc_[mu])) + p.omega_c[mu];
            rate = std::max(rate, local + vmax + kappa_[mu] * p.length_L * p.length_L * smax * 1.0);
        }
        rate_bound_ = rate;

        if (stability_ratio() > 0.5)
            warnings_.push_back("dt * max rate = " + std::to_string(stability_ratio()) +
                                " exceeds 0.5; RK4 may be inaccurate or unstable");
        if (!kernel_resolved(p, g))
            warnings_.push_back("dz exceeds z_d / 20; the kernel width is under-resolved");
    }

    const Grid& grid() const { return grid_; }
    const SpinwaveProfile& spinwave() const { return spin_; }
    PairAmplitudeField& state() { return y_; }
    const PairAmplitudeField& state() const { return y_; }
    const ProbeField& probe() const { return probe_; }
    double time() const { return t_; }
    long step_count() const { return steps_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Upper estimate of the largest rate in the linear system (gamma units).
    double rate_bound() const { return rate_bound_; }
    double stability_ratio() const { return rate_bound_ * grid_.dt; }

    /// Time derivatives of every stored amplitude given the probe slice.
    void amplitude_rhs(const PairAmplitudeField& src, const ProbeField& probe, PairAmplitudeField& dst) const
    {
        auto out = dst.data();
        for_each_rhs(src, probe, [out](std::size_t i, cplx d) { out[i] = d; });
    }

    /// d_z Omega_p^mu at every node for the given amplitudes.
    void field_rhs(const PairAmplitudeField& src, ProbeField& source) const
    {
        for (std::size_t mu = 0; mu < clouds_; ++mu) {
            auto s = source.cloud(mu);
            const cplx ik = I * kappa_[mu];
            const auto free24 = src.free_a24(mu);
            parallel_for(n_, opts_.threads, [&](std::size_t j) {
                cplx acc = free_weight_[mu] * free24[j];
                for (std::size_t b = 0; b < src.blocks().size(); ++b) {
                    const auto& blk = src.blocks()[b];
                    if (blk.mu != mu)
                        continue;
                    const cplx* row = src.a24(b).data() + j * n_;
                    const cplx* wc = weighted_conj_[blk.nu].data();
                    cplx sum{};
                    for (std::size_t k = 0; k < n_; ++k)
                        sum += row[k] * wc[k];
                    acc += sum;
                }
                s[j] = ik * acc;
            });
        }
    }

    /// Probe slice at time t: z-march of field_rhs from Omega_p(0, t).
    template <BoundaryCondition B>
    void solve_field(double t, const PairAmplitudeField& src, const B& boundary, ProbeField& out)
    {
        boundary(t, std::span<cplx>(boundary_));
        field_rhs(src, source_);
        const double h = 0.5 * grid_.dz;
        for (std::size_t mu = 0; mu < clouds_; ++mu) {
            auto s = source_.cloud(mu);
            auto f = out.cloud(mu);
            f[0] = boundary_[mu];
            for (std::size_t j = 1; j < n_; ++j)
                f[j] = f[j - 1] + h * (s[j - 1] + s[j]);
        }
    }

    /// Refreshes probe() for the current state and time.
    template <BoundaryCondition B>
    void update_probe(const B& boundary)
    {
        solve_field(t_, y_, boundary, probe_);
        require_finite(probe_.data(), "probe field");
    }

    template <BoundaryCondition B>
    void step(const B& boundary)
    {
        const double dt = grid_.dt;
        auto y = y_.data();
        auto acc = acc_.data();
        auto a = buf_a_.data();
        auto b = buf_b_.data();

        solve_field(t_, y_, boundary, probe_);
        for_each_rhs(y_, probe_, [&](std::size_t i, cplx k) {
            acc[i] = y[i] + (dt / 6.0) * k;
            a[i] = y[i] + (0.5 * dt) * k;
        });
        solve_field(t_ + 0.5 * dt, buf_a_, boundary, probe_);
        for_each_rhs(buf_a_, probe_, [&](std::size_t i, cplx k) {
            acc[i] += (dt / 3.0) * k;
            b[i] = y[i] + (0.5 * dt) * k;
        });
        solve_field(t_ + 0.5 * dt, buf_b_, boundary, probe_);
        for_each_rhs(buf_b_, probe_, [&](std::size_t i, cplx k) {
            acc[i] += (dt / 3.0) * k;
            a[i] = y[i] + dt * k;
        });
        solve_field(t_ + dt, buf_a_, boundary, probe_);
        for_each_rhs(buf_a_, probe_, [&](std::size_t i, cplx k) { y[i] = acc[i] + (dt / 6.0) * k; });

        ++steps_;
        t_ = grid_.dt * static_cast<double>(steps_);

        require_finite(y_.data(), "amplitude");
    }

private:
    // |v|^2 must stay finite so that probabilities and the history can be formed.
    void require_finite(std::span<const cplx> values, const char* what) const
    {
        for (const auto& v : values)
            if (!std::isfinite(std::norm(v)))
                throw SolverAbort(std::string("non-finite ") + what + " at step " + std::to_string(steps_) +
                                      ", t = " + std::to_string(t_) +
                                      " (dt * rate = " + std::to_string(stability_ratio()) + ")",
                                  steps_, t_);
    }

    template <class Op>
    void for_each_rhs(const PairAmplitudeField& src, const ProbeField& probe, Op&& op) const
    {
        const auto& blocks = src.blocks();
        const std::size_t nn = n_ * n_;
        const std::size_t tasks = blocks.size() * n_ + clouds_;
        const cplx* base = src.data().data();
        const cplx* const data0 = base;

        parallel_for(tasks, opts_.threads, [&](std::size_t task) {
            if (task < blocks.size() * n_) {
                const std::size_t bi = task / n_;
                const std::size_t j = task % n_;
                const PairBlock& blk = blocks[bi];
                const std::size_t mu = blk.mu;
                const std::vector<double>& vm = blk.mu == blk.nu ? intra_ : inter_;
                const std::size_t off24 = bi * 2 * nn + j * n_;
                const std::size_t off34 = off24 + nn;
                const cplx* a24 = data0 + off24;
                const cplx* a34 = data0 + off34;
                const cplx* partner = data0 + blk.partner * 2 * nn + nn;
                const double* v = vm.data() + j * n_;
                const cplx* s = spin_.amp[blk.nu].data();
                const cplx omp = probe.cloud(mu)[j];
                const cplx oc = oc_[mu][j];
                const cplx occ = std::conj(oc);
                const cplx dp = dp_[mu];
                const double dc = dc_[mu];
                for (std::size_t k = 0; k < n_; ++k) {
                    const cplx x24 = a24[k];
                    const cplx x34 = a34[k];
                    op(off24 + k, I * (dp * x24 + omp * s[k] + occ * x34));
                    op(off34 + k, I * (dc * x34 + oc * x24 - v[k] * partner[k * n_ + j]));
                }
            } else {
                const std::size_t mu = task - blocks.size() * n_;
                const std::size_t off24 = blocks.size() * 2 * nn + mu * 2 * n_;
                const std::size_t off34 = off24 + n_;
                const auto omp = probe.cloud(mu);
                const cplx dp = dp_[mu];
                const double dc = dc_[mu];
                for (std::size_t j = 0; j < n_; ++j) {
                    const cplx p = data0[off24 + j];
                    const cplx q = data0[off34 + j];
                    const cplx oc = oc_[mu][j];
                    op(off24 + j, I * (dp * p + omp[j] + std::conj(oc) * q));
                    op(off34 + j, I * (dc * q + oc * p));
                }
            }
        });
    }

    Grid grid_;
    SolverOptions opts_;
    std::size_t n_;
    std::size_t clouds_;
    SpinwaveProfile spin_;
    std::vector<std::vector<cplx>> weighted_conj_;
    std::vector<double> free_weight_;
    std::vector<double> inter_;
    std::vector<double> intra_;
    std::vector<cplx> dp_;
    std::vector<double> dc_;
    std::vector<double> kappa_;
    std::vector<std::vector<cplx>> oc_;
    double rate_bound_ = 0.0;
    std::vector<std::string> warnings_;

    PairAmplitudeField y_, acc_, buf_a_, buf_b_;
    ProbeField probe_, source_;
    std::vector<cplx> boundary_;
    double t_ = 0.0;
    long steps_ = 0;
};

struct PropagationResult {
    ProbeHistory history;
    std::optional<PmProfile> pm; // two clouds only
    std::vector<std::string> warnings;
    long steps = 0;
};

/// Marches n_t steps from the vacuum state, recording the probe every
/// `stride` steps (t = 0 included). Deterministic for fixed inputs.
template <BoundaryCondition B>
PropagationResult propagate(const ScenarioParams& p, const Grid& g, const DdiKernel& kernel,
                            const SpinwaveProfile& spinwave, const B& input, SolverOptions opts = {})
{
    BlochMaxwellSolver solver(p, g, kernel, spinwave, opts);
    PropagationResult r;
    r.warnings = solver.warnings();
    r.history = ProbeHistory(p.clouds(), g.nodes(), g.dz, g.dt * opts.stride);
    solver.update_probe(input);
    r.history.append(solver.time(), solver.probe());
    for (long s = 0; s < g.n_t; ++s) {
        solver.step(input);
        if (solver.step_count() % opts.stride == 0) {
            solver.update_probe(input);
            r.history.append(solver.time(), solver.probe());
        }
    }
    r.steps = solver.step_count();
    if (p.cloud_count == 2)
        r.pm = prob_pm(r.history, p.phi_ab());
    return r;
}

} // namespace deit
