#pragma once

// Randomised linearity and symmetry checks shared by the unit tests and
// the acceptance run.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <deit/deit.hpp>

namespace deit::test {

struct PropertyReport {
    int cases = 0;
    double scaling = 0.0;       // analytic field, relative
    double swap = 0.0;          // analytic field, relative
    double parallelogram = 0.0; // relative
    double leak = 0.0;          // |orthogonal mode| / |input mode|
    double solver_scaling = 0.0;
    double solver_swap = 0.0;

    bool pass() const
    {
        return scaling < 1e-12 && swap < 1e-12 && parallelogram < 1e-12 && leak < 1e-12 &&
               solver_scaling < 1e-12 && solver_swap < 1e-12;
    }
};

struct StepInput {
    cplx a, b;
    double rate;
    void operator()(double t, std::span<cplx> out) const
    {
        const double env = 1.0 - std::exp(-rate * t);
        out[0] = a * env;
        out[1] = b * env;
    }
};

inline PropertyReport run_property_suite(int cases, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto range = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    auto amp = [&] { return cplx(range(-1.0, 1.0), range(-1.0, 1.0)); };
    auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };

    PropertyReport r;
    r.cases = cases;
    for (int c = 0; c < cases; ++c) {
        json d = preset_document("fig3");
        const double dp = range(-20.0, 20.0);
        d["delta_p"] = dp;
        d["delta_c"] = range(-2.0, 2.0);
        d["omega_c"] = range(1.0, 15.0);
        d["kappa"] = range(1.0, 20.0);
        d["v0"] = range(-20.0, 20.0);
        d["separation_ell"] = range(0.5, 1.0);
        const double phi = range(0.0, 2.0 * std::numbers::pi);
        d["phi_c"] = {phi, 0.0};
        const auto p = load_scenario(d);
        const auto coeffs = normal_mode_coeffs(p);
        const double z = range(0.0, 1.0);
        const double omega = range(-1.0, 1.0);
        const cplx a = amp(), b = amp(), s = amp();

        // analytic layer
        const auto f = analytic_two_cloud_field(a, b, z, omega, coeffs, phi);
        const auto fs = analytic_two_cloud_field(s * a, s * b, z, omega, coeffs, phi);
        r.scaling = std::max({r.scaling, rel(fs.a, s * f.a), rel(fs.b, s * f.b)});
        const auto sw = analytic_two_cloud_field(b, a, z, omega, coeffs, -phi);
        r.swap = std::max({r.swap, rel(sw.a, f.b), rel(sw.b, f.a)});
        const auto m = normal_modes(a, b, phi);
        const double lhs = std::norm(m.plus) + std::norm(m.minus);
        const double rhs = 2.0 * (std::norm(a) + std::norm(b));
        r.parallelogram = std::max(r.parallelogram, std::abs(lhs - rhs) / rhs);
        const cplx e = std::polar(1.0, phi);
        const auto sym = analytic_two_cloud_field(a, a * e, z, omega, coeffs, phi);
        const auto anti = analytic_two_cloud_field(a, -a * e, z, omega, coeffs, phi);
        const auto ms = normal_modes(sym.a, sym.b, phi);
        const auto ma = normal_modes(anti.a, anti.b, phi);
        r.leak = std::max({r.leak, std::abs(ms.minus) / std::abs(ms.plus), std::abs(ma.plus) / std::abs(ma.minus)});

        // time-domain layer on a short, coarse run
        const DdiKernel k(p.c3, p.beta, p.separation_ell);
        const auto g = make_grid(p, 20, 30, 0.004);
        const auto spin = uniform_spinwave(p, g);
        const double rate = range(1.0, 10.0);
        const auto base = propagate(p, g, k, spin, StepInput{a, b, rate}, {KernelShape::actual, 10, 1});
        const auto scaled = propagate(p, g, k, spin, StepInput{s * a, s * b, rate}, {KernelShape::actual, 10, 1});
        ScenarioParams q = p;
        q.phi_c = {0.0, phi};
        const auto swapped = propagate(q, g, k, spin, StepInput{b, a, rate}, {KernelShape::actual, 10, 1});
        for (std::size_t i = 1; i < base.history.samples(); ++i)
            for (std::size_t j = 0; j < g.nodes(); ++j) {
                const cplx x0 = base.history.at(0, j, i), x1 = base.history.at(1, j, i);
                r.solver_scaling = std::max({r.solver_scaling, rel(scaled.history.at(0, j, i), s * x0),
                                             rel(scaled.history.at(1, j, i), s * x1)});
                r.solver_swap = std::max(
                    {r.solver_swap, rel(swapped.history.at(1, j, i), x0), rel(swapped.history.at(0, j, i), x1)});
            }
    }
    return r;
}

} // namespace deit::test
