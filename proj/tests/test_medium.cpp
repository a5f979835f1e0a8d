#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace deit;

TEST(Grid, NodesIncludeBothEnds)
{
    const auto p = preset("fig3");
    const auto g = make_grid(p, 64, 10, 0.01);
    EXPECT_EQ(g.nodes(), 65u);
    EXPECT_DOUBLE_EQ(g.z(64), 1.0);
    EXPECT_DOUBLE_EQ(g.t_end(), 0.1);
    EXPECT_TRUE(g.retarded_frame);
}

TEST(Grid, RejectsUnresolvedKernel)
{
    const auto p = preset("fig3"); // z_d = 0.2826
    EXPECT_THROW(make_grid(p, 17, 10, 0.01), ConfigError);
    EXPECT_NO_THROW(make_grid(p, 18, 10, 0.01));
    EXPECT_FALSE(kernel_resolved(p, make_grid(p, 70, 10, 0.01)));
    EXPECT_TRUE(kernel_resolved(p, make_grid(p, 71, 10, 0.01)));
}

TEST(Grid, RejectsBadSizes)
{
    const auto p = preset("fig3");
    EXPECT_THROW(make_grid(p, 0, 10, 0.01), ConfigError);
    EXPECT_THROW(make_grid(p, 64, 0, 0.01), ConfigError);
    EXPECT_THROW(make_grid(p, 64, 10, 0.0), ConfigError);
}

TEST(Spinwave, UniformProfileNorms)
{
    json d = preset_document("fig3");
    d["k_s"] = 2.0;
    const auto p = load_scenario(d);
    const auto g = make_grid(p, 64, 1, 0.1);
    const auto s = uniform_spinwave(p, g);
    EXPECT_NEAR(s.norm(), 1.0, 1e-14);
    EXPECT_NEAR(s.cloud_norm(0), 0.5, 1e-14);
    EXPECT_NEAR(std::norm(s.amp[1][10]), 0.5, 1e-15);
    EXPECT_NEAR(std::arg(s.amp[0][10]), 2.0 * g.z(10), 1e-14);
}

TEST(PairAmplitudeField, InteractingPairs)
{
    const DdiKernel magic(1.0, magic_angle(), 0.5);
    const DdiKernel tilted(1.0, 0.2, 0.5);
    const auto three = interacting_pairs(3, magic, KernelShape::actual);
    ASSERT_EQ(three.size(), 4u);
    EXPECT_EQ(three[0].mu, 0u);
    EXPECT_EQ(three[0].nu, 1u);
    for (const auto& b : three) {
        EXPECT_EQ(three[b.partner].mu, b.nu);
        EXPECT_EQ(three[b.partner].nu, b.mu);
    }
    EXPECT_EQ(interacting_pairs(3, tilted, KernelShape::actual).size(), 7u);
    EXPECT_EQ(interacting_pairs(3, tilted, KernelShape::square_well).size(), 4u);
    EXPECT_TRUE(interacting_pairs(1, magic, KernelShape::actual).empty());
}

TEST(PairAmplitudeField, FactorisedAccess)
{
    const DdiKernel k(1.0, magic_angle(), 0.5);
    PairAmplitudeField f(3, 5, interacting_pairs(3, k, KernelShape::actual));
    EXPECT_EQ(f.data().size(), 4u * 2u * 25u + 3u * 2u * 5u);
    EXPECT_EQ(f.block_of(0, 2), -1);
    EXPECT_GE(f.block_of(2, 1), 0);

    SpinwaveProfile s;
    s.dz = 0.25;
    s.amp.assign(3, std::vector<cplx>(5, cplx{0.5, 0.5}));
    s.amp[2][3] = {0.0, 2.0};
    f.free_a24(0)[1] = 3.0;
    f.a34(static_cast<std::size_t>(f.block_of(1, 0)))[2 * 5 + 4] = 7.0;
    EXPECT_EQ(f.a24_at(0, 2, 1, 3, s), cplx(0.0, 6.0));
    EXPECT_EQ(f.a34_at(1, 0, 2, 4, s), cplx(7.0));
}

TEST(ProbeHistory, StoresSlices)
{
    ProbeField f(2, 3);
    f.cloud(1)[2] = {1.0, -1.0};
    ProbeHistory h(2, 3, 0.5, 0.1);
    h.append(0.0, f);
    f.cloud(0)[0] = 4.0;
    h.append(0.1, f);
    EXPECT_EQ(h.samples(), 2u);
    EXPECT_EQ(h.at(1, 2, 0), cplx(1.0, -1.0));
    EXPECT_EQ(h.at(0, 0, 0), cplx(0.0));
    EXPECT_EQ(h.at(0, 0, 1), cplx(4.0));
}

TEST(GaussianPulse, NormalisedEnergy)
{
    const auto pulse = gaussian_input_pulse(10.0, 2.0, {1.0, cplx{0.0, 1.0}});
    const auto t = linspace(-10.0, 30.0, 40001);
    std::vector<double> e(t.size());
    std::vector<cplx> out(2);
    for (std::size_t i = 0; i < t.size(); ++i) {
        pulse(t[i], out);
        e[i] = std::norm(out[0]) + std::norm(out[1]);
    }
    EXPECT_NEAR(trapezoid<double>(e, t[1] - t[0]), 1.0, 1e-12);
    pulse(10.0, out);
    EXPECT_NEAR(std::abs(out[0]), std::abs(out[1]), 1e-15);
}

TEST(GaussianPulse, ZeroAndInvalid)
{
    const auto zero = gaussian_input_pulse(1.0, 1.0, {0.0, 0.0});
    std::vector<cplx> out(2, 9.0);
    zero(1.0, out);
    EXPECT_EQ(out[0], cplx(0.0));
    EXPECT_THROW(gaussian_input_pulse(1.0, 0.0, {1.0}), ConfigError);
}
