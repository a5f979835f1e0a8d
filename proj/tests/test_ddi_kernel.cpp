#include <gtest/gtest.h>

#include <boost/math/tools/roots.hpp>

#include "test_support.hpp"

using namespace deit;
using deit::test::rel;

namespace {

const DdiKernel fig_kernel(10.0 * 0.125, magic_angle(), 0.5);

} // namespace

TEST(DdiKernel, MagicAngleSuppressesIntraCloud)
{
    const double peak = fig_kernel.peak();
    const auto dz = linspace(-2.5, 2.5, 1000);
    for (double x : dz)
        EXPECT_LT(std::abs(fig_kernel.strength(x, 0.0, true)), 1e-14 * peak);
    EXPECT_TRUE(fig_kernel.intra_suppressed());
}

TEST(DdiKernel, PeakAndHalfMaximum)
{
    const double zd = fig_kernel.halfwidth();
    EXPECT_NEAR(fig_kernel.strength(0.0, 0.0, false), 10.0, 1e-12);
    EXPECT_NEAR(fig_kernel.strength(zd, 0.0, false), 5.0, 1e-12);
    EXPECT_NEAR(fig_kernel.strength(0.0, zd, false), 5.0, 1e-12);
    EXPECT_NEAR(fwhm_halfwidth(1.0), 0.565250308069703, 1e-14);
}

TEST(DdiKernel, ReferenceValues)
{
    EXPECT_NEAR(fig_kernel.strength(0.3, 0.0, false), 4.636099295591177, 1e-12);
    EXPECT_NEAR(fig_kernel.strength(1.7, 0.5, false), 0.084165335732158, 1e-14);

    const DdiKernel tilted(1.25, 0.3, 0.5);
    EXPECT_FALSE(tilted.intra_suppressed());
    EXPECT_NEAR(tilted.strength(0.2, 0.0, true), -271.563034744455851, 1e-9);
    EXPECT_NEAR(tilted.strength(0.3, 0.0, false), 1.735378976413867, 1e-12);
}

TEST(DdiKernel, NumericalFullWidthMatchesClosedForm)
{
    const double ell = 0.73;
    const DdiKernel k(2.0, magic_angle(), ell);
    auto f = [&](double x) { return k.strength(x, 0.0, false) - 0.5 * k.peak(); };
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) < 1e-15; };
    const auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, ell, tol, iters);
    const double fwhm = a + b;
    EXPECT_LT(rel(fwhm, 2.0 * ell * std::sqrt(std::pow(4.0, 0.2) - 1.0)), 1e-10);
    EXPECT_NEAR(std::round(100.0 * fwhm / ell) / 100.0, 1.13, 1e-12);
}

TEST(DdiKernel, Errors)
{
    EXPECT_THROW(fig_kernel.strength(0.2, 0.2, true), DomainError);
    EXPECT_THROW(fwhm_halfwidth(0.0), DomainError);
    EXPECT_THROW(fwhm_halfwidth(-1.0), DomainError);
    EXPECT_NO_THROW(fig_kernel.strength(0.2, 0.2, false));
}

TEST(DdiKernel, SymmetricInOffset)
{
    for (double x : linspace(-2.0, 2.0, 41)) {
        EXPECT_DOUBLE_EQ(fig_kernel.strength(x, 0.1, false), fig_kernel.strength(0.1, x, false));
        EXPECT_DOUBLE_EQ(fig_kernel.square_well(x, 0.1), fig_kernel.square_well(0.1, x));
    }
}

TEST(DdiKernel, SquareWell)
{
    const double zd = fig_kernel.halfwidth();
    EXPECT_DOUBLE_EQ(fig_kernel.square_well(0.0, 0.0), 10.0);
    EXPECT_DOUBLE_EQ(fig_kernel.square_well(0.999 * zd, 0.0), 10.0);
    EXPECT_DOUBLE_EQ(fig_kernel.square_well(1.001 * zd, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(fig_kernel.evaluate(KernelShape::square_well, 0.1, 0.0, false), 10.0);
    EXPECT_DOUBLE_EQ(fig_kernel.evaluate(KernelShape::square_well, 0.1, 0.0, true), 0.0);
}

// Over the offsets present in a medium of length L, the box carries the
// same weight as the actual profile to within 15%.
TEST(DdiKernel, SquareWellAreaWithinMedium)
{
    const auto x = linspace(-1.0, 1.0, 200001);
    std::vector<double> actual(x.size()), box(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        actual[i] = fig_kernel.strength(x[i], 0.0, false);
        box[i] = fig_kernel.square_well(x[i], 0.0);
    }
    const double h = x[1] - x[0];
    const double ia = trapezoid<double>(actual, h);
    const double ib = trapezoid<double>(box, h);
    EXPECT_NEAR(ib, 2.0 * fig_kernel.halfwidth() * 10.0, 1e-3);
    EXPECT_LT(rel(ib, ia), 0.15);
}

TEST(DdiKernel, NonMagicAngleKeepsIntraCloud)
{
    const DdiKernel k(1.0, 0.0, 0.5);
    EXPECT_DOUBLE_EQ(k.strength(0.5, 0.0, true), -2.0 / 0.125);
    EXPECT_EQ(k.evaluate(KernelShape::actual, 0.5, 0.0, true), k.strength(0.5, 0.0, true));
}
