#pragma once

// Resonant dipole-dipole exchange between atoms of parallel 1D clouds.
//
//   V(dz) = C3 / (dz^2 + l^2)^{3/2} * [1 - 3 cos^2(beta) dz^2 / (dz^2 + l^2)]
//
// with l = ell between clouds and l = 0 inside one cloud. At the magic angle
// the intra-cloud term vanishes identically and the inter-cloud profile is
// C3 ell^2 / (dz^2 + ell^2)^{5/2}.

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace deit {

inline double magic_angle() { return std::acos(1.0 / std::sqrt(3.0)); }

/// Half width at half maximum z_d = ell * sqrt(4^{1/5} - 1) of the magic-angle profile.
inline double fwhm_halfwidth(double ell)
{
    if (!(ell > 0.0))
        throw DomainError("fwhm_halfwidth: ell must be positive");
    return ell * std::sqrt(std::pow(4.0, 0.2) - 1.0);
}

enum class KernelShape { actual, square_well };

class DdiKernel {
public:
    DdiKernel() = default;

    DdiKernel(double c3, double beta, double ell) : c3_(c3), beta_(beta), ell_(ell)
    {
        const double c = std::cos(beta);
        angular_ = 1.0 - 3.0 * c * c;
        // arccos(1/sqrt3) is not representable; within rounding of it the
        // collinear factor is exactly zero.
        if (std::abs(angular_) < 64.0 * std::numeric_limits<double>::epsilon())
            angular_ = 0.0;
        three_cos2_ = 1.0 - angular_;
    }

    double c3() const { return c3_; }
    double beta() const { return beta_; }
    double ell() const { return ell_; }

    /// C3 / ell^3.
    double peak() const { return c3_ / (ell_ * ell_ * ell_); }

    double halfwidth() const { return fwhm_halfwidth(ell_); }

    /// True when atoms of the same cloud do not interact.
    bool intra_suppressed() const { return angular_ == 0.0 || c3_ == 0.0; }

    double strength(double z1, double z2, bool same_cloud) const
    {
        const double dz = z1 - z2;
        if (same_cloud) {
            if (dz == 0.0)
                throw DomainError("ddi_strength: coincident atoms");
            if (angular_ == 0.0)
                return 0.0;
            const double a = std::abs(dz);
            return c3_ / (a * a * a) * angular_;
        }
        const double dz2 = dz * dz;
        const double r2 = dz2 + ell_ * ell_;
        return c3_ / (r2 * std::sqrt(r2)) * (1.0 - three_cos2_ * dz2 / r2);
    }

    /// Box of height C3/ell^3 and full width 2 z_d (inter-cloud only).
    double square_well(double z1, double z2) const
    {
        return std::abs(z1 - z2) < halfwidth() ? peak() : 0.0;
    }

    double evaluate(KernelShape shape, double z1, double z2, bool same_cloud) const
    {
        if (shape == KernelShape::square_well)
            return same_cloud ? 0.0 : square_well(z1, z2);
        return strength(z1, z2, same_cloud);
    }

private:
    double c3_ = 0.0;
    double beta_ = 0.0;
    double ell_ = 1.0;
    double angular_ = 1.0;
    double three_cos2_ = 0.0;
};

inline double ddi_strength(const DdiKernel& k, double z1, double z2, bool same_cloud)
{
    return k.strength(z1, z2, same_cloud);
}

inline double square_well_strength(const DdiKernel& k, double z1, double z2)
{
    return k.square_well(z1, z2);
}

} // namespace deit
