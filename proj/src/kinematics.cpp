#include "vortex/kinematics.hpp"

#include <cmath>
#include <stdexcept>

#include "vortex/specfun.hpp"

namespace vortex::kinematics {

double energy_exact(double px, double py, double pz, double mass) {
    return std::sqrt(px * px + py * py + pz * pz + mass * mass);
}

double energy_exact_cyl(double p_perp, double p_z, double mass) {
    return std::sqrt(p_perp * p_perp + p_z * p_z + mass * mass);
}

double energy_paraxial_cyl(double p_perp, double p_z, const PacketSpec& spec) {
    double ebar = spec.ebar(), ubar = spec.ubar();
    double dz = p_z - spec.mean_p;
    return ebar + ubar * dz + (p_perp * p_perp + (1.0 - ubar * ubar) * dz * dz) / (2.0 * ebar);
}

double energy_paraxial(double px, double py, double pz, const PacketSpec& spec) {
    return energy_paraxial_cyl(std::hypot(px, py), pz, spec);
}

double transverse_momentum_mean(const PacketSpec& spec) {
    int l = spec.abs_ell();
    switch (spec.regime) {
        case Regime::nonrelativistic:
            return spec.sigma() * specfun::gamma_ratio_half(l);
        case Regime::paraxial:
            // sqrt-moment of the full Laguerre-Gaussian radial density; for
            // n = 0 this reduces to the plain gamma ratio.
            return spec.sigma_perp_p * specfun::laguerre_sqrt_moment(spec.n_radial, l);
        case Regime::nonparaxial:
        default:
            return spec.sigma() * specfun::gamma_ratio_half(l) *
                   specfun::bessel_k_ratio_real(l + 1.5, l + 1.0, spec.chi());
    }
}

double opening_angle(const PacketSpec& spec) {
    if (!(spec.mean_p > 0.0))
        throw std::domain_error(
            "opening_angle: undefined for a packet at rest (mean_p = 0)");
    return std::atan(transverse_momentum_mean(spec) / spec.mean_p);
}

double diffraction_time_perp(const PacketSpec& spec) {
    return spec.ebar() / (spec.sigma_perp_p * spec.sigma_perp_p);
}

double diffraction_time_z(const PacketSpec& spec) {
    // The longitudinal dispersion curvature m^2/ebar^3 acts on an effective
    // spread sigma_z ebar/m, so the two factors of ebar/m cancel and the
    // spreading time has the same form as the transverse one.
    return spec.ebar() / (spec.sigma_z_p * spec.sigma_z_p);
}

double t_over_td(double t, const PacketSpec& spec) {
    return t / diffraction_time_perp(spec);
}

}  // namespace vortex::kinematics
