#pragma once

#include <cmath>

namespace vortex::units {

// Natural units hbar = c = 1 with the particle mass as the internal energy
// unit (m = 1 internally). The internal length/time unit is therefore the
// reduced Compton wavelength lambda_c = hbar/(m c).
inline constexpr double lambda_c_pm = 0.3862;            // electron, picometres
inline constexpr double lambda_c_nm = lambda_c_pm * 1e-3;  // nanometres
inline constexpr double bohr_radius_nm = 0.053;
inline constexpr double electron_mass_keV = 510.99895;

// lengths ---------------------------------------------------------------
inline double length_nm_to_internal(double nm) { return nm / lambda_c_nm; }
inline double length_internal_to_nm(double internal) { return internal * lambda_c_nm; }

// A beam focused to transverse size sigma_perp has transverse momentum
// spread sigma_p = 1/sigma_perp, i.e. sigma_p/m = lambda_c/sigma_perp.
inline double sigma_perp_nm_to_sigma_over_m(double sigma_perp_nm) {
    return lambda_c_nm / sigma_perp_nm;
}
inline double sigma_over_m_to_sigma_perp_nm(double sigma_over_m) {
    return lambda_c_nm / sigma_over_m;
}

// kinematics ------------------------------------------------------------
inline double kinetic_keV_to_pbar_over_m(double kinetic_keV) {
    double gamma = 1.0 + kinetic_keV / electron_mass_keV;
    double g2 = gamma * gamma - 1.0;
    return g2 > 0 ? std::sqrt(g2) : 0.0;
}
inline double pbar_over_m_to_kinetic_keV(double pbar_over_m) {
    return (std::sqrt(1.0 + pbar_over_m * pbar_over_m) - 1.0) * electron_mass_keV;
}

}  // namespace vortex::units
