#pragma once

#include "vortex/four_vector.hpp"
#include "vortex/packet_spec.hpp"

namespace vortex::kinematics {

// Relativistic dispersion: eps = sqrt(p^2 + m^2).
double energy_exact(double px, double py, double pz, double mass);
double energy_exact_cyl(double p_perp, double p_z, double mass);

// Second-order expansion of the energy around the mean momentum pbar zhat:
//   eps ~ ebar + ubar (p_z - pbar)
//       + [p_perp^2 + (1 - ubar^2)(p_z - pbar)^2] / (2 ebar),
// the transverse/longitudinal split of the (delta_ij - ubar_i ubar_j)
// projector. Defect relative to energy_exact is cubic in |p - pbar zhat|.
double energy_paraxial(double px, double py, double pz, const PacketSpec& spec);
double energy_paraxial_cyl(double p_perp, double p_z, const PacketSpec& spec);

// Mean transverse momentum <p_perp> of the packet, by regime:
//  - nonrelativistic: sigma * r(|l|) with r(l) = Gamma(l+3/2)/Gamma(l+1)
//  - nonparaxial:     sigma * r(|l|) * K_{|l|+3/2}(chi)/K_{|l|+1}(chi)
//  - paraxial:        sigma_perp * r(n + |l|)
double transverse_momentum_mean(const PacketSpec& spec);

// Opening angle theta_0 = arctan(<p_perp>/pbar) of a moving packet.
// Throws std::domain_error for pbar = 0 (the angle is undefined at rest).
double opening_angle(const PacketSpec& spec);

// Diffraction (Rayleigh) times t_d = ebar/sigma^2 for each spread. The
// longitudinal dispersion is softer by m^2/ebar^2 but acts on a spread
// that is wider by the inverse factor, so both times share one form and
// coincide for equal spreads (single Gouy phase).
double diffraction_time_perp(const PacketSpec& spec);
double diffraction_time_z(const PacketSpec& spec);

// Invariant spreading parameter t/t_d = t sigma^2/ebar = tau sigma^2/m
// (tau the proper time); unchanged by longitudinal boosts.
double t_over_td(double t, const PacketSpec& spec);

}  // namespace vortex::kinematics
