#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "vortex/four_vector.hpp"
#include "vortex/packet_spec.hpp"

// Closed-form and small-spread-expansion observables of the vortex packets.
// Every quantity that has both an exact Bessel-ratio form and a truncated
// expansion is exposed in both forms, so the truncation error is always
// visible instead of silently mixed in. Brute-force quadrature counterparts
// live in the oracle module; nothing here integrates anything beyond the
// one-dimensional radial profile factor in specfun.
namespace vortex::observables {

enum class Method { closed_form, expansion, quadrature };

// "closed-form" | "expansion-O(sigma^2/m^2)" | "quadrature"
const char* method_name(Method m);

// One named result with bookkeeping. `value` carries scalar observables;
// vector observables (magnetic moments, dipole) set is_vector and fill vec,
// with value mirroring the z-component for flat table output.
struct ObservableReport {
    std::string name;
    double value = 0.0;
    std::array<double, 3> vec{0.0, 0.0, 0.0};
    bool is_vector = false;
    Method method = Method::closed_form;
    // lowest neglected power of (sigma/m) for expansion reports, 0 otherwise
    int truncation_order = 0;
    PacketSpec spec_snapshot;
    double error_estimate = 0.0;  // always >= 0
    std::string warning;          // non-empty when an expansion is out of its depth
};

// Transverse/radial second moments of the paraxial Laguerre-Gaussian state
// at time t (Cartesian entries follow from azimuthal symmetry).
struct MomentSet {
    double mean_rho = 0.0;
    double mean_rho2 = 0.0;
    double mean_pperp = 0.0;
    double mean_pperp2 = 0.0;
    double mean_x2 = 0.0;   // = mean_rho2 / 2
    double mean_px2 = 0.0;  // = mean_pperp2 / 2
};

struct BeamGeometry {
    double sigma_perp_x = 0.0;  // transverse width sigma_perp(t) = sqrt(1+(t/td)^2)/sigma
    double sigma_z_inv = 0.0;   // invariant length sigma_z(t); lab length is (m/ebar) times it
    double mean_rho = 0.0;      // sigma_perp(t) * radial sqrt-moment
    double t_d_perp = 0.0;
    double t_d_z = 0.0;
    double gouy_phase = 0.0;  // accumulated (2n+|l|+1) atan(t/td_perp) + atan(t/td_z)/2
};

// --- exact momentum moments of the nonparaxial state -------------------------

// K_{|l|+2}(chi)/K_{|l|+1}(chi): the factor by which <p^mu> exceeds pbar^mu.
double momentum_ratio_exact(const PacketSpec& spec);
// 1 + (3/4 + |l|/2) sigma^2/m^2, the O(sigma^4)-truncated form of the same.
double momentum_ratio_expansion(const PacketSpec& spec);

// <p^mu> = (ebar, 0, 0, pbar) * momentum_ratio_exact. Nonparaxial only.
FourVector mean_four_momentum(const PacketSpec& spec);

// m_l = sqrt(<e>^2 - <p>^2) = m * momentum_ratio_exact. Always > m.
double invariant_mass(const PacketSpec& spec);

// (m_l - m_0)/m_0 as the exact double Bessel ratio
// K_{|l|+2} K_1 / (K_{|l|+1} K_2) - 1, and its leading term (|l|/2) sigma^2/m^2.
// The denominator mass is the l = 0 packet's, not the plane-wave mass.
double mass_excess_exact(const PacketSpec& spec);
double mass_excess_expansion(const PacketSpec& spec);

// <p_perp> in all regimes (delegates to kinematics; exact in each regime), and
// the nonparaxial O(sigma^2/m^2) expansion sigma G(|l|) (1 + (5+4|l|)/16 s^2).
double mean_pperp_exact(const PacketSpec& spec);
double mean_pperp_expansion(const PacketSpec& spec);

// Radius of the transverse intensity maximum, sqrt(|l|)/sigma to leading
// order; rho_peak * <p_perp> -> |l| for large |l|.
double peak_radius_leading(const PacketSpec& spec);

// --- fermion expansion observables -------------------------------------------

// Orbital magnetic moment, expansion about the paraxial limit:
//   mu_b = zhat l/(2 ebar) [1 - (sigma^2/2m^2)(|l| + 1/2 + m^2/ebar^2)].
// The leading variant drops the bracket. Signed l; correction is negative.
std::array<double, 3> magnetic_moment_orbital(const PacketSpec& spec);
std::array<double, 3> magnetic_moment_orbital_leading(const PacketSpec& spec);

// Spin magnetic moment for a helicity eigenstate (zeta = 2 lambda zhat):
//   mu_s = zeta/(2 ebar) [1 - (sigma^2/2m^2) B(ebar/m, |l|)]
// with the full frame-dependent bracket B.
std::array<double, 3> magnetic_moment_spin(const PacketSpec& spec);
std::array<double, 3> magnetic_moment_spin_leading(const PacketSpec& spec);

// Spin-orbit strength Delta: leading |l|-form (grows with |l|), and the
// opening-angle form (1 - m/ebar) sin^2 theta_0 (requires pbar > 0).
double sok_delta_leading(const PacketSpec& spec);
double sok_delta_angle(const PacketSpec& spec);

// d_f = <u> t zhat with <u> = ubar (1 + O(|l| sigma^2/m^2)); exactly 0 at t=0.
std::array<double, 3> electric_dipole(const PacketSpec& spec, double t);
double mean_velocity_leading(const PacketSpec& spec);

// --- paraxial Laguerre-Gaussian moments --------------------------------------

// Exact transverse moments at time t. Second moments carry 2n + |l| + 1 and
// the sqrt-moments use the full radial density (specfun::laguerre_sqrt_moment).
MomentSet lg_moments(const PacketSpec& spec, double t);

// (Delta rho * Delta p_perp, Delta x * Delta p_x) at time t:
//   Delta x Delta p_x  = (1/2) sqrt(1+(t/td)^2) (2n + |l| + 1)
//   Delta rho Delta p_perp = sqrt(1+(t/td)^2) (2n + |l| + 1 - R^2)
// where R is the radial sqrt-moment. Minimum 1/2 only for n = l = 0, t = 0.
std::pair<double, double> uncertainty_products(const PacketSpec& spec, double t);

BeamGeometry beam_geometry(const PacketSpec& spec, double t);

// --- figures of merit ---------------------------------------------------------

// |l| sigma^2/m^2, and the same quantity expressed through the beam radius as
// l^2 lambda_c^2/<rho>^2 (they agree when <rho> = sqrt(|l|)/sigma).
double nonparaxiality_parameter(const PacketSpec& spec);
double nonparaxiality_from_radius(int ell, double mean_rho, double mass);

// --- aggregate ----------------------------------------------------------------

// Every observable defined for the spec's regime, with method tags and error
// estimates, evaluated at time t where time enters.
std::vector<ObservableReport> full_report(const PacketSpec& spec, double t = 0.0);

}  // namespace vortex::observables
