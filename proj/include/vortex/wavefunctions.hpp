#pragma once

#include <array>
#include <complex>

#include "vortex/log_complex.hpp"
#include "vortex/packet_spec.hpp"

namespace vortex::wavefunctions {

// Momentum-space evaluation point in cylindrical coordinates (units of m).
struct MomentumPoint {
    double p_perp = 0.0;  // >= 0
    double phi_p = 0.0;
    double p_z = 0.0;
};

// Position-space event in cylindrical coordinates (lengths/times in 1/m).
struct SpacetimePoint {
    double rho = 0.0;  // >= 0
    double phi_r = 0.0;
    double z = 0.0;
    double t = 0.0;
};

// Amplitudes are carried in log form; an underflowed-to-zero amplitude is
// the explicit log_mag = -inf state (LogComplex::is_zero()).
using Amplitude = LogComplex;

// Dirac bispinor (Dirac basis, upper/lower 2-spinor blocks).
struct Bispinor {
    std::array<std::complex<double>, 4> c{};
    double norm_squared() const;  // sum |c_i|^2, equals 2*energy
};

// The invariant complex distance parameter of the exact position-space
// packets: varsigma = sqrt((pbar_mu + i x_mu sigma^2)^2)/m, Re > 0 branch.
struct VarsigmaValue {
    std::complex<double> value{1.0, 0.0};
};

// --- non-relativistic packet -------------------------------------------
// Momentum space at time t (Schroedinger picture, kinetic energy p^2/2m):
//   (2 sqrt(pi)/sigma)^{3/2}/sqrt(|l|!) (p_perp/sigma)^{|l|}
//     * exp{ i l phi_p - (p - pbar zhat)^2/(2 sigma^2) - i (p^2/2m) t }
// normalized as  int d^3p/(2pi)^3 |psi|^2 = 1.
Amplitude psi_nr_p(const PacketSpec& spec, const MomentumPoint& q, double t);

// Position space, the exact closed-form Fourier transform of psi_nr_p
// (an exact free Schroedinger solution with Gouy phase arctan(t sigma^2/m)).
Amplitude psi_nr_x(const PacketSpec& spec, const SpacetimePoint& x);

// --- exact (non-paraxial) scalar packets --------------------------------
// Momentum-space profiles, normalized under the invariant measure
// int d^3p/(2pi)^3 (1/2eps) |psi|^2 = 1:
//   vortex: sqrt(8 pi^2/(sigma^{2|l|+2} |l|!)) p_perp^{|l|}
//           * exp{(m^2 - pbar.p)/sigma^2} e^{i l phi_p}
//           / sqrt(e^chi K_{|l|+1}(chi)),     chi = 2m^2/sigma^2
// psi_boson_p is the l = 0 case (independent of spec.ell).
Amplitude psi_boson_p(const PacketSpec& spec, const MomentumPoint& q);
Amplitude psi_vortex_p(const PacketSpec& spec, const MomentumPoint& q);

// varsigma(x): Re > 0 branch, Lorentz invariant, equals 1 at x = 0.
// Throws std::runtime_error if no branch has Re > 0 (unreachable for
// physical inputs; would indicate a caller bug).
VarsigmaValue varsigma(const PacketSpec& spec, const SpacetimePoint& x);

// Exact position-space packets (Klein-Gordon solutions):
//   vortex: e^{i l phi_r} (i rho)^{|l|} sigma^{|l|+1}
//           / (sqrt(2 |l|!) pi varsigma^{|l|+1})
//           * K_{|l|+1}(varsigma chi/2) / sqrt(e^chi K_{|l|+1}(chi))
// psi_boson_x is the l = 0 case.
Amplitude psi_boson_x(const PacketSpec& spec, const SpacetimePoint& x);
Amplitude psi_vortex_x(const PacketSpec& spec, const SpacetimePoint& x);

// --- paraxial Laguerre-Gaussian packets ----------------------------------
// Momentum space (time-independent profile; two independent spreads):
//   N_L (2 sqrt(pi)/sigma_perp) sqrt(2 sqrt(pi)/sigma_z) sqrt(2m)
//     * (p_perp/sigma_perp)^{|l|} L_n^{|l|}(p_perp^2/sigma_perp^2)
//     * exp{ i l phi_p - p_perp^2/(2 sigma_perp^2)
//            - (m^2/ebar^2)(p_z - pbar)^2/(2 sigma_z^2) }
// with N_L = sqrt(n!/(n+|l|)!), normalized as
// int d^3p/(2pi)^3 (1/2ebar) |psi|^2 = 1.
Amplitude psi_paraxial_p(const PacketSpec& spec, const MomentumPoint& q);

// Position space: diffracting Laguerre-Gaussian with widths
// sigma_perp(t) = sqrt(1+(t/t_dperp)^2)/sigma_perp (same for z) and the two
// Gouy phases -(2n+|l|+1) arctan(t/t_dperp) - (1/2) arctan(t/t_dz); equal
// spreads merge them into -(2n+|l|+3/2) arctan(t/t_d). Normalized as
// int d^3x 2ebar |psi|^2 = 1.
Amplitude psi_paraxial_x(const PacketSpec& spec, const SpacetimePoint& x);

// --- fermion --------------------------------------------------------------
// u(p) = (sqrt(eps+m) w, sqrt(eps-m) (p.sigma) w/|p|)^T with w the
// sigma_z eigenspinor for helicity = +-1/2 (spin quantized along the mean
// momentum axis zhat); |u|^2 = 2 eps.
Bispinor bispinor_u(const PacketSpec& spec, const MomentumPoint& q);
Bispinor bispinor_u_cartesian(double px, double py, double pz, double mass, double helicity);

// psi_fermion_p = u(p)/sqrt(2 eps) * psi_vortex_p: four amplitudes.
std::array<Amplitude, 4> psi_fermion_p(const PacketSpec& spec, const MomentumPoint& q);

// Azimuthal order m_c of each component of psi_fermion_p: component c
// equals (phi_p-independent radial factor) * e^{i m_c phi_p}.
std::array<int, 4> fermion_azimuthal_orders(const PacketSpec& spec);

// Residual of the bispinor current-derivative identity for spin states
// quantized along zhat:
//   ubar gamma_j du/dp_k - (dubar/dp_k) gamma_j u
//     = 2i [ (p_k/eps) (zeta x p)_j/(eps+m) + (zeta x e_j)_k ],
// zeta = 2 lambda zhat. Returns |finite-difference LHS - closed-form RHS|
// at central-difference step h (O(h^2) convergence).
double bispinor_current_identity_residual(const MomentumPoint& q, double mass,
                                          double helicity, int j, int k, double h);
// The closed-form right-hand side itself (for symmetry/lineality checks).
std::complex<double> bispinor_current_identity_rhs(const MomentumPoint& q, double mass,
                                                   double helicity, int j, int k);

}  // namespace vortex::wavefunctions
