#pragma once

// Brute-force verification engine: deterministic adaptive quadrature of
// momentum-space expectation values, numerical Hankel/Fourier transforms to
// position space, position-space norms, fermion moment integrals, and
// finite-difference wave-equation residuals. Everything here is independent
// of the closed-form observable formulas it is used to check: only the
// momentum-space state evaluators and elementary kinematics are shared.

#include <array>
#include <complex>

#include "vortex/packet_spec.hpp"
#include "vortex/wavefunctions.hpp"

namespace vortex::oracle {

using wavefunctions::SpacetimePoint;

struct QuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double abs_error = 0.0;         // quadrature error estimate (>= 0)
    double truncation_bound = 0.0;  // bound on the discarded tail beyond the cutoff
    long evaluations = 0;
    bool converged = true;  // false when the tolerance was not reached
    bool exact = false;     // true when produced analytically (no quadrature ran)

    double real() const { return value.real(); }
};

// Closed registry of expectation weights w(p) evaluated at (p_perp, p_z).
// No arbitrary integrand injection: config files can only name these.
enum class Weight {
    one,             // 1 (norm)
    energy,          // eps(p) per regime dispersion
    pz,              // p_z
    pz_over_energy,  // p_z / eps  (mean velocity <u_z>)
    pperp,           // p_perp
    pperp2,          // p_perp^2
    inv_two_energy,  // 1/(2 eps)
    spin_bracket_z,  // [(eps+m) + p_z^2/(eps+m)] / (2 eps)^2  (helicity factor excluded)
};

// d^3p/(2pi)^3 times: 1/(2 eps) (invariant), 1 (plain), or 1/(2 ebar) (fixed).
enum class Measure { invariant, plain, fixed_ebar };

// The measure each regime's states are normalized under.
Measure natural_measure(Regime regime);

struct ExpectationSpec {
    Weight weight = Weight::one;
    Measure measure = Measure::invariant;
    double rel_tol = 1e-10;
};

// <w(p)> = integral d^3p/(2pi)^3 measure(p) w(p) |psi(p)|^2, azimuthal part
// analytic (2 pi). Deterministic: identical inputs give identical results.
// The two-argument form uses the regime's natural measure.
QuadratureResult expectation(const PacketSpec& spec, const ExpectationSpec& what);
QuadratureResult expectation(const PacketSpec& spec, Weight weight, double rel_tol = 1e-10);

// <a|b> = integral d^3p/(2pi)^3 measure(p) conj(psi_a) psi_b under a's natural
// measure. Distinct vortex charges give an exact analytic zero (flagged
// `exact`); both specs must share mass and regime.
QuadratureResult overlap(const PacketSpec& a, const PacketSpec& b, double rel_tol = 1e-10);

// psi(x) = integral d^3p/(2pi)^3 measure(p) psi(p) exp(-i eps t + i p.r), the
// azimuthal integral reduced to a Hankel kernel i^{|l|} J_{|l|}(p_perp rho)
// e^{i l phi_r}. Per regime: exact dispersion & 1/(2 eps); quadratic
// dispersion & 1/(2 ebar); Schroedinger dispersion & plain measure.
QuadratureResult fourier_to_x(const PacketSpec& spec, const SpacetimePoint& x,
                              double rel_tol = 1e-8);

// Fermion components: psi_c(x) = integral d^3p/(2pi)^3 u_c(p)/(2 eps) psi(p)
// e^{-i p x}; component c carries azimuthal order m_c (fermion_azimuthal_orders).
std::array<QuadratureResult, 4> fourier_to_x_fermion(const PacketSpec& spec,
                                                     const SpacetimePoint& x,
                                                     double rel_tol = 1e-8);

// integral d^3x 2 ebar |psi_par(x, t)|^2 by position-space quadrature
// (azimuthal 2 pi analytic) — the Plancherel counterpart of the p-space norm.
QuadratureResult position_norm_paraxial(const PacketSpec& spec, double t,
                                        double rel_tol = 1e-8);

struct PdeResidual {
    double relative_residual = 0.0;  // |(wave operator) psi| / scale at x
    double scale = 0.0;              // m^2 |psi| (KG) or |psi| (pbar^2+3 sigma^2)/2m
    bool step_warning = false;       // h below 1e-4 Compton wavelengths
};

// Central finite-difference residual of the closed-form position-space state:
// (d_t^2 - laplacian + m^2) psi for relativistic regimes (exact states solve it,
// paraxial states only approximately); (i d_t + laplacian/2m) psi for the
// Schroedinger packet.
PdeResidual pde_residual(const PacketSpec& spec, const SpacetimePoint& x, double h);

struct FermionMomentQuadrature {
    QuadratureResult mu_b_z;   // l <1/(2 eps)>            (orbital magnetic moment)
    QuadratureResult mu_s_z;   // 2 lambda <spin bracket>  (spin magnetic moment)
    QuadratureResult mean_u_z; // <p_z/eps>                (drives the dipole <u> t)
    // Largest |azimuthally averaged transverse component| of the two
    // candidate dipole terms (phase-gradient and spin-vortex); both must
    // vanish by symmetry.
    double dipole_transverse_residual = 0.0;
};

FermionMomentQuadrature moment_quadrature_fermion(const PacketSpec& spec,
                                                  double rel_tol = 1e-10);

}  // namespace vortex::oracle
