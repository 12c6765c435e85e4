#pragma once

#include <complex>

#include "vortex/log_complex.hpp"

namespace vortex::specfun {

// Scaled modified Bessel function of the second kind: e^z K_nu(z).
//
//  - nu: non-negative integer or half-integer, nu <= 10002.5
//  - z : complex with Re z > 0 (throws std::domain_error otherwise)
//
// Seeds at nu in {0,1} (or the elementary closed forms at nu in {1/2,3/2})
// are computed by the truncated large-argument asymptotic series for
// |z| >= 20 and by Gauss-Legendre quadrature of the integral representation
// below that; higher orders follow from the (stable, upward) three-term
// recurrence with on-the-fly rescaling accumulated in log scale.
// Relative error <= 1e-10 for real z and <= 1e-8 for complex z.
LogComplex bessel_k_scaled(double nu, std::complex<double> z);

// Ratio K_{nu_hi}(z) / K_{nu_lo}(z); the e^z scaling cancels exactly.
std::complex<double> bessel_k_ratio(double nu_hi, double nu_lo, std::complex<double> z);
double bessel_k_ratio_real(double nu_hi, double nu_lo, double z);

// Gamma(l + 3/2) / Gamma(l + 1) for integer 0 <= l <= 1e6, relative error
// <= 1e-12 (long-double running product; grows like sqrt(l)).
double gamma_ratio_half(long l);

// Generalized Laguerre polynomial L_n^alpha(x), n <= 100, alpha <= 1e4,
// x >= 0, by the three-term recurrence in n.
double laguerre(int n, int alpha, double x);

// Mean of sqrt(x) under the normalized density x^alpha [L_n^alpha(x)]^2
// e^{-x} on [0, inf). Equals Gamma(alpha + 3/2)/Gamma(alpha + 1) at n = 0;
// for n >= 1 it is evaluated by a panel quadrature that avoids the
// catastrophic cancellation of the closed gamma-function double sum.
// This is the radial profile factor behind Laguerre-Gaussian transverse
// means: <p_perp> = sigma * laguerre_sqrt_moment(n, |l|).
double laguerre_sqrt_moment(int n, int alpha);

// Bessel function of the first kind J_l(x), |l| <= 1e4, x >= 0, relative
// error <= 1e-10 for x <= 1e3 (Miller downward recurrence with the
// even-order normalization sum).
double bessel_j(int l, double x);

namespace detail {
// 30-point Gauss-Legendre nodes/weights on [-1, 1] (shared by the oracle).
struct GaussLegendre30 {
    double node[30];
    double weight[30];
};
const GaussLegendre30& gauss_legendre_30();
}  // namespace detail

}  // namespace vortex::specfun
