#include "vortex/wavefunctions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vortex/kinematics.hpp"
#include "vortex/specfun.hpp"

namespace vortex::wavefunctions {

namespace {

double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

// Shared momentum-space vortex profile with an explicit |l| (psi_boson_p is
// the l = 0 case of the same expression regardless of spec.ell).
Amplitude vortex_p_impl(const PacketSpec& spec, const MomentumPoint& q, int ell) {
    const int l = std::abs(ell);
    const double m = spec.mass, sigma = spec.sigma();
    const double eps = kinematics::energy_exact_cyl(q.p_perp, q.p_z, m);
    // pbar.p = ebar*eps - pbar*p_z (four-product; >= m^2, equality at p = pbar)
    const double pbar_dot_p = spec.ebar() * eps - spec.mean_p * q.p_z;
    const double chi = spec.chi();

    if (l > 0 && q.p_perp == 0.0) return Amplitude::zero();

    const LogComplex khat = specfun::bessel_k_scaled(l + 1.0, chi);  // e^chi K_{l+1}(chi), real
    double log_mag = 0.5 * std::log(8.0 * M_PI * M_PI) - (l + 1.0) * std::log(sigma) -
                     0.5 * log_factorial(l) + (m * m - pbar_dot_p) / (sigma * sigma) -
                     0.5 * khat.log_mag;
    if (l > 0) log_mag += l * std::log(q.p_perp);
    return Amplitude(log_mag, double(ell) * q.phi_p);
}

// Laguerre value folded into (log|L|, sign-phase) so it can join a LogComplex.
struct LogAbsSign {
    double log_abs;
    double phase;  // 0 or pi
};

LogAbsSign log_laguerre(int n, int alpha, double x) {
    const double v = specfun::laguerre(n, alpha, x);
    if (v == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    return {std::log(std::abs(v)), v > 0 ? 0.0 : M_PI};
}

}  // namespace

double Bispinor::norm_squared() const {
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    return s;
}

// --- non-relativistic packet ---------------------------------------------

Amplitude psi_nr_p(const PacketSpec& spec, const MomentumPoint& q, double t) {
    const int l = spec.abs_ell();
    const double sigma = spec.sigma(), m = spec.mass;
    if (l > 0 && q.p_perp == 0.0) return Amplitude::zero();

    const double dz = q.p_z - spec.mean_p;
    const double p2 = q.p_perp * q.p_perp + q.p_z * q.p_z;
    double log_mag = 1.5 * std::log(2.0 * std::sqrt(M_PI) / sigma) - 0.5 * log_factorial(l) -
                     (q.p_perp * q.p_perp + dz * dz) / (2.0 * sigma * sigma);
    if (l > 0) log_mag += l * (std::log(q.p_perp) - std::log(sigma));
    const double phase = double(spec.ell) * q.phi_p - (p2 / (2.0 * m)) * t;
    return Amplitude(log_mag, phase);
}

Amplitude psi_nr_x(const PacketSpec& spec, const SpacetimePoint& x) {
    const int l = spec.abs_ell();
    const double sigma = spec.sigma(), m = spec.mass;
    if (l > 0 && x.rho == 0.0) return Amplitude::zero();

    const std::complex<double> D(1.0 / (sigma * sigma), x.t / m);  // sigma^-2 + i t/m
    const double ubar_nr = spec.mean_p / m;
    const double ebar_nr = spec.mean_p * spec.mean_p / (2.0 * m);
    const double zc = x.z - ubar_nr * x.t;

    Amplitude amp = Amplitude::exp_of(std::complex<double>(0.0, -ebar_nr * x.t + spec.mean_p * x.z +
                                                                    double(spec.ell) * x.phi_r) -
                                      0.5 * (x.rho * x.rho + zc * zc) / D);
    double log_mag = -0.75 * std::log(M_PI) - 0.5 * log_factorial(l) - (l + 1.5) * std::log(sigma);
    double phase = l * (M_PI / 2.0);  // the (i rho)^l factor's i^l
    if (l > 0) log_mag += l * std::log(x.rho);
    amp = amp * Amplitude(log_mag, phase);
    // 1/(sigma^-2 + i t/m)^{l + 3/2}
    amp = amp * Amplitude::from_complex(D).pow(-(l + 1.5));
    return amp;
}

// --- exact (non-paraxial) scalar packets ----------------------------------

Amplitude psi_boson_p(const PacketSpec& spec, const MomentumPoint& q) {
    return vortex_p_impl(spec, q, 0);
}

Amplitude psi_vortex_p(const PacketSpec& spec, const MomentumPoint& q) {
    return vortex_p_impl(spec, q, spec.ell);
}

VarsigmaValue varsigma(const PacketSpec& spec, const SpacetimePoint& x) {
    const double m = spec.mass, s2 = spec.sigma() * spec.sigma();
    const double x_sq = x.t * x.t - x.rho * x.rho - x.z * x.z;          // Minkowski x_mu x^mu
    const double pbar_dot_x = spec.ebar() * x.t - spec.mean_p * x.z;   // pbar_mu x^mu
    const std::complex<double> sq(m * m - s2 * s2 * x_sq, 2.0 * s2 * pbar_dot_x);
    std::complex<double> root = std::sqrt(sq);  // principal branch, Re >= 0
    if (root.real() <= 0.0) root = -root;
    if (root.real() <= 0.0)
        throw std::runtime_error("varsigma: no branch with positive real part");
    return VarsigmaValue{root / m};
}

namespace {

Amplitude vortex_x_impl(const PacketSpec& spec, const SpacetimePoint& x, int ell) {
    const int l = std::abs(ell);
    const double sigma = spec.sigma();
    const double chi = spec.chi();
    if (l > 0 && x.rho == 0.0) return Amplitude::zero();

    const std::complex<double> vs = varsigma(spec, x).value;  // ell-independent
    const std::complex<double> w = vs * (chi / 2.0);  // varsigma m^2/sigma^2, Re > 0

    const LogComplex khat_w = specfun::bessel_k_scaled(l + 1.0, w);    // e^w K_{l+1}(w)
    const LogComplex khat_chi = specfun::bessel_k_scaled(l + 1.0, chi);

    // K_{l+1}(w)/sqrt(K_{l+1}(chi)) carried in log form: the unscaled-K
    // exponents combine into exp{(chi/2)(1 - Re varsigma)} <= 1.
    double log_mag = khat_w.log_mag - w.real() + chi / 2.0 - 0.5 * khat_chi.log_mag;
    double phase = khat_w.phase - w.imag();

    log_mag += (l + 1.0) * std::log(sigma) - 0.5 * std::log(2.0) - 0.5 * log_factorial(l) -
               std::log(M_PI) - (l + 1.0) * std::log(std::abs(vs));
    phase += -(l + 1.0) * std::arg(vs) + l * (M_PI / 2.0) + double(ell) * x.phi_r;
    if (l > 0) log_mag += l * std::log(x.rho);
    return Amplitude(log_mag, phase);
}

}  // namespace

Amplitude psi_boson_x(const PacketSpec& spec, const SpacetimePoint& x) {
    return vortex_x_impl(spec, x, 0);
}

Amplitude psi_vortex_x(const PacketSpec& spec, const SpacetimePoint& x) {
    return vortex_x_impl(spec, x, spec.ell);
}

// --- paraxial Laguerre-Gaussian packets ------------------------------------

Amplitude psi_paraxial_p(const PacketSpec& spec, const MomentumPoint& q) {
    const int l = spec.abs_ell(), n = spec.n_radial;
    const double sp = spec.sigma_perp_p, sz = spec.sigma_z_p;
    const double m = spec.mass, ebar = spec.ebar();
    if (l > 0 && q.p_perp == 0.0) return Amplitude::zero();

    const double xi = q.p_perp * q.p_perp / (sp * sp);
    const double dz = q.p_z - spec.mean_p;
    const LogAbsSign lag = log_laguerre(n, l, xi);
    if (std::isinf(lag.log_abs)) return Amplitude::zero();

    double log_mag = 0.5 * (log_factorial(n) - log_factorial(n + l)) +
                     std::log(2.0 * std::sqrt(M_PI) / sp) +
                     0.5 * std::log(2.0 * std::sqrt(M_PI) / sz) + 0.5 * std::log(2.0 * m) +
                     lag.log_abs - xi / 2.0 -
                     (m * m / (ebar * ebar)) * dz * dz / (2.0 * sz * sz);
    if (l > 0) log_mag += l * (std::log(q.p_perp) - std::log(sp));
    return Amplitude(log_mag, double(spec.ell) * q.phi_p + lag.phase);
}

Amplitude psi_paraxial_x(const PacketSpec& spec, const SpacetimePoint& x) {
    const int l = spec.abs_ell(), n = spec.n_radial;
    const double m = spec.mass, ebar = spec.ebar(), ubar = spec.ubar();
    if (l > 0 && x.rho == 0.0) return Amplitude::zero();

    const double td_p = kinematics::diffraction_time_perp(spec);
    const double td_z = kinematics::diffraction_time_z(spec);
    const double tp = x.t / td_p, tz = x.t / td_z;
    const double w_p = std::sqrt(1.0 + tp * tp) / spec.sigma_perp_p;  // sigma_perp(t)
    const double w_z = std::sqrt(1.0 + tz * tz) / spec.sigma_z_p;     // sigma_z(t)

    const double xi = x.rho * x.rho / (w_p * w_p);
    const double zeta = (ebar * ebar / (m * m)) * (x.z - ubar * x.t) * (x.z - ubar * x.t);
    const LogAbsSign lag = log_laguerre(n, l, xi);
    if (std::isinf(lag.log_abs)) return Amplitude::zero();

    double log_mag = 0.5 * (log_factorial(n) - log_factorial(n + l)) - 0.75 * std::log(M_PI) -
                     0.5 * std::log(2.0 * m) - std::log(w_p) - 0.5 * std::log(w_z) +
                     lag.log_abs - xi / 2.0 - zeta / (2.0 * w_z * w_z);
    if (l > 0) log_mag += l * (std::log(x.rho) - std::log(w_p));

    double phase = (2 * n + l) * (M_PI / 2.0)  // i^{2n+|l|}
                   + double(spec.ell) * x.phi_r - (ebar * x.t - spec.mean_p * x.z) -
                   (2 * n + l + 1) * std::atan(tp) - 0.5 * std::atan(tz) +
                   tp * xi / 2.0 + tz * zeta / (2.0 * w_z * w_z) + lag.phase;
    return Amplitude(log_mag, phase);
}

// --- fermion ----------------------------------------------------------------

Bispinor bispinor_u_cartesian(double px, double py, double pz, double mass, double helicity) {
    if (helicity != 0.5 && helicity != -0.5)
        throw std::invalid_argument("bispinor_u: helicity must be +-1/2");
    const double eps = kinematics::energy_exact(px, py, pz, mass);
    const double a = std::sqrt(eps + mass);
    // Lower block (p.sigma) w / sqrt(eps+m); the identity
    // sqrt(eps-m)/|p| = 1/sqrt(eps+m) removes the p -> 0 singularity.
    Bispinor u;
    if (helicity > 0) {
        u.c[0] = {a, 0.0};
        u.c[1] = {0.0, 0.0};
        u.c[2] = std::complex<double>(pz, 0.0) / a;
        u.c[3] = std::complex<double>(px, py) / a;
    } else {
        u.c[0] = {0.0, 0.0};
        u.c[1] = {a, 0.0};
        u.c[2] = std::complex<double>(px, -py) / a;
        u.c[3] = std::complex<double>(-pz, 0.0) / a;
    }
    return u;
}

Bispinor bispinor_u(const PacketSpec& spec, const MomentumPoint& q) {
    return bispinor_u_cartesian(q.p_perp * std::cos(q.phi_p), q.p_perp * std::sin(q.phi_p),
                                q.p_z, spec.mass, spec.helicity);
}

std::array<Amplitude, 4> psi_fermion_p(const PacketSpec& spec, const MomentumPoint& q) {
    const Amplitude scalar = psi_vortex_p(spec, q);
    const Bispinor u = bispinor_u(spec, q);
    const double eps = kinematics::energy_exact_cyl(q.p_perp, q.p_z, spec.mass);
    const double inv_sqrt = 1.0 / std::sqrt(2.0 * eps);
    std::array<Amplitude, 4> out;
    for (int i = 0; i < 4; ++i)
        out[i] = scalar * Amplitude::from_complex(u.c[i]) * inv_sqrt;
    return out;
}

std::array<int, 4> fermion_azimuthal_orders(const PacketSpec& spec) {
    const int l = spec.ell;
    // The identically-zero component (index 1 for +1/2, 0 for -1/2) carries
    // the scalar's order l by convention.
    if (spec.helicity > 0) return {l, l, l, l + 1};
    return {l, l, l - 1, l};
}

namespace {

// ubar gamma_j v in the Dirac basis: gamma^0 gamma^j = [[0, s_j], [s_j, 0]],
// so ubar gamma_j v = uA^dag s_j vB + uB^dag s_j vA.
std::complex<double> ubar_gamma_v(const Bispinor& u, int j, const Bispinor& v) {
    auto pauli_dot = [&](const std::complex<double>* a, const std::complex<double>* b) {
        using C = std::complex<double>;
        const C I(0.0, 1.0);
        switch (j) {
            case 1: return std::conj(a[0]) * b[1] + std::conj(a[1]) * b[0];
            case 2: return -I * std::conj(a[0]) * b[1] + I * std::conj(a[1]) * b[0];
            case 3: return std::conj(a[0]) * b[0] - std::conj(a[1]) * b[1];
            default: throw std::invalid_argument("pauli index must be 1..3");
        }
    };
    return pauli_dot(&u.c[0], &v.c[2]) + pauli_dot(&u.c[2], &v.c[0]);
}

}  // namespace

std::complex<double> bispinor_current_identity_rhs(const MomentumPoint& q, double mass,
                                                   double helicity, int j, int k) {
    if (j < 1 || j > 3 || k < 1 || k > 3)
        throw std::invalid_argument("bispinor identity: indices must be 1..3");
    const double px = q.p_perp * std::cos(q.phi_p), py = q.p_perp * std::sin(q.phi_p),
                 pz = q.p_z;
    const double eps = kinematics::energy_exact(px, py, pz, mass);
    const double zeta = 2.0 * helicity;  // zeta = 2 lambda zhat
    const double p[4] = {0.0, px, py, pz};
    // (zeta x p) = 2 lambda (zhat x p) = 2 lambda (-py, px, 0)
    const double zxp[4] = {0.0, -zeta * py, zeta * px, 0.0};
    // (zeta x e_j)_k = 2 lambda eps_{3jk}
    const double eps3jk = (j == 1 && k == 2) ? 1.0 : (j == 2 && k == 1) ? -1.0 : 0.0;
    const double value = (p[k] / eps) * zxp[j] / (eps + mass) + zeta * eps3jk;
    return std::complex<double>(0.0, 2.0 * value);
}

double bispinor_current_identity_residual(const MomentumPoint& q, double mass,
                                          double helicity, int j, int k, double h) {
    const double px = q.p_perp * std::cos(q.phi_p), py = q.p_perp * std::sin(q.phi_p),
                 pz = q.p_z;
    double pp[4] = {0.0, px, py, pz}, pm[4] = {0.0, px, py, pz};
    pp[k] += h;
    pm[k] -= h;
    const Bispinor u = bispinor_u_cartesian(px, py, pz, mass, helicity);
    const Bispinor up = bispinor_u_cartesian(pp[1], pp[2], pp[3], mass, helicity);
    const Bispinor um = bispinor_u_cartesian(pm[1], pm[2], pm[3], mass, helicity);
    Bispinor du;
    for (int i = 0; i < 4; ++i) du.c[i] = (up.c[i] - um.c[i]) / (2.0 * h);
    const std::complex<double> lhs = ubar_gamma_v(u, j, du) - ubar_gamma_v(du, j, u);
    return std::abs(lhs - bispinor_current_identity_rhs(q, mass, helicity, j, k));
}

}  // namespace vortex::wavefunctions
