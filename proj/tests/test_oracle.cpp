#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "vortex/kinematics.hpp"
#include "vortex/oracle.hpp"
#include "vortex/specfun.hpp"
#include "vortex/wavefunctions.hpp"

using namespace vortex;
using oracle::ExpectationSpec;
using oracle::Measure;
using oracle::QuadratureResult;
using oracle::Weight;
using std::complex;
using wavefunctions::SpacetimePoint;

namespace {

PacketSpec mk(double sigma, double pbar, int ell, int n = 0,
              Regime regime = Regime::nonparaxial, double sigma_z = -1.0) {
    PacketSpec s;
    s.sigma_perp_p = sigma;
    s.sigma_z_p = sigma_z > 0 ? sigma_z : sigma;
    s.mean_p = pbar;
    s.ell = ell;
    s.n_radial = n;
    s.regime = regime;
    return s;
}

// Independent reference: iterated Simpson of w(p) |psi(p)|^2 /(2 eps) p_perp
// over the momentum half-plane (azimuthal 2 pi folded in).
double simpson_expectation(const PacketSpec& spec,
                           const std::function<double(double, double)>& w) {
    const double s = spec.sigma(), wz = s * spec.ebar() / spec.mass;
    const double pmax = s * (std::sqrt(double(spec.abs_ell() + 1)) + 10.0);
    const double zlo = spec.mean_p - 10.0 * wz, zhi = spec.mean_p + 10.0 * wz;
    const int nx = 600, nz = 600;
    const double hx = pmax / nx, hz = (zhi - zlo) / nz;
    double sum = 0.0;
    for (int i = 0; i <= nx; ++i) {
        const double pp = i * hx;
        const double cx = (i == 0 || i == nx) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        double row = 0.0;
        for (int j = 0; j <= nz; ++j) {
            const double pz = zlo + j * hz;
            const double cz = (j == 0 || j == nz) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            auto a = wavefunctions::psi_vortex_p(spec, {pp, 0.0, pz});
            if (a.is_zero()) continue;
            const double eps = kinematics::energy_exact_cyl(pp, pz, spec.mass);
            row += cz * std::exp(2.0 * a.log_mag) / (2.0 * eps) * w(pp, pz) * pp;
        }
        sum += cx * row;
    }
    return sum * hx * hz / 9.0 * 2.0 * M_PI / std::pow(2.0 * M_PI, 3);
}

}  // namespace

TEST_CASE("momentum-space norms are unity with honest error reports") {
    const PacketSpec panel[] = {
        mk(0.5, 0.0, 0),
        mk(0.5, 0.75, 1),
        mk(0.2, 0.0, 5),
        mk(0.2, 0.75, 2),
        mk(0.3, 0.25, 2, 0, Regime::nonrelativistic),
        mk(0.05, 0.8, 2, 0, Regime::paraxial),
        mk(0.05, 0.8, -2, 1, Regime::paraxial, 0.02),
        mk(0.08, 0.0, 3, 2, Regime::paraxial, 0.03),
    };
    for (const auto& spec : panel) {
        CAPTURE(regime_name(spec.regime));
        CAPTURE(spec.sigma_perp_p);
        CAPTURE(spec.ell);
        CAPTURE(spec.n_radial);
        QuadratureResult r = oracle::expectation(spec, Weight::one);
        CHECK(r.converged);
        CHECK_FALSE(r.exact);
        CHECK(r.evaluations > 0);
        CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(r.value.imag()) < 1e-14);
        // reported error must bound the actual deviation from the exact norm
        CHECK(std::abs(r.value.real() - 1.0) <= r.abs_error + r.truncation_bound + 1e-12);
        CHECK(r.truncation_bound < 1e-25);
    }
}

TEST_CASE("plain-measure norm equals twice the invariant-measure mean energy") {
    const PacketSpec spec = mk(0.5, 0.4, 1);
    ExpectationSpec plain_norm;
    plain_norm.weight = Weight::one;
    plain_norm.measure = Measure::plain;
    const double lhs = oracle::expectation(spec, plain_norm).real();
    const double rhs = 2.0 * oracle::expectation(spec, Weight::energy).real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("relativistic vortex moments match independent Bessel-ratio forms") {
    for (double sigma : {0.5, 0.2})
        for (int ell : {0, 1, 5})
            for (double pbar : {0.0, 0.75}) {
                CAPTURE(sigma);
                CAPTURE(ell);
                CAPTURE(pbar);
                const PacketSpec spec = mk(sigma, pbar, ell);
                const double chi = spec.chi();
                const double ratio =
                    specfun::bessel_k_ratio_real(ell + 2.0, ell + 1.0, chi);

                const double e_mean = oracle::expectation(spec, Weight::energy).real();
                CHECK(e_mean == doctest::Approx(spec.ebar() * ratio).epsilon(1e-7));

                QuadratureResult pz = oracle::expectation(spec, Weight::pz);
                if (pbar == 0.0)
                    CHECK(std::abs(pz.value.real()) < 1e-10);
                else
                    CHECK(pz.value.real() == doctest::Approx(pbar * ratio).epsilon(1e-7));

                const double pperp = oracle::expectation(spec, Weight::pperp).real();
                CHECK(pperp ==
                      doctest::Approx(kinematics::transverse_momentum_mean(spec)).epsilon(1e-7));
            }
}

TEST_CASE("nonrelativistic moments match Gaussian closed forms") {
    const double sigma = 0.3, pbar = 0.25;
    const int ell = 2;
    const PacketSpec spec = mk(sigma, pbar, ell, 0, Regime::nonrelativistic);
    const double e_mean = oracle::expectation(spec, Weight::energy).real();
    CHECK(e_mean ==
          doctest::Approx((pbar * pbar + sigma * sigma * (ell + 1.5)) / 2.0).epsilon(1e-8));
    CHECK(oracle::expectation(spec, Weight::pz).real() == doctest::Approx(pbar).epsilon(1e-8));
    CHECK(oracle::expectation(spec, Weight::pperp).real() ==
          doctest::Approx(sigma * specfun::gamma_ratio_half(ell)).epsilon(1e-8));
    CHECK(oracle::expectation(spec, Weight::pperp2).real() ==
          doctest::Approx(sigma * sigma * (ell + 1)).epsilon(1e-8));
}

TEST_CASE("Laguerre-Gaussian radial moments carry the 2n dependence") {
    // n = 0: <p_perp^2> = sigma^2 (|l|+1)
    const PacketSpec lg0 = mk(0.05, 0.8, 2, 0, Regime::paraxial);
    CHECK(oracle::expectation(lg0, Weight::pperp2).real() ==
          doctest::Approx(0.05 * 0.05 * 3.0).epsilon(1e-8));
    CHECK(oracle::expectation(lg0, Weight::pperp).real() ==
          doctest::Approx(0.05 * specfun::gamma_ratio_half(2)).epsilon(1e-8));
    CHECK(oracle::expectation(lg0, Weight::pz).real() == doctest::Approx(0.8).epsilon(1e-8));

    // n = 1, |l| = 3: the second moment is sigma^2 (2n+|l|+1) = 6 sigma^2
    // (not sigma^2 (n+|l|+1) = 5 sigma^2), and the first moment carries the
    // factor (|l|+7/4): both are the rigorous Gamma-Laguerre density moments.
    const double s = 0.05;
    const PacketSpec lg1 = mk(s, 0.8, 3, 1, Regime::paraxial);
    const double p2 = oracle::expectation(lg1, Weight::pperp2).real();
    CHECK(p2 == doctest::Approx(s * s * 6.0).epsilon(1e-8));
    CHECK(std::abs(p2 / (s * s) - 5.0) > 0.5);  // decisively rejects n+|l|+1
    const double r1 = std::exp(std::lgamma(3.0 + 1.5) - std::lgamma(3.0 + 2.0)) * (3.0 + 1.75);
    CHECK(oracle::expectation(lg1, Weight::pperp).real() ==
          doctest::Approx(s * r1).epsilon(1e-8));

    // paraxial mean energy: ebar + [sigma_perp^2 (2n+|l|+1) + sigma_z^2/2]/(2 ebar)
    const PacketSpec lgz = mk(0.05, 0.8, 3, 1, Regime::paraxial, 0.02);
    const double expect_e =
        lgz.ebar() + (0.05 * 0.05 * 6.0 + 0.02 * 0.02 / 2.0) / (2.0 * lgz.ebar());
    CHECK(oracle::expectation(lgz, Weight::energy).real() ==
          doctest::Approx(expect_e).epsilon(1e-10));
}

TEST_CASE("mean longitudinal velocity agrees with an independent Simpson rule") {
    const PacketSpec spec = mk(0.5, 0.75, 1);
    const double uz = oracle::expectation(spec, Weight::pz_over_energy).real();
    const double ref = simpson_expectation(
        spec, [&](double pp, double pz) {
            return pz / kinematics::energy_exact_cyl(pp, pz, spec.mass);
        });
    const double norm_ref = simpson_expectation(spec, [](double, double) { return 1.0; });
    CHECK(uz == doctest::Approx(ref / norm_ref).epsilon(1e-7));
    CHECK(uz > 0.0);
    CHECK(uz < 1.0);

    const PacketSpec rest = mk(0.5, 0.0, 1);
    CHECK(std::abs(oracle::expectation(rest, Weight::pz_over_energy).real()) < 1e-10);
}

TEST_CASE("overlaps: diagonal, analytic zeros, closed forms, hermiticity") {
    const PacketSpec a = mk(0.4, 0.3, 2);
    QuadratureResult diag = oracle::overlap(a, a);
    CHECK(diag.value.real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(diag.value.imag()) < 1e-12);

    // distinct vortex charges: exact azimuthal zero, no quadrature at all
    QuadratureResult zero = oracle::overlap(mk(0.4, 0.3, 2), mk(0.4, 0.3, 3));
    CHECK(zero.exact);
    CHECK(zero.value == complex<double>(0.0, 0.0));
    CHECK(zero.evaluations == 0);

    // paraxial radial orthogonality at fixed l
    const PacketSpec n0 = mk(0.05, 0.8, 3, 0, Regime::paraxial);
    const PacketSpec n1 = mk(0.05, 0.8, 3, 1, Regime::paraxial);
    CHECK(oracle::overlap(n1, n1).value.real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(oracle::overlap(n0, n1).value) < 1e-8);

    // relativistic packets of unequal spread: overlap has a closed Bessel form
    const double sa = 0.5, sb = 0.3, pbar = 0.4;
    const int l = 1;
    const PacketSpec pa = mk(sa, pbar, l), pb = mk(sb, pbar, l);
    const double sc = std::sqrt(2.0 / (1.0 / (sa * sa) + 1.0 / (sb * sb)));
    const double chic = 2.0 / (sc * sc);
    const auto kc = specfun::bessel_k_scaled(l + 1.0, chic);
    const auto ka = specfun::bessel_k_scaled(l + 1.0, pa.chi());
    const auto kb = specfun::bessel_k_scaled(l + 1.0, pb.chi());
    const double closed = std::exp((2.0 * l + 2.0) * std::log(sc) -
                                   (l + 1.0) * std::log(sa * sb) + kc.log_mag -
                                   0.5 * (ka.log_mag + kb.log_mag));
    QuadratureResult vab = oracle::overlap(pa, pb);
    CHECK(vab.value.real() == doctest::Approx(closed).epsilon(1e-7));
    QuadratureResult vba = oracle::overlap(pb, pa);
    CHECK(std::abs(vab.value - std::conj(vba.value)) < 1e-9);

    // nonrelativistic packets at different mean momenta: Gaussian overlap
    const double d = 0.3, sg = 0.3;
    QuadratureResult g = oracle::overlap(mk(sg, 0.2, 2, 0, Regime::nonrelativistic),
                                         mk(sg, 0.5, 2, 0, Regime::nonrelativistic));
    CHECK(g.value.real() ==
          doctest::Approx(std::exp(-d * d / (4.0 * sg * sg))).epsilon(1e-7));

    CHECK_THROWS_AS(oracle::overlap(mk(0.4, 0.3, 2),
                                    mk(0.4, 0.3, 2, 0, Regime::paraxial)),
                    std::invalid_argument);
}

TEST_CASE("Fourier oracle reproduces the closed-form position-space states") {
    SUBCASE("exact relativistic vortex") {
        const PacketSpec spec = mk(0.5, 0.4, 2);
        const SpacetimePoint pts[] = {
            {1.2, 0.3, 0.5, 0.0}, {2.8, -1.1, -1.5, 2.0}, {0.9, 2.0, 3.1, 4.5}};
        for (const auto& x : pts) {
            CAPTURE(x.rho);
            CAPTURE(x.t);
            QuadratureResult r = oracle::fourier_to_x(spec, x);
            CHECK(r.converged);
            const complex<double> closed = wavefunctions::psi_vortex_x(spec, x).to_complex();
            CHECK(std::abs(r.value - closed) <= 1e-6 * std::abs(closed));
        }
    }
    SUBCASE("nonrelativistic packet") {
        const PacketSpec spec = mk(0.3, 0.25, 2, 0, Regime::nonrelativistic);
        const SpacetimePoint x{3.5, 0.8, -2.0, 6.0};
        QuadratureResult r = oracle::fourier_to_x(spec, x);
        CHECK(r.converged);
        const complex<double> closed = wavefunctions::psi_nr_x(spec, x).to_complex();
        CHECK(std::abs(r.value - closed) <= 1e-6 * std::abs(closed));
    }
    SUBCASE("paraxial Laguerre-Gaussian with unequal spreads, negative l") {
        const PacketSpec spec = mk(0.05, 0.8, -2, 1, Regime::paraxial, 0.02);
        const double td = kinematics::diffraction_time_perp(spec);
        const SpacetimePoint x{30.0, 1.3, 0.625 * 0.3 * td + 5.0, 0.3 * td};
        QuadratureResult r = oracle::fourier_to_x(spec, x);
        CHECK(r.converged);
        const complex<double> closed = wavefunctions::psi_paraxial_x(spec, x).to_complex();
        CHECK(std::abs(r.value - closed) <= 1e-6 * std::abs(closed));
    }
}

TEST_CASE("fermion transform: structural zero plus per-component winding") {
    PacketSpec spec = mk(0.5, 0.4, 1);
    spec.helicity = 0.5;
    const auto orders = wavefunctions::fermion_azimuthal_orders(spec);
    const SpacetimePoint x0{1.1, 0.0, 0.4, 0.8};
    const double dphi = 0.9;
    const SpacetimePoint x1{1.1, dphi, 0.4, 0.8};
    const auto r0 = oracle::fourier_to_x_fermion(spec, x0);
    const auto r1 = oracle::fourier_to_x_fermion(spec, x1);
    CHECK(r0[1].exact);  // upper-block component orthogonal to the spin-up spinor
    CHECK(r0[1].value == complex<double>(0.0, 0.0));
    for (int c : {0, 2, 3}) {
        CAPTURE(c);
        CHECK(r0[size_t(c)].converged);
        CHECK(std::abs(r0[size_t(c)].value) > 0.0);
        const complex<double> wind =
            r1[size_t(c)].value / r0[size_t(c)].value;
        const complex<double> expected = std::polar(1.0, orders[size_t(c)] * dphi);
        CHECK(std::abs(wind - expected) < 1e-6);
    }
}

TEST_CASE("wave-equation residuals: convergence orders and the paraxial plateau") {
    SUBCASE("exact state: second-order convergence to zero") {
        const PacketSpec spec = mk(0.5, 0.4, 2);
        const SpacetimePoint x{2.6, 0.9, 0.8, 0.7};
        const auto r1 = oracle::pde_residual(spec, x, 0.1);
        const auto r2 = oracle::pde_residual(spec, x, 0.05);
        CHECK(r1.relative_residual / r2.relative_residual ==
              doctest::Approx(4.0).epsilon(0.15));
        CHECK(r2.relative_residual < 1e-2);
        CHECK_FALSE(r1.step_warning);
    }
    SUBCASE("paraxial state: h-independent plateau well above the exact state") {
        const PacketSpec par = mk(0.1, 0.8, 1, 0, Regime::paraxial);
        const PacketSpec exact = mk(0.1, 0.8, 1);
        const SpacetimePoint x{14.0, 0.4, 2.0, 1.5};
        const double h = 1e-2;  // 10^-2 Compton wavelengths
        const auto p1 = oracle::pde_residual(par, x, 2.0 * h);
        const auto p2 = oracle::pde_residual(par, x, h);
        const auto e2 = oracle::pde_residual(exact, x, h);
        CHECK(p1.relative_residual / p2.relative_residual ==
              doctest::Approx(1.0).epsilon(0.5));  // plateau, not O(h^2)
        CHECK(p2.relative_residual > 10.0 * e2.relative_residual);
    }
    SUBCASE("Schroedinger packet: second-order convergence") {
        const PacketSpec spec = mk(0.1, 0.3, 2, 0, Regime::nonrelativistic);
        const SpacetimePoint x{8.0, 1.2, 3.0, 10.0};
        const auto r1 = oracle::pde_residual(spec, x, 0.4);
        const auto r2 = oracle::pde_residual(spec, x, 0.2);
        CHECK(r1.relative_residual / r2.relative_residual ==
              doctest::Approx(4.0).epsilon(0.2));
    }
    SUBCASE("tiny steps raise the cancellation warning") {
        const PacketSpec spec = mk(0.5, 0.4, 0);
        CHECK(oracle::pde_residual(spec, {1.0, 0.0, 0.0, 0.0}, 5e-5).step_warning);
        CHECK_THROWS_AS(oracle::pde_residual(spec, {1.0, 0.0, 0.0, 0.0}, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("position-space paraxial norms are unity (Plancherel)") {
    const PacketSpec a = mk(0.05, 0.8, 2, 0, Regime::paraxial);
    CHECK(oracle::position_norm_paraxial(a, 0.0).value.real() ==
          doctest::Approx(1.0).epsilon(1e-6));

    const PacketSpec b = mk(0.05, 0.8, -2, 1, Regime::paraxial, 0.02);
    const double tdb = kinematics::diffraction_time_perp(b);
    CHECK(oracle::position_norm_paraxial(b, 0.6 * tdb).value.real() ==
          doctest::Approx(1.0).epsilon(1e-6));

    const PacketSpec c = mk(0.08, 0.0, 3, 2, Regime::paraxial, 0.03);
    const double tdc = kinematics::diffraction_time_perp(c);
    CHECK(oracle::position_norm_paraxial(c, 1.3 * tdc).value.real() ==
          doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(oracle::position_norm_paraxial(mk(0.5, 0.4, 1), 0.0),
                    std::invalid_argument);
}

TEST_CASE("determinism and tolerance self-consistency") {
    const PacketSpec spec = mk(0.35, 0.5, 3);
    QuadratureResult r1 = oracle::expectation(spec, Weight::energy);
    QuadratureResult r2 = oracle::expectation(spec, Weight::energy);
    CHECK(r1.value == r2.value);  // bitwise reproducible
    CHECK(r1.abs_error == r2.abs_error);
    CHECK(r1.evaluations == r2.evaluations);

    const SpacetimePoint x{1.5, 0.4, 0.7, 1.1};
    QuadratureResult f1 = oracle::fourier_to_x(spec, x);
    QuadratureResult f2 = oracle::fourier_to_x(spec, x);
    CHECK(f1.value == f2.value);

    // a looser run must sit within its own reported error of a tighter run
    QuadratureResult loose = oracle::expectation(spec, Weight::energy, 1e-6);
    QuadratureResult tight = oracle::expectation(spec, Weight::energy, 1e-10);
    CHECK(std::abs(loose.value - tight.value) <=
          2.0 * (loose.abs_error + tight.abs_error) + 1e-14 * std::abs(tight.value));
}

TEST_CASE("unreachable tolerances fail loudly, not silently") {
    const PacketSpec spec = mk(0.5, 0.4, 1);
    ExpectationSpec impossible;
    impossible.weight = Weight::one;
    impossible.measure = Measure::invariant;
    impossible.rel_tol = 0.0;
    CHECK_THROWS_AS(oracle::expectation(spec, impossible), std::runtime_error);

    QuadratureResult f = oracle::fourier_to_x(spec, {1.0, 0.0, 0.5, 0.5}, 0.0);
    CHECK_FALSE(f.converged);  // flagged instead of thrown
    CHECK(f.abs_error > 0.0);
}

TEST_CASE("fermion moment quadratures: magnitudes, signs, and vanishing dipole") {
    PacketSpec spec = mk(0.2, 0.6, 3);
    spec.helicity = 0.5;
    const auto mq = oracle::moment_quadrature_fermion(spec);

    const double mu_b = mq.mu_b_z.value.real();
    CHECK(mu_b > 0.0);
    CHECK(mu_b < 3.0 / (2.0 * spec.mass));
    CHECK(mu_b < 3.0 / (2.0 * spec.ebar()));  // the sigma^2 correction is negative
    CHECK(mu_b == doctest::Approx(3.0 / (2.0 * spec.ebar())).epsilon(0.15));

    const double uz = mq.mean_u_z.value.real();
    CHECK(uz > 0.0);
    CHECK(uz < 1.0);
    CHECK(uz == doctest::Approx(spec.ubar()).epsilon(0.1));

    const double mu_s = mq.mu_s_z.value.real();
    CHECK(mu_s > 0.0);
    CHECK(mu_s < 1.0 / (2.0 * spec.mass));
    PacketSpec flipped = spec;
    flipped.helicity = -0.5;
    const auto mqf = oracle::moment_quadrature_fermion(flipped);
    CHECK(mqf.mu_s_z.value.real() == doctest::Approx(-mu_s).epsilon(1e-10));

    CHECK(mq.dipole_transverse_residual < 1e-10);
    CHECK(mqf.dipole_transverse_residual < 1e-10);
}

TEST_CASE("orbital-moment correction matches its expansion at small spread") {
    // sigma/m = 0.02, l = 20, pbar = m: correction bracket (sigma^2/2m^2) *
    // (|l| + 1/2 + m^2/ebar^2) should match the quadrature's deficit of
    // mu_b relative to l/(2 ebar) to well within 5% of the correction.
    PacketSpec spec = mk(0.02, 1.0, 20);
    spec.helicity = 0.5;
    const auto mq = oracle::moment_quadrature_fermion(spec);
    const double mu_b = mq.mu_b_z.value.real();
    const double correction_quad = 1.0 - mu_b * 2.0 * spec.ebar() / 20.0;
    const double s2 = 0.02 * 0.02;
    const double m2_over_e2 = 1.0 / (spec.ebar() * spec.ebar());
    const double correction_series = (s2 / 2.0) * (20.0 + 0.5 + m2_over_e2);
    CHECK(correction_quad ==
          doctest::Approx(correction_series).epsilon(0.05));
}
