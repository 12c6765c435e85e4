#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortex/kinematics.hpp"
#include "vortex/observables.hpp"
#include "vortex/oracle.hpp"
#include "vortex/specfun.hpp"
#include "vortex/units.hpp"

using namespace vortex;
namespace obs = vortex::observables;
using obs::Method;
using obs::ObservableReport;

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

const ObservableReport& row(const std::vector<ObservableReport>& rep, const std::string& name) {
    for (const auto& r : rep)
        if (r.name == name) return r;
    REQUIRE_MESSAGE(false, "missing report row: " << name);
    static ObservableReport dummy;
    return dummy;
}

bool has_row(const std::vector<ObservableReport>& rep, const std::string& name) {
    for (const auto& r : rep)
        if (r.name == name) return true;
    return false;
}

}  // namespace

TEST_CASE("momentum ratio: frozen low-order values and exact/expansion ordering") {
    // sigma/m = 0.05, l = 0: expansion is 1 + 3/4 (sigma/m)^2 exactly
    const PacketSpec a = mk(0.05, 0.75, 0);
    CHECK(obs::momentum_ratio_expansion(a) == doctest::Approx(1.0018750).epsilon(1e-13));
    const double ra = obs::momentum_ratio_exact(a);
    CHECK(std::abs(ra - 1.0018750) < 1e-6);
    CHECK(ra > 1.0018750);  // next order is positive

    // l = 10: expansion 1 + (3/4 + 5) (sigma/m)^2; exact picks up the
    // (l+1/2)(l+3/2)/(2 chi^2) term ~ 9.4e-5 on top of it
    const PacketSpec b = mk(0.05, 0.75, 10);
    CHECK(obs::momentum_ratio_expansion(b) == doctest::Approx(1.0143750).epsilon(1e-13));
    const double rb = obs::momentum_ratio_exact(b);
    CHECK(rb - 1.0143750 > 8.5e-5);
    CHECK(rb - 1.0143750 < 1.05e-4);

    // mean four-momentum is pbar^mu times the ratio; its Minkowski norm is the
    // effective mass
    const FourVector p4 = obs::mean_four_momentum(b);
    CHECK(p4.t == doctest::Approx(b.ebar() * rb).epsilon(1e-14));
    CHECK(p4.z == doctest::Approx(b.mean_p * rb).epsilon(1e-14));
    CHECK(p4.x == 0.0);
    CHECK(p4.y == 0.0);
    const double ml = obs::invariant_mass(b);
    CHECK(p4.squared() == doctest::Approx(ml * ml).epsilon(1e-12));
    CHECK(ml > b.mass);  // vortex packets are heavier than the particle

    // defined only for the exact relativistic states
    CHECK_THROWS_AS(obs::momentum_ratio_exact(mk(0.05, 0.0, 2, 0, Regime::paraxial)),
                    std::invalid_argument);
}

TEST_CASE("mass excess: zero at l = 0, frozen values, monotone in l") {
    const PacketSpec z = mk(0.1, 0.5, 0);
    CHECK(std::abs(obs::mass_excess_exact(z)) < 1e-12);
    CHECK(obs::mass_excess_expansion(z) == 0.0);

    // l = 100, sigma/m = 0.01: leading form is exactly 5e-3, the exact double
    // ratio adds l(l-1)/(2 chi^2) = 1.2375e-5
    const PacketSpec c = mk(0.01, 0.0, 100);
    CHECK(obs::mass_excess_expansion(c) == doctest::Approx(5.0e-3).epsilon(1e-13));
    const double dm = obs::mass_excess_exact(c);
    CHECK(dm - 5.0e-3 > 1.1e-5);
    CHECK(dm - 5.0e-3 < 1.4e-5);

    // electron beam example: l = 1000 focused to 0.4 nm
    const double s = units::sigma_perp_nm_to_sigma_over_m(0.4);
    CHECK(s == doctest::Approx(9.655e-4).epsilon(1e-3));
    const PacketSpec e = mk(s, 1.0, 1000);
    const double dme = obs::mass_excess_exact(e);
    CHECK(dme > 4.5e-4);
    CHECK(dme < 4.8e-4);
    CHECK(std::abs(dme - obs::mass_excess_expansion(e)) / dme < 3e-3);

    // monotone growth with the vortex charge at fixed spread
    double prev = 0.0;
    for (int l : {1, 3, 10, 30}) {
        const double v = obs::mass_excess_exact(mk(0.08, 0.3, l));
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("transverse momentum mean: frozen large-l values and the radius product") {
    const double s = units::sigma_perp_nm_to_sigma_over_m(0.4);
    const PacketSpec e = mk(s, 1.0, 1000);
    const double pp = obs::mean_pperp_exact(e);
    CHECK(pp / e.sigma() > 31.6);
    CHECK(pp / e.sigma() < 31.7);
    CHECK(std::abs(pp - obs::mean_pperp_expansion(e)) / pp < 5e-7);

    // rho_peak * <p_perp> approaches |l| for large charge
    for (int l : {100, 400, 1000}) {
        const PacketSpec q = mk(9.0e-4, 0.0, l);
        const double prod = obs::peak_radius_leading(q) * obs::mean_pperp_exact(q);
        CHECK(std::abs(prod / l - 1.0) < 0.02);
    }

    // two independent routes to the same transverse figure of merit agree at
    // the percent level once the charge is large
    const PacketSpec f = mk(0.01, 1.0, 100);
    const double lead = obs::sok_delta_leading(f);
    const double from_angle = obs::sok_delta_angle(f);
    CHECK(std::abs(from_angle / lead - 1.0) < 0.02);
    CHECK_THROWS_AS(obs::sok_delta_angle(mk(0.01, 0.0, 100)), std::domain_error);
}

TEST_CASE("expansion remainders shrink with the fourth (or sixth) power of the spread") {
    auto energy_rem = [](double s, int l) {
        const PacketSpec q = mk(s, 0.75, l);
        return std::abs(obs::momentum_ratio_exact(q) - obs::momentum_ratio_expansion(q));
    };
    auto excess_rem = [](double s, int l) {
        const PacketSpec q = mk(s, 0.75, l);
        return std::abs(obs::mass_excess_exact(q) - obs::mass_excess_expansion(q));
    };
    auto pperp_rem = [](double s, int l) {
        // remainder of the dimensionless ratio <p_perp>/sigma — <p_perp>
        // itself carries a linear sigma factor that would mask the sigma^4 law
        const PacketSpec q = mk(s, 0.75, l);
        return std::abs(obs::mean_pperp_exact(q) - obs::mean_pperp_expansion(q)) / q.sigma();
    };
    // O(sigma^4) remainders: halving sigma divides them by 16
    for (int l : {1, 10}) {
        const double r = energy_rem(0.1, l) / energy_rem(0.05, l);
        CHECK(r > 12.0);
        CHECK(r < 20.0);
    }
    {
        const double r = excess_rem(0.1, 10) / excess_rem(0.05, 10);
        CHECK(r > 12.0);
        CHECK(r < 20.0);
    }
    {
        const double r = pperp_rem(0.1, 10) / pperp_rem(0.05, 10);
        CHECK(r > 12.0);
        CHECK(r < 20.0);
    }
    // the sigma^4 term of the mass excess carries a factor l(l-1) and vanishes
    // identically at l = 1, so the remainder there is O(sigma^6): factor 64
    {
        const double r = excess_rem(0.1, 1) / excess_rem(0.05, 1);
        CHECK(r > 48.0);
        CHECK(r < 80.0);
    }
}

TEST_CASE("energy, pperp and effective mass against the adaptive quadrature oracle") {
    const PacketSpec panel[] = {mk(0.2, 0.0, 3), mk(0.1, 0.75, 7)};
    for (const auto& spec : panel) {
        CAPTURE(spec.sigma_perp_p);
        CAPTURE(spec.ell);
        const double norm = oracle::expectation(spec, oracle::Weight::one).real();
        const double qe = oracle::expectation(spec, oracle::Weight::energy).real() / norm;
        const double qz = oracle::expectation(spec, oracle::Weight::pz).real() / norm;
        const double qp = oracle::expectation(spec, oracle::Weight::pperp).real() / norm;

        const double r = obs::momentum_ratio_exact(spec);
        CHECK(qe == doctest::Approx(spec.ebar() * r).epsilon(1e-8));
        if (spec.mean_p > 0)
            CHECK(qz == doctest::Approx(spec.mean_p * r).epsilon(1e-8));
        else
            CHECK(std::abs(qz) < 1e-8);
        CHECK(qp == doctest::Approx(obs::mean_pperp_exact(spec)).epsilon(1e-8));

        const double ml_quad = std::sqrt(qe * qe - qz * qz);
        CHECK(ml_quad == doctest::Approx(obs::invariant_mass(spec)).epsilon(1e-7));
    }
}

TEST_CASE("fermion magnetic moments and dipole against the quadrature oracle") {
    const PacketSpec panel[] = {mk(0.02, 0.0, 20), mk(0.02, 1.0, 20), mk(0.02, 1.0, 0)};
    for (const auto& spec : panel) {
        CAPTURE(spec.mean_p);
        CAPTURE(spec.ell);
        const auto q = oracle::moment_quadrature_fermion(spec);

        const double mub = obs::magnetic_moment_orbital(spec)[2];
        const double mub0 = obs::magnetic_moment_orbital_leading(spec)[2];
        if (spec.ell == 0) {
            CHECK(std::abs(q.mu_b_z.real()) < 1e-12);
            CHECK(mub == 0.0);
        } else {
            CHECK(mub == doctest::Approx(q.mu_b_z.real()).epsilon(1e-3));
            // the spread correction is real: the uncorrected value misses
            CHECK(std::abs(mub0 - q.mu_b_z.real()) / std::abs(q.mu_b_z.real()) > 3e-3);
        }

        const double mus = obs::magnetic_moment_spin(spec)[2];
        const double mus0 = obs::magnetic_moment_spin_leading(spec)[2];
        CHECK(mus == doctest::Approx(q.mu_s_z.real()).epsilon(1e-3));
        if (spec.ell != 0)
            CHECK(std::abs(mus0 - q.mu_s_z.real()) / std::abs(q.mu_s_z.real()) > 3e-3);

        if (spec.mean_p > 0) {
            const double rel = spec.abs_ell() > 0 ? 0.02 : 2e-3;
            CHECK(std::abs(q.mean_u_z.real() / obs::mean_velocity_leading(spec) - 1.0) < rel);
        } else {
            CHECK(std::abs(q.mean_u_z.real()) < 1e-8);
        }

        // both candidate transverse dipole terms average to zero
        CHECK(q.dipole_transverse_residual < 1e-10);
    }

    // the dipole moment vanishes identically at t = 0 and grows as <u> t
    const PacketSpec d = mk(0.02, 1.0, 20);
    const auto d0 = obs::electric_dipole(d, 0.0);
    CHECK(d0[0] == 0.0);
    CHECK(d0[1] == 0.0);
    CHECK(d0[2] == 0.0);
    const auto d5 = obs::electric_dipole(d, 5.0);
    CHECK(d5[2] == doctest::Approx(5.0 * d.ubar()).epsilon(1e-14));
}

TEST_CASE("paraxial moments: frozen values, uncertainty floor, self-similarity") {
    // ground Gaussian: minimum-uncertainty in the Cartesian pair
    const PacketSpec g = mk(0.1, 0.5, 0, 0, Regime::paraxial);
    const auto ug = obs::uncertainty_products(g, 0.0);
    CHECK(ug.second == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ug.first == doctest::Approx(1.0 - M_PI / 4.0).epsilon(1e-12));

    // l = 100: the radial product approaches 1/4 from below
    const PacketSpec h = mk(0.05, 0.5, 100, 0, Regime::paraxial);
    const auto uh = obs::uncertainty_products(h, 0.0);
    CHECK(std::abs(uh.first - (0.25 - 1.0 / (32.0 * 101.0))) < 5e-5);

    // l = 3, n = 1: <rho^2> sigma^2 = 2n + |l| + 1 = 6
    const PacketSpec j = mk(0.1, 0.5, 3, 1, Regime::paraxial);
    const auto mj = obs::lg_moments(j, 0.0);
    CHECK(mj.mean_rho2 * j.sigma_perp_p * j.sigma_perp_p == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(mj.mean_pperp2 == doctest::Approx(6.0 * j.sigma_perp_p * j.sigma_perp_p).epsilon(1e-12));
    // sqrt-moment for the first excited radial mode has a two-term closed form
    const double r13 = std::exp(std::lgamma(4.5) - std::lgamma(5.0)) * 4.75;
    CHECK(mj.mean_pperp == doctest::Approx(j.sigma_perp_p * r13).epsilon(1e-10));
    CHECK(mj.mean_x2 == doctest::Approx(0.5 * mj.mean_rho2).epsilon(1e-14));
    CHECK(mj.mean_px2 == doctest::Approx(0.5 * mj.mean_pperp2).epsilon(1e-14));

    // no squeezing anywhere on a (l, n, t) panel; Cartesian product consistent
    for (int l : {0, 1, 2, 5, 17}) {
        for (int n : {0, 1, 4}) {
            for (double tfrac : {0.0, 0.5, 2.0, 10.0}) {
                const PacketSpec q = mk(0.07, 0.4, l, n, Regime::paraxial);
                const double t = tfrac * kinematics::diffraction_time_perp(q);
                const auto m = obs::lg_moments(q, t);
                const double dx = std::sqrt(m.mean_x2), dpx = std::sqrt(m.mean_px2);
                CHECK(dpx >= q.sigma_perp_p / std::sqrt(2.0) * (1.0 - 1e-12));
                CHECK(dx >= 1.0 / (q.sigma_perp_p * std::sqrt(2.0)) * (1.0 - 1e-12));
                CHECK(dx * dpx >= 0.5 * (1.0 - 1e-12));
                const auto u = obs::uncertainty_products(q, t);
                CHECK(u.second == doctest::Approx(dx * dpx).epsilon(1e-12));
            }
        }
    }

    // momentum moments are static; position moments stretch self-similarly
    const PacketSpec k = mk(0.08, 0.6, 4, 2, Regime::paraxial);
    const double td = kinematics::diffraction_time_perp(k);
    const auto m0 = obs::lg_moments(k, 0.0);
    const auto m7 = obs::lg_moments(k, 7.0 * td);
    CHECK(m7.mean_pperp == m0.mean_pperp);
    CHECK(m7.mean_pperp2 == m0.mean_pperp2);
    CHECK(m7.mean_rho / m0.mean_rho == doctest::Approx(std::sqrt(50.0)).epsilon(1e-12));

    CHECK_THROWS_AS(obs::lg_moments(mk(0.1, 0.5, 3), 0.0), std::invalid_argument);
}

TEST_CASE("beam geometry: width growth, mean radius, Gouy phase") {
    const PacketSpec g = mk(0.1, 0.5, 0, 0, Regime::paraxial);
    const auto b0 = obs::beam_geometry(g, 0.0);
    CHECK(b0.sigma_perp_x == doctest::Approx(1.0 / g.sigma_perp_p).epsilon(1e-14));
    CHECK(b0.mean_rho == doctest::Approx(std::sqrt(M_PI) / (2.0 * g.sigma_perp_p)).epsilon(1e-12));
    CHECK(b0.gouy_phase == 0.0);

    // one diffraction time out: sqrt(2) spreading, (2n+|l|+3/2) pi/4 phase
    const PacketSpec j = mk(0.1, 0.5, 3, 1, Regime::paraxial);
    const auto bj = obs::beam_geometry(j, kinematics::diffraction_time_perp(j));
    CHECK(bj.sigma_perp_x == doctest::Approx(std::sqrt(2.0) / j.sigma_perp_p).epsilon(1e-14));
    CHECK(bj.gouy_phase == doctest::Approx((2 + 3 + 1.5) * M_PI / 4.0).epsilon(1e-14));

    // unequal spreads split the longitudinal phase term
    const PacketSpec u = mk(0.1, 0.5, 2, 0, Regime::paraxial, 0.2);
    const double tdp = kinematics::diffraction_time_perp(u);
    const double tdz = kinematics::diffraction_time_z(u);
    CHECK(tdp / tdz == doctest::Approx(4.0).epsilon(1e-14));
    const auto bu = obs::beam_geometry(u, tdp);
    CHECK(bu.gouy_phase ==
          doctest::Approx(3.0 * M_PI / 4.0 + 0.5 * std::atan(4.0)).epsilon(1e-14));

    // high-charge donut: mean radius ~ 20 beam widths at l = 400
    const PacketSpec w = mk(0.02, 0.5, 400, 0, Regime::paraxial);
    const auto bw = obs::beam_geometry(w, 0.0);
    CHECK(bw.mean_rho / bw.sigma_perp_x > 19.9);
    CHECK(bw.mean_rho / bw.sigma_perp_x < 20.1);

    CHECK_THROWS_AS(obs::beam_geometry(mk(0.1, 0.5, 3), 0.0), std::invalid_argument);
}

TEST_CASE("boost behaviour: invariant masses and phases, frame-dependent moments") {
    const PacketSpec spec = mk(0.05, 0.3, 5);
    for (double rap : {1.0, 2.0}) {
        const PacketSpec b = spec.boosted(rap);
        CHECK(obs::invariant_mass(b) ==
              doctest::Approx(obs::invariant_mass(spec)).epsilon(1e-12));
        CHECK(obs::mass_excess_exact(b) ==
              doctest::Approx(obs::mass_excess_exact(spec)).epsilon(1e-12));
        const FourVector p4 = obs::mean_four_momentum(b);
        CHECK(p4.squared() ==
              doctest::Approx(std::pow(obs::invariant_mass(spec), 2)).epsilon(1e-10));
    }

    // paraxial beam quantities at corresponding lab times: t scales with ebar,
    // so t/t_d, the Gouy phase, the transverse width and the invariant length
    // are all frame-independent
    const PacketSpec par = mk(0.05, 0.5, 3, 1, Regime::paraxial);
    const double t = 2.5 * kinematics::diffraction_time_perp(par);
    const PacketSpec parb = par.boosted(0.7);
    const double tb = t * parb.ebar() / par.ebar();
    const auto g0 = obs::beam_geometry(par, t);
    const auto g1 = obs::beam_geometry(parb, tb);
    CHECK(g1.gouy_phase == doctest::Approx(g0.gouy_phase).epsilon(1e-12));
    CHECK(g1.sigma_perp_x == doctest::Approx(g0.sigma_perp_x).epsilon(1e-12));
    CHECK(g1.sigma_z_inv == doctest::Approx(g0.sigma_z_inv).epsilon(1e-12));
    CHECK(g1.mean_rho == doctest::Approx(g0.mean_rho).epsilon(1e-12));

    // the orbital magnetic moment is not invariant: it falls off as 1/ebar
    const PacketSpec rest = mk(0.02, 0.0, 5);
    const PacketSpec moving = rest.boosted(1.0);
    const double mu0 = obs::magnetic_moment_orbital(rest)[2];
    const double mu1 = obs::magnetic_moment_orbital(moving)[2];
    CHECK(std::abs(mu0 - mu1) > 0.3 * std::abs(mu0));
    CHECK(mu0 / mu1 == doctest::Approx(moving.ebar() / rest.ebar()).epsilon(1e-3));
}

TEST_CASE("figures of merit: nonparaxiality from charge or from radius") {
    const PacketSpec spec = mk(0.05, 0.3, 12);
    CHECK(obs::nonparaxiality_parameter(spec) == doctest::Approx(12 * 0.0025).epsilon(1e-14));

    // electron example: l = 1000 focused so the OAM-less width is 0.4 nm puts
    // the beam radius near 12.7 nm and the figure of merit in the 1e-4..1e-3
    // window quoted for tens-of-nm highly twisted beams
    {
        const PacketSpec e = mk(units::sigma_perp_nm_to_sigma_over_m(0.4), 1.0, 1000);
        const double rho = obs::peak_radius_leading(e);
        CHECK(units::length_internal_to_nm(rho) == doctest::Approx(12.65).epsilon(1e-3));
        const double f = obs::nonparaxiality_from_radius(1000, rho, 1.0);
        CHECK(f > 1e-4);
        CHECK(f < 1.5e-3);
    }
    for (double rho_nm : {10.0, 20.0, 33.0}) {
        const double rho = units::length_nm_to_internal(rho_nm);
        const double f = obs::nonparaxiality_from_radius(1000, rho, 1.0);
        CHECK(f <= 1.6e-3);
        CHECK(f >= 1.3e-4);
    }
    // the two routes agree when the radius takes its peak value sqrt(l)/sigma
    const double f1 = obs::nonparaxiality_parameter(spec);
    const double f2 = obs::nonparaxiality_from_radius(spec.ell, obs::peak_radius_leading(spec),
                                                      spec.mass);
    CHECK(f1 == doctest::Approx(f2).epsilon(1e-12));

    CHECK(obs::nonparaxiality_from_radius(0, 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(obs::nonparaxiality_from_radius(5, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("full report: per-regime rows, methods, warnings, metadata") {
    // relativistic vortex
    const PacketSpec spec = mk(0.05, 0.75, 10);
    const auto rep = obs::full_report(spec);
    for (const char* name :
         {"mean_energy", "mean_energy_expansion", "mean_pz", "invariant_mass", "mass_excess",
          "mass_excess_expansion", "mean_pperp", "mean_pperp_expansion", "peak_radius",
          "opening_angle", "magnetic_moment_orbital", "magnetic_moment_spin", "sok_delta",
          "sok_delta_from_angle", "electric_dipole", "mean_velocity", "nonparaxiality",
          "nonparaxiality_from_radius"})
        CHECK_MESSAGE(has_row(rep, name), name);

    const auto& me = row(rep, "mean_energy");
    CHECK(me.method == Method::closed_form);
    CHECK(me.value == doctest::Approx(spec.ebar() * obs::momentum_ratio_exact(spec)));
    CHECK(me.spec_snapshot.ell == 10);
    const auto& mex = row(rep, "mean_energy_expansion");
    CHECK(mex.method == Method::expansion);
    CHECK(mex.truncation_order == 4);
    // the error estimate of the expansion is the distance to the exact value
    CHECK(mex.error_estimate ==
          doctest::Approx(std::abs(me.value - mex.value)).epsilon(1e-12));
    CHECK(mex.warning.empty());  // |l| sigma^2/m^2 = 0.025 is comfortably small

    const auto& mub = row(rep, "magnetic_moment_orbital");
    CHECK(mub.is_vector);
    CHECK(mub.vec[2] == mub.value);
    CHECK(mub.vec[0] == 0.0);

    for (const auto& r : rep) {
        CHECK(std::isfinite(r.value));
        CHECK(r.error_estimate >= 0.0);
        CHECK(std::isfinite(r.error_estimate));
    }

    // expansion rows warn once |l| sigma^2/m^2 crosses 0.1
    const auto deep = obs::full_report(mk(0.15, 0.75, 10));
    CHECK(!row(deep, "mean_energy_expansion").warning.empty());
    CHECK(!row(deep, "magnetic_moment_orbital").warning.empty());
    CHECK(row(deep, "mean_energy").warning.empty());  // exact rows never warn

    // at rest there is no opening angle to report
    const auto rest = obs::full_report(mk(0.05, 0.0, 3));
    CHECK(!has_row(rest, "opening_angle"));
    CHECK(!has_row(rest, "sok_delta_from_angle"));

    // paraxial beam
    const PacketSpec par = mk(0.1, 0.5, 3, 1, Regime::paraxial);
    const auto prep = obs::full_report(par, 0.0);
    for (const char* name : {"mean_rho", "mean_rho2", "mean_pperp", "mean_pperp2",
                             "delta_rho_delta_pperp", "delta_x_delta_px", "sigma_perp_x",
                             "sigma_z_invariant", "t_d_perp", "t_d_z", "gouy_phase",
                             "mean_energy"})
        CHECK_MESSAGE(has_row(prep, name), name);
    CHECK(row(prep, "delta_x_delta_px").value ==
          doctest::Approx(obs::uncertainty_products(par, 0.0).second).epsilon(1e-14));
    const double sp = par.sigma_perp_p, sz = par.sigma_z_p;
    CHECK(row(prep, "mean_energy").value ==
          doctest::Approx(par.ebar() + (sp * sp * 6.0 + 0.5 * sz * sz) / (2.0 * par.ebar()))
              .epsilon(1e-14));

    // Schroedinger packet
    const PacketSpec nr = mk(0.1, 0.5, 2, 0, Regime::nonrelativistic);
    const auto nrep = obs::full_report(nr);
    CHECK(row(nrep, "mean_kinetic_energy").value ==
          doctest::Approx((0.25 + 0.01 * 3.5) / 2.0).epsilon(1e-13));
    CHECK(row(nrep, "mean_pz").value == 0.5);
    CHECK(row(nrep, "mean_pperp2").value == doctest::Approx(0.01 * 3.0).epsilon(1e-13));

    // l = 0 has no radius-based figure of merit
    CHECK(!has_row(obs::full_report(mk(0.1, 0.5, 0)), "nonparaxiality_from_radius"));

    // invalid specs are rejected up front
    PacketSpec bad = mk(0.1, 0.5, 2);
    bad.sigma_perp_p = -1.0;
    CHECK_THROWS(obs::full_report(bad));

    // method labels for the three computation routes are distinct and stable
    CHECK(std::string(obs::method_name(Method::closed_form)) == "closed-form");
    CHECK(std::string(obs::method_name(Method::expansion)) == "expansion-O(sigma^2/m^2)");
    CHECK(std::string(obs::method_name(Method::quadrature)) == "quadrature");
}
