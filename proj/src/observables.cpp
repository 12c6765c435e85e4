#include "vortex/observables.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vortex/kinematics.hpp"
#include "vortex/specfun.hpp"

namespace vortex::observables {

namespace {

void require_regime(const PacketSpec& spec, Regime r, const char* who) {
    if (spec.regime != r)
        throw std::invalid_argument(std::string(who) + ": defined for the " +
                                    regime_name(r) + " regime, spec is " +
                                    regime_name(spec.regime));
}

double spread2(const PacketSpec& spec) {
    const double s = spec.sigma() / spec.mass;
    return s * s;
}

// relative accuracy carried by the Bessel/gamma machinery
constexpr double kSpecfunRel = 1e-10;

ObservableReport scalar_report(const PacketSpec& spec, std::string name, double value,
                               Method method, double error, int order = 0,
                               std::string warning = {}) {
    ObservableReport r;
    r.name = std::move(name);
    r.value = value;
    r.method = method;
    r.truncation_order = order;
    r.spec_snapshot = spec;
    r.error_estimate = std::abs(error);
    r.warning = std::move(warning);
    return r;
}

ObservableReport vector_report(const PacketSpec& spec, std::string name,
                               const std::array<double, 3>& v, Method method, double error,
                               int order = 0, std::string warning = {}) {
    ObservableReport r = scalar_report(spec, std::move(name), v[2], method, error, order,
                                       std::move(warning));
    r.vec = v;
    r.is_vector = true;
    return r;
}

std::string expansion_depth_warning(const PacketSpec& spec) {
    if (spec.abs_ell() * spread2(spec) > 0.1)
        return "expansion parameter |l| sigma^2/m^2 exceeds 0.1; "
               "O(sigma^2/m^2) forms are unreliable here";
    return {};
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::closed_form: return "closed-form";
        case Method::expansion: return "expansion-O(sigma^2/m^2)";
        case Method::quadrature: return "quadrature";
    }
    return "unknown";
}

// --- exact momentum moments ---------------------------------------------------

double momentum_ratio_exact(const PacketSpec& spec) {
    require_regime(spec, Regime::nonparaxial, "momentum_ratio_exact");
    const int l = spec.abs_ell();
    return specfun::bessel_k_ratio_real(l + 2.0, l + 1.0, spec.chi());
}

double momentum_ratio_expansion(const PacketSpec& spec) {
    require_regime(spec, Regime::nonparaxial, "momentum_ratio_expansion");
    return 1.0 + (0.75 + 0.5 * spec.abs_ell()) * spread2(spec);
}

FourVector mean_four_momentum(const PacketSpec& spec) {
    const double r = momentum_ratio_exact(spec);
    return {spec.ebar() * r, 0.0, 0.0, spec.mean_p * r};
}

double invariant_mass(const PacketSpec& spec) {
    // m_l^2 = <e>^2 - <p_z>^2 = m^2 r^2 since <p^mu> = pbar^mu r
    return spec.mass * momentum_ratio_exact(spec);
}

double mass_excess_exact(const PacketSpec& spec) {
    require_regime(spec, Regime::nonparaxial, "mass_excess_exact");
    const int l = spec.abs_ell();
    const double chi = spec.chi();
    return specfun::bessel_k_ratio_real(l + 2.0, l + 1.0, chi) /
               specfun::bessel_k_ratio_real(2.0, 1.0, chi) -
           1.0;
}

double mass_excess_expansion(const PacketSpec& spec) {
    require_regime(spec, Regime::nonparaxial, "mass_excess_expansion");
    return 0.5 * spec.abs_ell() * spread2(spec);
}

double mean_pperp_exact(const PacketSpec& spec) {
    return kinematics::transverse_momentum_mean(spec);
}

double mean_pperp_expansion(const PacketSpec& spec) {
    require_regime(spec, Regime::nonparaxial, "mean_pperp_expansion");
    const int l = spec.abs_ell();
    return spec.sigma() * specfun::gamma_ratio_half(l) *
           (1.0 + (5.0 + 4.0 * l) / 16.0 * spread2(spec));
}

double peak_radius_leading(const PacketSpec& spec) {
    return std::sqrt(double(spec.abs_ell())) / spec.sigma();
}

// --- fermion expansion observables ---------------------------------------------

std::array<double, 3> magnetic_moment_orbital_leading(const PacketSpec& spec) {
    return {0.0, 0.0, spec.ell / (2.0 * spec.ebar())};
}

std::array<double, 3> magnetic_moment_orbital(const PacketSpec& spec) {
    const int l = spec.abs_ell();
    const double me = spec.mass / spec.ebar();
    const double bracket = 1.0 - 0.5 * spread2(spec) * (l + 0.5 + me * me);
    return {0.0, 0.0, spec.ell / (2.0 * spec.ebar()) * bracket};
}

std::array<double, 3> magnetic_moment_spin_leading(const PacketSpec& spec) {
    const double zeta = 2.0 * spec.helicity;
    return {0.0, 0.0, zeta / (2.0 * spec.ebar())};
}

std::array<double, 3> magnetic_moment_spin(const PacketSpec& spec) {
    const int l = spec.abs_ell();
    const double r = spec.mass / spec.ebar();          // m/ebar
    const double q = r / (1.0 + r);                    // m/(ebar + m)
    const double frame = 0.5 + 1.5 * r + 0.5 * r * r - 1.5 * r * r * r -
                         q * (1.5 - 2.0 * r * r - 1.5 * r * r * r);
    const double bracket = frame + l * (1.0 + r - q);
    const double zeta = 2.0 * spec.helicity;
    return {0.0, 0.0, zeta / (2.0 * spec.ebar()) * (1.0 - 0.5 * spread2(spec) * bracket)};
}

double sok_delta_leading(const PacketSpec& spec) {
    const double r = spec.mass / spec.ebar();
    return spec.abs_ell() * spread2(spec) * (r - r / (1.0 + r));
}

double sok_delta_angle(const PacketSpec& spec) {
    const double theta0 = kinematics::opening_angle(spec);  // throws at pbar = 0
    const double s = std::sin(theta0);
    return (1.0 - spec.mass / spec.ebar()) * s * s;
}

std::array<double, 3> electric_dipole(const PacketSpec& spec, double t) {
    return {0.0, 0.0, mean_velocity_leading(spec) * t};
}

double mean_velocity_leading(const PacketSpec& spec) { return spec.ubar(); }

// --- paraxial Laguerre-Gaussian moments -----------------------------------------

MomentSet lg_moments(const PacketSpec& spec, double t) {
    require_regime(spec, Regime::paraxial, "lg_moments");
    const int l = spec.abs_ell(), n = spec.n_radial;
    const double sp = spec.sigma_perp_p;
    const double tp = t / kinematics::diffraction_time_perp(spec);
    const double wp = std::sqrt(1.0 + tp * tp) / sp;  // sigma_perp(t)
    const double big = 2.0 * n + l + 1.0;
    const double rmom = specfun::laguerre_sqrt_moment(n, l);
    MomentSet ms;
    ms.mean_rho = wp * rmom;
    ms.mean_rho2 = wp * wp * big;
    ms.mean_pperp = sp * rmom;
    ms.mean_pperp2 = sp * sp * big;
    ms.mean_x2 = 0.5 * ms.mean_rho2;
    ms.mean_px2 = 0.5 * ms.mean_pperp2;
    return ms;
}

std::pair<double, double> uncertainty_products(const PacketSpec& spec, double t) {
    require_regime(spec, Regime::paraxial, "uncertainty_products");
    const int l = spec.abs_ell(), n = spec.n_radial;
    const double tp = t / kinematics::diffraction_time_perp(spec);
    const double stretch = std::sqrt(1.0 + tp * tp);
    const double big = 2.0 * n + l + 1.0;
    const double rmom = specfun::laguerre_sqrt_moment(n, l);
    const double radial = stretch * (big - rmom * rmom);
    const double cartesian = 0.5 * stretch * big;
    return {radial, cartesian};
}

BeamGeometry beam_geometry(const PacketSpec& spec, double t) {
    require_regime(spec, Regime::paraxial, "beam_geometry");
    const int l = spec.abs_ell(), n = spec.n_radial;
    BeamGeometry g;
    g.t_d_perp = kinematics::diffraction_time_perp(spec);
    g.t_d_z = kinematics::diffraction_time_z(spec);
    const double tp = t / g.t_d_perp, tz = t / g.t_d_z;
    g.sigma_perp_x = std::sqrt(1.0 + tp * tp) / spec.sigma_perp_p;
    g.sigma_z_inv = std::sqrt(1.0 + tz * tz) / spec.sigma_z_p;
    g.mean_rho = g.sigma_perp_x * specfun::laguerre_sqrt_moment(n, l);
    g.gouy_phase = (2.0 * n + l + 1.0) * std::atan(tp) + 0.5 * std::atan(tz);
    return g;
}

// --- figures of merit ------------------------------------------------------------

double nonparaxiality_parameter(const PacketSpec& spec) {
    return spec.abs_ell() * spread2(spec);
}

double nonparaxiality_from_radius(int ell, double mean_rho, double mass) {
    if (!(mean_rho > 0.0) || !(mass > 0.0))
        throw std::invalid_argument("nonparaxiality_from_radius: need mean_rho > 0, mass > 0");
    const double lc_over_rho = 1.0 / (mass * mean_rho);  // lambda_c = 1/m
    return double(ell) * double(ell) * lc_over_rho * lc_over_rho;
}

// --- aggregate ---------------------------------------------------------------------

namespace {

void append_nonparaxial(std::vector<ObservableReport>& out, const PacketSpec& spec, double t) {
    const double r_exact = momentum_ratio_exact(spec);
    const double r_exp = momentum_ratio_expansion(spec);
    const std::string warn = expansion_depth_warning(spec);

    out.push_back(scalar_report(spec, "mean_energy", spec.ebar() * r_exact, Method::closed_form,
                                kSpecfunRel * spec.ebar() * r_exact));
    out.push_back(scalar_report(spec, "mean_energy_expansion", spec.ebar() * r_exp,
                                Method::expansion, spec.ebar() * std::abs(r_exact - r_exp), 4,
                                warn));
    out.push_back(scalar_report(spec, "mean_pz", spec.mean_p * r_exact, Method::closed_form,
                                kSpecfunRel * spec.mean_p * r_exact));
    out.push_back(scalar_report(spec, "invariant_mass", invariant_mass(spec), Method::closed_form,
                                kSpecfunRel * spec.mass * r_exact));
    const double dm = mass_excess_exact(spec), dm_exp = mass_excess_expansion(spec);
    out.push_back(
        scalar_report(spec, "mass_excess", dm, Method::closed_form, 2.0 * kSpecfunRel * (1 + dm)));
    out.push_back(scalar_report(spec, "mass_excess_expansion", dm_exp, Method::expansion,
                                std::abs(dm - dm_exp), 4, warn));
    const double pp = mean_pperp_exact(spec), pp_exp = mean_pperp_expansion(spec);
    out.push_back(scalar_report(spec, "mean_pperp", pp, Method::closed_form, kSpecfunRel * pp));
    out.push_back(scalar_report(spec, "mean_pperp_expansion", pp_exp, Method::expansion,
                                std::abs(pp - pp_exp), 4, warn));
    out.push_back(scalar_report(spec, "peak_radius", peak_radius_leading(spec), Method::expansion,
                                peak_radius_leading(spec) * nonparaxiality_parameter(spec), 2,
                                warn));
    if (spec.mean_p > 0.0)
        out.push_back(scalar_report(spec, "opening_angle", kinematics::opening_angle(spec),
                                    Method::closed_form,
                                    kSpecfunRel * kinematics::opening_angle(spec)));

    // fermion expansion block
    const double q2 = nonparaxiality_parameter(spec) + spread2(spec);
    const auto mub = magnetic_moment_orbital(spec);
    out.push_back(vector_report(spec, "magnetic_moment_orbital", mub, Method::expansion,
                                std::abs(mub[2]) * q2 * q2, 4, warn));
    const auto mus = magnetic_moment_spin(spec);
    out.push_back(vector_report(spec, "magnetic_moment_spin", mus, Method::expansion,
                                std::abs(mus[2]) * q2 * q2, 4, warn));
    out.push_back(scalar_report(spec, "sok_delta", sok_delta_leading(spec), Method::expansion,
                                sok_delta_leading(spec) * q2, 4, warn));
    if (spec.mean_p > 0.0)
        out.push_back(scalar_report(spec, "sok_delta_from_angle", sok_delta_angle(spec),
                                    Method::closed_form, kSpecfunRel * sok_delta_angle(spec)));
    const auto df = electric_dipole(spec, t);
    out.push_back(vector_report(spec, "electric_dipole", df, Method::expansion,
                                std::abs(df[2]) * nonparaxiality_parameter(spec), 2, warn));
    out.push_back(scalar_report(spec, "mean_velocity", mean_velocity_leading(spec),
                                Method::expansion,
                                spec.ubar() * nonparaxiality_parameter(spec), 2, warn));
}

void append_paraxial(std::vector<ObservableReport>& out, const PacketSpec& spec, double t) {
    const MomentSet ms = lg_moments(spec, t);
    const BeamGeometry g = beam_geometry(spec, t);
    const auto unc = uncertainty_products(spec, t);
    auto closed = [&](std::string name, double v) {
        out.push_back(scalar_report(spec, std::move(name), v, Method::closed_form,
                                    kSpecfunRel * std::abs(v)));
    };
    closed("mean_rho", ms.mean_rho);
    closed("mean_rho2", ms.mean_rho2);
    closed("mean_pperp", ms.mean_pperp);
    closed("mean_pperp2", ms.mean_pperp2);
    closed("mean_x2", ms.mean_x2);
    closed("mean_px2", ms.mean_px2);
    closed("delta_rho_delta_pperp", unc.first);
    closed("delta_x_delta_px", unc.second);
    closed("sigma_perp_x", g.sigma_perp_x);
    closed("sigma_z_invariant", g.sigma_z_inv);
    closed("t_d_perp", g.t_d_perp);
    closed("t_d_z", g.t_d_z);
    closed("gouy_phase", g.gouy_phase);
    // mean energy of the paraxial state: ebar + [sp^2 (2n+|l|+1) + sz^2/2]/(2 ebar)
    const double sp = spec.sigma_perp_p, sz = spec.sigma_z_p;
    const double eng = spec.ebar() + (sp * sp * (2.0 * spec.n_radial + spec.abs_ell() + 1.0) +
                                      0.5 * sz * sz) /
                                         (2.0 * spec.ebar());
    closed("mean_energy", eng);
}

void append_nonrelativistic(std::vector<ObservableReport>& out, const PacketSpec& spec) {
    const int l = spec.abs_ell();
    const double s = spec.sigma();
    auto closed = [&](std::string name, double v) {
        out.push_back(scalar_report(spec, std::move(name), v, Method::closed_form,
                                    kSpecfunRel * std::abs(v)));
    };
    closed("mean_kinetic_energy",
           (spec.mean_p * spec.mean_p + s * s * (l + 1.5)) / (2.0 * spec.mass));
    closed("mean_pperp", mean_pperp_exact(spec));
    closed("mean_pperp2", s * s * (l + 1.0));
    closed("mean_pz", spec.mean_p);
}

}  // namespace

std::vector<ObservableReport> full_report(const PacketSpec& spec, double t) {
    spec.validate_or_throw();
    std::vector<ObservableReport> out;
    switch (spec.regime) {
        case Regime::nonparaxial: append_nonparaxial(out, spec, t); break;
        case Regime::paraxial: append_paraxial(out, spec, t); break;
        case Regime::nonrelativistic: append_nonrelativistic(out, spec); break;
    }
    out.push_back(scalar_report(spec, "nonparaxiality", nonparaxiality_parameter(spec),
                                Method::closed_form, 0.0));
    if (spec.abs_ell() > 0) {
        const double rho = spec.regime == Regime::paraxial
                               ? lg_moments(spec, t).mean_rho
                               : peak_radius_leading(spec);
        out.push_back(scalar_report(spec, "nonparaxiality_from_radius",
                                    nonparaxiality_from_radius(spec.ell, rho, spec.mass),
                                    Method::expansion,
                                    nonparaxiality_from_radius(spec.ell, rho, spec.mass) *
                                        spread2(spec),
                                    2));
    }
    return out;
}

}  // namespace vortex::observables
