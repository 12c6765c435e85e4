#include "vortex/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "vortex/kinematics.hpp"
#include "vortex/observables.hpp"
#include "vortex/oracle.hpp"
#include "vortex/specfun.hpp"
#include "vortex/units.hpp"
#include "vortex/wavefunctions.hpp"

namespace vortex::acceptance {

namespace {

namespace obs = vortex::observables;
using wavefunctions::SpacetimePoint;

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

std::string sci(double v, int prec = 2) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(prec) << v;
    return os.str();
}

std::string fix(double v, int prec = 2) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

// Accumulates the worst measured/bound ratio of many <= comparisons.
struct Meter {
    bool ok = true;
    double worst_measured = 0.0;
    double worst_bound = 1.0;
    std::string worst_label;
    double ratio = -1.0;
    int fail_count = 0;
    std::string fail_list;

    void take(double measured, double bound, const std::string& label) {
        if (!(measured <= bound)) {  // also catches NaN
            ok = false;
            if (++fail_count <= 3) {
                if (!fail_list.empty()) fail_list += ", ";
                fail_list += label + "=" + sci(measured);
            }
        }
        const double r = bound > 0 ? measured / bound : (measured > 0 ? 1e300 : 0.0);
        if (r > ratio) {
            ratio = r;
            worst_measured = measured;
            worst_bound = bound;
            worst_label = label;
        }
    }

    std::string summary() const {
        if (ratio < 0) return "no comparisons ran";
        std::string s = "worst " + worst_label + " " + sci(worst_measured) + " (bound " +
                        sci(worst_bound) + ")";
        if (fail_count > 0)
            s += "; FAILED " + std::to_string(fail_count) + ": " + fail_list +
                 (fail_count > 3 ? ", ..." : "");
        return s;
    }
};

// In-band check a <= v <= b, reported as the measured value.
bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double xm = 0, ym = 0;
    for (size_t i = 0; i < n; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= double(n);
    ym /= double(n);
    double num = 0, den = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (x[i] - xm) * (y[i] - ym);
        den += (x[i] - xm) * (x[i] - xm);
    }
    return num / den;
}

// ---- criterion 1: norms and overlaps --------------------------------------

CriterionResult crit1(const Options& opt) {
    CriterionResult r{1, "norm-and-overlap", false, "", 0.0};
    const double bound = 1e-8 * opt.tol_scale;
    Meter m;

    const std::vector<double> sigmas =
        opt.quick ? std::vector<double>{0.1} : std::vector<double>{0.2, 0.1, 0.05};
    const std::vector<int> ells = opt.quick ? std::vector<int>{0, 5} : std::vector<int>{0, 1, 5, 20};
    for (double s : sigmas)
        for (int l : ells) {
            const auto q = oracle::expectation(mk(s, 0.75, l), oracle::Weight::one, 1e-9);
            m.take(std::abs(q.real() - 1.0), bound,
                   "|norm-1| s=" + fix(s) + " l=" + std::to_string(l));
            if (!q.converged) m.take(1.0, 0.0, "non-converged norm");
        }

    struct Pair { int l, n; };
    const std::vector<Pair> par =
        opt.quick ? std::vector<Pair>{{3, 1}} : std::vector<Pair>{{0, 1}, {3, 1}, {5, 2}};
    for (auto [l, n] : par) {
        const auto q = oracle::expectation(mk(0.1, 0.5, l, n, Regime::paraxial),
                                           oracle::Weight::one, 1e-9);
        m.take(std::abs(q.real() - 1.0), bound,
               "|norm-1| paraxial l=" + std::to_string(l) + " n=" + std::to_string(n));
    }

    // distinct vortex charges are orthogonal
    {
        const auto q = oracle::overlap(mk(0.1, 0.75, 0), mk(0.1, 0.75, 5), 1e-9);
        m.take(std::abs(q.value), bound, "|<l=0|l=5>|");
        const auto q2 = oracle::overlap(mk(0.2, 0.75, 1), mk(0.2, 0.75, 20), 1e-9);
        m.take(std::abs(q2.value), bound, "|<l=1|l=20>|");
    }
    // same charge, different spreads: quadrature matches the closed overlap
    {
        const double sa = 0.2, sb = 0.1;
        const int l = 1;
        const auto q = oracle::overlap(mk(sa, 0.75, l), mk(sb, 0.75, l), 1e-9);
        const double sc2 = 2.0 / (1.0 / (sa * sa) + 1.0 / (sb * sb));
        const double chia = 2.0 / (sa * sa), chib = 2.0 / (sb * sb);
        const double chic = 0.5 * (chia + chib);
        const double log_closed =
            (l + 1.0) * (std::log(sc2) - std::log(sa * sb)) +
            specfun::bessel_k_scaled(l + 1.0, chic).log_mag -
            0.5 * (specfun::bessel_k_scaled(l + 1.0, chia).log_mag +
                   specfun::bessel_k_scaled(l + 1.0, chib).log_mag);
        m.take(std::abs(q.real() - std::exp(log_closed)), bound, "spread-pair overlap");
    }

    r.passed = m.ok;
    r.detail = m.summary();
    return r;
}

// ---- criterion 2: closed-form moments vs quadrature ------------------------

CriterionResult crit2(const Options& opt) {
    CriterionResult r{2, "moments-vs-quadrature", false, "", 0.0};
    const double bound = 1e-6 * opt.tol_scale;
    Meter m;

    const std::vector<double> sigmas =
        opt.quick ? std::vector<double>{0.1} : std::vector<double>{0.2, 0.1, 0.05};
    const std::vector<int> ells = opt.quick ? std::vector<int>{0, 5} : std::vector<int>{0, 1, 5, 20};
    for (double s : sigmas)
        for (int l : ells) {
            const PacketSpec spec = mk(s, 0.75, l);
            const std::string tag = " s=" + fix(s) + " l=" + std::to_string(l);
            const double norm = oracle::expectation(spec, oracle::Weight::one, 1e-8).real();
            const double qe = oracle::expectation(spec, oracle::Weight::energy, 1e-8).real() / norm;
            const double qz = oracle::expectation(spec, oracle::Weight::pz, 1e-8).real() / norm;
            const double qp = oracle::expectation(spec, oracle::Weight::pperp, 1e-8).real() / norm;

            const double ratio = obs::momentum_ratio_exact(spec);
            m.take(std::abs(qe / (spec.ebar() * ratio) - 1.0), bound, "energy" + tag);
            m.take(std::abs(qz / (spec.mean_p * ratio) - 1.0), bound, "pz" + tag);
            m.take(std::abs(qp / obs::mean_pperp_exact(spec) - 1.0), bound, "pperp" + tag);
            const double ml = std::sqrt(qe * qe - qz * qz);
            m.take(std::abs(ml / obs::invariant_mass(spec) - 1.0), bound, "mass" + tag);
        }

    r.passed = m.ok;
    r.detail = m.summary();
    return r;
}

// ---- criterion 3: remainder shrink law --------------------------------------

CriterionResult crit3(const Options& opt) {
    CriterionResult r{3, "remainder-shrink-law", false, "", 0.0};
    const double half = 0.25 * opt.tol_scale;  // band half-width, relative

    auto energy_rem = [](double s, int l) {
        const PacketSpec q = mk(s, 0.75, l);
        return std::abs(obs::momentum_ratio_exact(q) - obs::momentum_ratio_expansion(q));
    };
    auto excess_rem = [](double s, int l) {
        const PacketSpec q = mk(s, 0.75, l);
        return std::abs(obs::mass_excess_exact(q) - obs::mass_excess_expansion(q));
    };
    auto pperp_rem = [](double s, int l) {
        const PacketSpec q = mk(s, 0.75, l);
        return std::abs(obs::mean_pperp_exact(q) - obs::mean_pperp_expansion(q)) / q.sigma();
    };

    bool ok = true;
    std::ostringstream d;
    d << std::fixed << std::setprecision(1) << "shrink factors sigma 0.1->0.05:";
    for (int l : {1, 10})
        for (int which : {0, 1, 2}) {
            const char* names[] = {"energy", "excess", "pperp"};
            double rem_hi, rem_lo;
            switch (which) {
                case 0: rem_hi = energy_rem(0.1, l), rem_lo = energy_rem(0.05, l); break;
                case 1: rem_hi = excess_rem(0.1, l), rem_lo = excess_rem(0.05, l); break;
                default: rem_hi = pperp_rem(0.1, l), rem_lo = pperp_rem(0.05, l); break;
            }
            const double factor = rem_hi / rem_lo;
            // The sigma^4 coefficient of the mass-excess remainder carries
            // l(l-1) and vanishes identically at l = 1, so that remainder is
            // O(sigma^6) and must shrink by 64, not 16.
            const double target = (which == 1 && l == 1) ? 64.0 : 16.0;
            const bool pass = in_band(factor, target * (1.0 - half), target * (1.0 + half));
            ok = ok && pass;
            d << ' ' << names[which] << "(l=" << l << ")=" << factor
              << (target == 64.0 ? "/64" : "/16") << (pass ? "" : "<-FAIL");
        }
    d << "; amended: excess at l=1 is a sigma^6 remainder (its sigma^4 coefficient "
         "l(l-1) vanishes), checked against 64 +/- 25% instead of 16";

    r.passed = ok;
    r.detail = d.str();
    return r;
}

// ---- criterion 4: heavy-vortex window ----------------------------------------

CriterionResult crit4(const Options& opt) {
    CriterionResult r{4, "heavy-vortex-window", false, "", 0.0};
    const double s = units::sigma_perp_nm_to_sigma_over_m(0.4);
    const PacketSpec spec = mk(s, 1.0, 1000);
    const double dm = obs::mass_excess_exact(spec);
    const double lead = obs::mass_excess_expansion(spec);
    const bool window = in_band(dm, 1e-4, 1e-3);
    const double rel = std::abs(dm - lead) / dm;
    const bool agree = rel <= 0.03 * opt.tol_scale;
    r.passed = window && agree;
    r.detail = "l=1000 focused to 0.4 nm: relative mass excess " + sci(dm, 3) +
               " (window [1e-4,1e-3]" + (window ? "" : " FAIL") +
               "); leading-term deviation " + sci(rel) + " (bound " +
               sci(0.03 * opt.tol_scale) + (agree ? ")" : ") FAIL");
    return r;
}

// ---- criterion 5: position-space transform consistency -----------------------

CriterionResult crit5(const Options& opt) {
    CriterionResult r{5, "transform-consistency", false, "", 0.0};
    const double bound = 1e-6 * opt.tol_scale;
    Meter m;
    int used = 0, total = 0;

    const std::vector<int> ells = opt.quick ? std::vector<int>{0} : std::vector<int>{0, 2};
    for (int l : ells) {
        const PacketSpec spec = mk(0.2, 0.5, l);
        const double w = 1.0 / spec.sigma();           // transverse length scale
        const double zc10 = spec.ubar() * 10.0;        // packet centre at t = 10
        const double zw = w * spec.mass / spec.ebar(); // lab-frame length scale

        std::vector<SpacetimePoint> pts = {
            {0.3 * w, 0.0, 0.0, 0.0},
            {1.0 * w, 0.7, 0.5 * zw, 0.0},
            {2.0 * w, 1.3, -0.5 * zw, 0.0},
            {0.6 * w, 2.1, 0.7 * zw, 0.0},
            {1.5 * w, -0.9, 0.2 * zw, 0.0},
        };
        if (!opt.quick) {
            pts.push_back({0.5 * w, 0.4, zc10, 10.0});
            pts.push_back({1.2 * w, -1.8, zc10 + 0.6 * zw, 10.0});
            pts.push_back({2.2 * w, 2.9, zc10 - 0.4 * zw, 10.0});
            pts.push_back({0.9 * w, 0.0, zc10 + 0.7 * zw, 10.0});
            pts.push_back({1.7 * w, 1.1, zc10, 10.0});
        }

        const double rho_pk = l > 0 ? std::sqrt(double(l)) * w : 0.0;
        const double log_peak = wavefunctions::psi_vortex_x(spec, {rho_pk, 0.0, 0.0, 0.0}).log_mag;
        const double log_floor = log_peak + std::log(1e-6);

        for (const auto& x : pts) {
            ++total;
            const auto closed = wavefunctions::psi_vortex_x(spec, x);
            if (closed.log_mag < log_floor) continue;  // outside the comparison region
            ++used;
            const auto quad = oracle::fourier_to_x(spec, x, 1e-8);
            const double rel = std::abs(closed.to_complex() - quad.value) / closed.abs();
            m.take(rel, bound, "l=" + std::to_string(l) + " rho=" + fix(x.rho, 1) +
                                   " t=" + fix(x.t, 0));
        }
    }

    const bool enough = used >= (opt.quick ? 4 : 8);
    r.passed = m.ok && enough;
    r.detail = m.summary() + "; " + std::to_string(used) + "/" + std::to_string(total) +
               " points above the 1e-6 amplitude floor" + (enough ? "" : " (too few) FAIL");
    return r;
}

// ---- criterion 6: wave-equation residuals -------------------------------------

CriterionResult crit6(const Options& opt) {
    CriterionResult r{6, "wave-equation-residuals", false, "", 0.0};
    const double half = 0.5 * opt.tol_scale;  // convergence-ratio band half-width
    bool ok = true;
    std::ostringstream d;
    d << std::fixed << std::setprecision(2) << "h-halving residual ratios:";

    // Exact states satisfy the dispersion identically: the finite-difference
    // residual is pure discretization error and shrinks by 4 per h-halving.
    for (int l : {0, 2}) {
        const PacketSpec spec = mk(0.2, 0.5, l);
        const SpacetimePoint x{0.8 / spec.sigma(), 0.3, 0.15, 0.25};
        const double hs[] = {0.16, 0.08, 0.04, 0.02};
        double res[4];
        for (int i = 0; i < 4; ++i) res[i] = oracle::pde_residual(spec, x, hs[i]).relative_residual;
        for (int i = 1; i < 3; ++i) {
            const double ratio = res[i] / res[i + 1];
            const bool pass = in_band(ratio, 4.0 - half, 4.0 + half);
            ok = ok && pass;
            d << " l=" << l << " h=" << hs[i] << ": " << ratio << (pass ? "" : "<-FAIL");
        }
    }

    // The beam-like state is only an approximate solution: its residual
    // plateaus at a physical value instead of vanishing with h.
    {
        const PacketSpec par = mk(0.1, 0.5, 2, 0, Regime::paraxial);
        const PacketSpec exact = mk(0.1, 0.5, 2);
        const SpacetimePoint x{0.8 / par.sigma(), 0.3, 0.15, 0.25};
        const double p1 = oracle::pde_residual(par, x, 0.02).relative_residual;
        const double p2 = oracle::pde_residual(par, x, 0.01).relative_residual;
        const double e2 = oracle::pde_residual(exact, x, 0.01).relative_residual;
        const bool plateau = in_band(p1 / p2, 0.5, 2.0);
        const bool separated = p2 >= 10.0 * e2 / opt.tol_scale;
        ok = ok && plateau && separated;
        d << std::scientific << std::setprecision(1) << "; beam residual " << p2
          << (plateau ? " (plateau)" : " (NO plateau) FAIL") << " vs exact " << e2
          << (separated ? " (>=10x)" : " (<10x) FAIL");
    }

    r.passed = ok;
    r.detail = d.str();
    return r;
}

// ---- criterion 7: profile tail laws --------------------------------------------

CriterionResult crit7(const Options& opt) {
    CriterionResult r{7, "profile-tail-laws", false, "", 0.0};
    bool ok = true;
    std::ostringstream d;

    // Exact packet: the large-rho amplitude falls as rho^{-3/2} e^{-rho/lc};
    // after removing the known power prefactor the log-slope is -1/lc. (The
    // power factor alone would bias a raw fit by ~5% on this window, so the
    // exponential rate is what the fit isolates.) The spread must keep the
    // window asymptotic: the crossover sits at rho ~ m/sigma^2, so the
    // 2-Compton-width state (sigma/m = 1/2, crossover at 4 lc) is fitted,
    // not a weakly focused one whose crossover would cut through [20, 40].
    {
        const PacketSpec spec = mk(0.5, 0.0, 1);
        std::vector<double> xs, ys;
        for (int i = 0; i <= 20; ++i) {
            const double rho = 20.0 + i;
            const auto a = wavefunctions::psi_vortex_x(spec, {rho, 0.0, 0.0, 0.0});
            xs.push_back(rho);
            ys.push_back(a.log_mag + 1.5 * std::log(rho));
        }
        const double slope = least_squares_slope(xs, ys);
        const bool pass = std::abs(slope + 1.0) <= 0.02 * opt.tol_scale;
        ok = ok && pass;
        d << "exact tail rate " << fix(slope, 4) << " per Compton length (target -1 +/- "
          << fix(0.02 * opt.tol_scale, 4) << ")" << (pass ? "" : " FAIL");
    }

    // Beam-like packet: Gaussian transverse falloff with the configured width,
    // fitted at the two focus widths the profile figure uses (2 and 10 Compton
    // lengths, i.e. momentum spreads 0.5 m and 0.1 m).
    const struct {
        double sigma;
        int l;
    } beam_cases[] = {{0.5, 0}, {0.1, 0}, {0.1, 1}};
    for (const auto& bc : beam_cases) {
        const PacketSpec spec = mk(bc.sigma, 0.5, bc.l, 0, Regime::paraxial);
        const double w = 1.0 / spec.sigma();
        std::vector<double> xs, ys;
        for (int i = 0; i <= 20; ++i) {
            const double rho = (0.2 + 0.1 * i) * w;
            const auto a = wavefunctions::psi_paraxial_x(spec, {rho, 0.0, 0.0, 0.0});
            xs.push_back(rho * rho);
            ys.push_back(a.log_mag - bc.l * std::log(rho));
        }
        const double slope = least_squares_slope(xs, ys);  // -1/(2 w^2)
        const double w_fit = std::sqrt(-0.5 / slope);
        const bool pass = std::abs(w_fit / w - 1.0) <= 0.01 * opt.tol_scale;
        ok = ok && pass;
        d << "; width fit sigma=" << fix(bc.sigma, 1) << " l=" << bc.l << ": "
          << fix(w_fit / w, 5) << " of configured" << (pass ? "" : " FAIL");
    }

    r.passed = ok;
    r.detail = d.str();
    return r;
}

// ---- criterion 8: transverse momentum curve -------------------------------------

CriterionResult crit8(const Options& opt) {
    CriterionResult r{8, "transverse-momentum-curve", false, "", 0.0};
    Meter m;
    bool ok = true;
    std::ostringstream extra;

    const double sigma = 1e-3;  // comfortably beam-like even at l = 1000
    for (int l : {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000}) {
        const PacketSpec spec = mk(sigma, 0.5, l, 0, Regime::paraxial);
        const double v = obs::lg_moments(spec, 0.0).mean_pperp / sigma;
        const double ref = specfun::gamma_ratio_half(l);
        m.take(std::abs(v / ref - 1.0), 1e-10 * opt.tol_scale, "l=" + std::to_string(l));
        if (l >= 50) {
            const bool near_sqrt = std::abs(v / std::sqrt(double(l)) - 1.0) <= 0.02 * opt.tol_scale;
            ok = ok && near_sqrt;
            if (!near_sqrt) extra << " sqrt-l deviation at l=" << l << " FAIL;";
        }
        if (l == 1000) {
            const bool headline = in_band(v, 31.5, 31.7);
            ok = ok && headline;
            extra << " value at l=1000: " << fix(v, 3) << (headline ? "" : " FAIL");
        }
    }

    r.passed = m.ok && ok;
    r.detail = m.summary() + ";" + extra.str() + "; sqrt-l within 2% for l >= 50";
    return r;
}

// ---- criterion 9: radial node structure -------------------------------------------

CriterionResult crit9(const Options& opt) {
    CriterionResult r{9, "radial-node-structure", false, "", 0.0};
    bool ok = true;
    std::ostringstream d;
    d << "radial maxima counts:";

    for (int l : {3, 50}) {
        double var0 = 0.0;
        for (int n : {0, 1, 3}) {
            // transverse radial density ~ u^{2l+1} [L_n^l(u^2)]^2 e^{-u^2}
            const double hi = std::sqrt(2.0 * n + l + 1.0) + 6.0;
            const int N = 4000;
            std::vector<double> f(N + 1, 0.0);
            double fmax = 0.0;
            for (int i = 1; i <= N; ++i) {
                const double u = hi * i / N;
                const double lag = specfun::laguerre(n, l, u * u);
                if (lag == 0.0) continue;
                const double logf =
                    (2.0 * l + 1.0) * std::log(u) - u * u + 2.0 * std::log(std::abs(lag));
                f[i] = std::exp(logf);
                fmax = std::max(fmax, f[i]);
            }
            int maxima = 0;
            for (int i = 1; i < N; ++i)
                if (f[i] > f[i - 1] && f[i] > f[i + 1] && f[i] > 1e-12 * fmax) ++maxima;
            const bool pass = maxima == n + 1;
            ok = ok && pass;
            d << " (l=" << l << ",n=" << n << "): " << maxima << "/" << (n + 1)
              << (pass ? "" : "<-FAIL");

            // radial variance by direct sums on the same grid
            double s0 = 0, s1 = 0, s2 = 0;
            for (int i = 1; i <= N; ++i) {
                const double u = hi * i / N;
                s0 += f[i];
                s1 += f[i] * u;
                s2 += f[i] * u * u;
            }
            const double var = s2 / s0 - (s1 / s0) * (s1 / s0);
            if (n == 0)
                var0 = var;
            else {
                const bool wider = var > var0;
                ok = ok && wider;
                if (!wider) d << " variance(n=" << n << ") not above n=0 at l=" << l << " FAIL";
            }
        }
    }
    (void)opt;

    r.passed = ok;
    r.detail = d.str() + "; excited radial modes have larger radial variance";
    return r;
}

// ---- criterion 10: fermion moment corrections ----------------------------------------

CriterionResult crit10(const Options& opt) {
    CriterionResult r{10, "fermion-moment-corrections", false, "", 0.0};
    const double corr_bound = 0.05 * opt.tol_scale;  // on the correction magnitude
    Meter m;
    bool ok = true;
    std::ostringstream extra;

    struct Case { int l; double pbar; };
    const std::vector<Case> cases = opt.quick
                                        ? std::vector<Case>{{20, 1.0}}
                                        : std::vector<Case>{{0, 0.0}, {0, 1.0}, {20, 0.0}, {20, 1.0}};
    for (const auto& c : cases) {
        const PacketSpec spec = mk(0.02, c.pbar, c.l);
        const std::string tag = " l=" + std::to_string(c.l) + " p=" + fix(c.pbar, 0);
        const auto q = oracle::moment_quadrature_fermion(spec, 1e-10);

        if (c.l == 0) {
            const bool zero = std::abs(q.mu_b_z.real()) < 1e-12;
            ok = ok && zero;
            if (!zero) extra << " orbital moment not zero at l=0 FAIL;";
        } else {
            const double lead = obs::magnetic_moment_orbital_leading(spec)[2];
            const double corr_quad = q.mu_b_z.real() - lead;
            const double corr_closed = obs::magnetic_moment_orbital(spec)[2] - lead;
            m.take(std::abs(corr_quad - corr_closed), corr_bound * std::abs(corr_closed),
                   "orbital correction" + tag);
        }
        {
            const double lead = obs::magnetic_moment_spin_leading(spec)[2];
            const double corr_quad = q.mu_s_z.real() - lead;
            const double corr_closed = obs::magnetic_moment_spin(spec)[2] - lead;
            m.take(std::abs(corr_quad - corr_closed), corr_bound * std::abs(corr_closed),
                   "spin correction" + tag);
        }
    }

    // spin-orbit shift: extract the piece of <p_perp^2>/pbar^2 that grows
    // with the vortex charge (the l = 0 baseline subtracted) at pbar = m
    {
        const PacketSpec sv = mk(0.02, 1.0, 20), s0 = mk(0.02, 1.0, 0);
        auto pperp2 = [](const PacketSpec& s) {
            const double norm = oracle::expectation(s, oracle::Weight::one, 1e-9).real();
            return oracle::expectation(s, oracle::Weight::pperp2, 1e-9).real() / norm;
        };
        const double extracted =
            (1.0 - sv.mass / sv.ebar()) * (pperp2(sv) - pperp2(s0)) / (sv.mean_p * sv.mean_p);
        const double closed = obs::sok_delta_leading(sv);
        const double rel = std::abs(extracted / closed - 1.0);
        const bool pass = rel <= 0.10 * opt.tol_scale;
        ok = ok && pass;
        extra << " spin-orbit shift deviation " << sci(rel) << " (bound "
              << sci(0.10 * opt.tol_scale) << ")" << (pass ? "" : " FAIL");
    }

    r.passed = m.ok && ok;
    r.detail = m.summary() + ";" + extra.str();
    return r;
}

// ---- criterion 11: boost invariance ------------------------------------------------

CriterionResult crit11(const Options& opt) {
    CriterionResult r{11, "boost-invariance", false, "", 0.0};
    const double closed_bound = 1e-8 * opt.tol_scale;
    const double amp_bound = 1e-6 * opt.tol_scale;
    Meter m;

    const PacketSpec spec = mk(0.05, 0.3, 5);
    const PacketSpec par = mk(0.05, 0.5, 3, 1, Regime::paraxial);
    for (double eta : {1.0, 2.0}) {
        const PacketSpec b = spec.boosted(eta);
        m.take(std::abs(obs::invariant_mass(b) / obs::invariant_mass(spec) - 1.0), closed_bound,
               "effective mass, eta=" + fix(eta, 0));
        m.take(std::abs(obs::mass_excess_exact(b) / obs::mass_excess_exact(spec) - 1.0),
               closed_bound, "mass excess, eta=" + fix(eta, 0));

        const double t = 1.7 * kinematics::diffraction_time_perp(par);
        const PacketSpec pb = par.boosted(eta);
        const double tb = t * pb.ebar() / par.ebar();
        m.take(std::abs((tb / kinematics::diffraction_time_perp(pb)) /
                            (t / kinematics::diffraction_time_perp(par)) -
                        1.0),
               closed_bound, "spreading phase argument, eta=" + fix(eta, 0));
    }

    // amplitude invariance of the exact state at arbitrary events
    {
        const PacketSpec e = mk(0.2, 0.4, 2);
        const SpacetimePoint events[] = {
            {3.0, 0.9, 1.2, 2.0}, {6.0, -1.4, -0.8, 0.7}, {1.5, 2.2, 2.5, 3.1}};
        for (double eta : {1.0, 2.0}) {
            const PacketSpec be = e.boosted(eta);
            const double ch = std::cosh(eta), sh = std::sinh(eta);
            for (const auto& x : events) {
                const SpacetimePoint xb{x.rho, x.phi_r, x.z * ch + x.t * sh, x.t * ch + x.z * sh};
                const double la = wavefunctions::psi_vortex_x(e, x).log_mag;
                const double lb = wavefunctions::psi_vortex_x(be, xb).log_mag;
                m.take(std::abs(lb - la), amp_bound, "exact amplitude, eta=" + fix(eta, 0));
            }
        }
    }
    // amplitude invariance of the beam state on its centre plane z = u t,
    // where every magnitude ingredient is an invariant combination
    {
        const double td = kinematics::diffraction_time_perp(par);
        const double w = 1.0 / par.sigma();
        const double ts[] = {0.0, 0.3 * td, 0.8 * td};
        // radii chosen off the radial node of the n = 1 profile
        const double rhos[] = {1.8 * w, 0.5 * w, 1.3 * w};
        for (double eta : {1.0, 2.0}) {
            const PacketSpec pb = par.boosted(eta);
            const double ch = std::cosh(eta), sh = std::sinh(eta);
            for (int i = 0; i < 3; ++i) {
                const double t = ts[i], z = par.ubar() * t;
                const SpacetimePoint x{rhos[i], 0.7, z, t};
                const SpacetimePoint xb{rhos[i], 0.7, z * ch + t * sh, t * ch + z * sh};
                const double la = wavefunctions::psi_paraxial_x(par, x).log_mag;
                const double lb = wavefunctions::psi_paraxial_x(pb, xb).log_mag;
                const bool both_zero = std::isinf(la) && la < 0.0 && std::isinf(lb) && lb < 0.0;
                const double diff = both_zero ? 0.0 : std::abs(lb - la);
                m.take(diff, amp_bound, "beam amplitude, eta=" + fix(eta, 0));
            }
        }
    }

    r.passed = m.ok;
    r.detail = m.summary();
    return r;
}

// ---- criterion 12: uncertainty floor --------------------------------------------------

CriterionResult crit12(const Options& opt) {
    CriterionResult r{12, "uncertainty-floor", false, "", 0.0};
    Meter m;
    bool ok = true;
    std::ostringstream extra;

    // Cartesian product at n = 0: (1/2)(|l|+1) sqrt(1+(t/td)^2) exactly
    for (int l : {0, 1, 5, 20, 100})
        for (double tau : {0.0, 1.0, 3.0}) {
            const PacketSpec spec = mk(0.07, 0.4, l, 0, Regime::paraxial);
            const double t = tau * kinematics::diffraction_time_perp(spec);
            const double got = obs::uncertainty_products(spec, t).second;
            const double want = 0.5 * (l + 1.0) * std::sqrt(1.0 + tau * tau);
            m.take(std::abs(got / want - 1.0), 1e-12 * opt.tol_scale,
                   "product l=" + std::to_string(l));
        }
    // For excited radial modes the exact coefficient is 2n+|l|+1: the n+|l|+1
    // reading coincides with it only at n = 0, which is what the panel above
    // pins; the 2n law itself is pinned here.
    {
        const PacketSpec spec = mk(0.07, 0.4, 3, 1, Regime::paraxial);
        const double t = 2.0 * kinematics::diffraction_time_perp(spec);
        const double got = obs::uncertainty_products(spec, t).second;
        const double want = 0.5 * 6.0 * std::sqrt(5.0);
        m.take(std::abs(got / want - 1.0), 1e-12 * opt.tol_scale, "product n=1");
    }

    // radial product near its large-l limit
    {
        const PacketSpec spec = mk(0.05, 0.4, 100, 0, Regime::paraxial);
        const double got = obs::uncertainty_products(spec, 0.0).first;
        const double want = 0.25 - 1.0 / (32.0 * 101.0);
        const bool pass = std::abs(got - want) <= 1e-3 * opt.tol_scale;
        ok = ok && pass;
        extra << " radial product at l=100: " << fix(got, 6) << " vs " << fix(want, 6)
              << (pass ? "" : " FAIL");
    }

    // no squeezing across a deterministic pseudo-random 50-case panel
    {
        std::uint64_t state = 0x9e3779b97f4a7c15ULL;
        auto next = [&state]() {  // xorshift64*, uniform in [0,1)
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            return double((state * 0x2545F4914F6CDD1DULL) >> 11) * 0x1.0p-53;
        };
        int violations = 0;
        for (int i = 0; i < 50; ++i) {
            const double sigma = 0.01 + 0.29 * next();
            const int l = int(50 * next());
            const int n = int(5 * next());
            const double tau = 10.0 * next();
            const PacketSpec spec = mk(sigma, 0.4, l, n, Regime::paraxial);
            const double t = tau * kinematics::diffraction_time_perp(spec);
            const auto ms = obs::lg_moments(spec, t);
            const double dx = std::sqrt(ms.mean_x2), dpx = std::sqrt(ms.mean_px2);
            if (dpx < sigma / std::sqrt(2.0) * (1.0 - 1e-12)) ++violations;
            if (dx < 1.0 / (sigma * std::sqrt(2.0)) * (1.0 - 1e-12)) ++violations;
            if (dx * dpx < 0.5 * (1.0 - 1e-12)) ++violations;
        }
        const bool pass = violations == 0;
        ok = ok && pass;
        extra << "; squeezing violations: " << violations << "/150 bounds";
    }

    r.passed = m.ok && ok;
    r.detail = m.summary() + ";" + extra.str();
    return r;
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return !results.empty();
}

std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << " " << std::setw(2) << r.id << " " << std::left
       << std::setw(26) << r.name << " " << r.detail << "  [" << std::fixed
       << std::setprecision(1) << r.seconds << "s]";
    return os.str();
}

std::vector<CriterionResult> run_all(const Options& opt, std::ostream* os) {
    using Fn = CriterionResult (*)(const Options&);
    const Fn fns[] = {crit1, crit2, crit3, crit4,  crit5,  crit6,
                      crit7, crit8, crit9, crit10, crit11, crit12};
    std::vector<CriterionResult> out;
    for (Fn fn : fns) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = fn(opt);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (os) *os << format_line(r) << std::endl;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace vortex::acceptance
