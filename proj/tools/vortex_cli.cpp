// Command-line front end for the vortex-packet library: observable tables,
// plot-ready figure data, the validation suite, and parameter sweeps.
//
// Output contract: CSV with a '#' metadata preamble (tool version, command,
// resolved packet parameters, method tags). No timestamps — identical inputs
// produce byte-identical output. Physical-unit ingestion (nm, keV) happens
// only here; the library works in natural units with the mass as the unit.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 numerical non-convergence.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortex/acceptance.hpp"
#include "vortex/kinematics.hpp"
#include "vortex/observables.hpp"
#include "vortex/oracle.hpp"
#include "vortex/packet_spec.hpp"
#include "vortex/specfun.hpp"
#include "vortex/units.hpp"
#include "vortex/wavefunctions.hpp"

namespace {

using vortex::PacketSpec;
using vortex::Regime;
namespace obs = vortex::observables;
namespace oracle = vortex::oracle;
namespace units = vortex::units;
namespace wf = vortex::wavefunctions;

constexpr const char* kVersion = "1.0.0";

// Thrown for anything the user can fix in the config (exit 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Thrown when a requested quadrature does not reach its tolerance (exit 3).
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// RunConfig: every key the config file (and the override flags) can set.
// ---------------------------------------------------------------------------

struct RunConfig {
    // packet description; the three transverse-size keys are alternatives,
    // as are the two longitudinal-motion keys
    std::optional<double> sigma_perp_nm;        // transverse focal size, nm
    std::optional<double> sigma_perp_lambda_c;  // same, in Compton lengths
    std::optional<double> sigma_over_m;         // transverse momentum spread / m
    std::optional<double> sigma_z_over_m;       // longitudinal spread / m (default: equal)
    std::optional<double> kinetic_kev;          // mean kinetic energy, keV
    std::optional<double> pbar_over_m;          // mean longitudinal momentum / m
    int ell = 0;                                // orbital angular momentum
    int n = 0;                                  // radial index (beam states)
    double helicity = 0.5;                      // +-0.5, fermion moments
    std::string regime = "nonparaxial";         // nonrelativistic|nonparaxial|paraxial
    double time = 0.0;                          // evaluation time, units 1/m

    // command options
    std::string which;           // figure: fig1|fig2|fig3
    std::string var;             // sweep: ell|sigma|pbar
    double from = 0.0;           // sweep range start
    double to = 0.0;             // sweep range end
    int steps = 0;               // sweep point count (0 = header-only)
    std::string out;             // output path ("" = stdout)
    std::optional<double> tol;   // quadrature tolerance; presence requests
                                 // quadrature columns in the observables table
    bool quick = false;          // validate: reduced panels
    bool corrupt = false;        // validate: self-test hook, shrinks tolerances
};

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "sigma_perp_nm", "sigma_perp_lambda_c", "sigma_over_m", "sigma_z_over_m",
        "kinetic_kev",   "pbar_over_m",         "ell",          "n",
        "helicity",      "regime",              "time",         "which",
        "var",           "from",                "to",           "steps",
        "out",           "tol",                 "quick"};
    return keys;
}

double parse_double(const std::string& key, const std::string& text) {
    const char* c = text.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c || *end != '\0')
        throw ConfigError("config key '" + key + "': not a number: '" + text + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const char* c = text.c_str();
    char* end = nullptr;
    long v = std::strtol(c, &end, 10);
    if (end == c || *end != '\0')
        throw ConfigError("config key '" + key + "': not an integer: '" + text + "'");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + text + "'");
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// key = value lines; blank lines and lines starting with '#' are ignored;
// unknown keys are errors.
void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": unknown config key: '" + key + "'");
        if (key == "sigma_perp_nm") cfg.sigma_perp_nm = parse_double(key, val);
        else if (key == "sigma_perp_lambda_c") cfg.sigma_perp_lambda_c = parse_double(key, val);
        else if (key == "sigma_over_m") cfg.sigma_over_m = parse_double(key, val);
        else if (key == "sigma_z_over_m") cfg.sigma_z_over_m = parse_double(key, val);
        else if (key == "kinetic_kev") cfg.kinetic_kev = parse_double(key, val);
        else if (key == "pbar_over_m") cfg.pbar_over_m = parse_double(key, val);
        else if (key == "ell") cfg.ell = parse_int(key, val);
        else if (key == "n") cfg.n = parse_int(key, val);
        else if (key == "helicity") cfg.helicity = parse_double(key, val);
        else if (key == "regime") cfg.regime = val;
        else if (key == "time") cfg.time = parse_double(key, val);
        else if (key == "which") cfg.which = val;
        else if (key == "var") cfg.var = val;
        else if (key == "from") cfg.from = parse_double(key, val);
        else if (key == "to") cfg.to = parse_double(key, val);
        else if (key == "steps") cfg.steps = parse_int(key, val);
        else if (key == "out") cfg.out = val;
        else if (key == "tol") cfg.tol = parse_double(key, val);
        else if (key == "quick") cfg.quick = parse_bool(key, val);
    }
}

Regime parse_regime(const std::string& name) {
    if (name == "nonrelativistic") return Regime::nonrelativistic;
    if (name == "nonparaxial") return Regime::nonparaxial;
    if (name == "paraxial") return Regime::paraxial;
    throw ConfigError("unknown regime '" + name +
                      "' (expected nonrelativistic | nonparaxial | paraxial)");
}

// Resolve physical-unit alternatives into the internal natural-unit spec.
PacketSpec resolve_spec(const RunConfig& cfg) {
    int n_sigma = int(cfg.sigma_perp_nm.has_value()) + int(cfg.sigma_perp_lambda_c.has_value()) +
                  int(cfg.sigma_over_m.has_value());
    if (n_sigma > 1)
        throw ConfigError(
            "give at most one of sigma_perp_nm | sigma_perp_lambda_c | sigma_over_m");
    double sigma = 0.1;
    if (cfg.sigma_perp_nm) sigma = units::sigma_perp_nm_to_sigma_over_m(*cfg.sigma_perp_nm);
    if (cfg.sigma_perp_lambda_c) sigma = 1.0 / *cfg.sigma_perp_lambda_c;
    if (cfg.sigma_over_m) sigma = *cfg.sigma_over_m;

    if (cfg.kinetic_kev && cfg.pbar_over_m)
        throw ConfigError("give at most one of kinetic_kev | pbar_over_m");
    double pbar = 0.0;
    if (cfg.kinetic_kev) pbar = units::kinetic_keV_to_pbar_over_m(*cfg.kinetic_kev);
    if (cfg.pbar_over_m) pbar = *cfg.pbar_over_m;

    PacketSpec spec;
    spec.sigma_perp_p = sigma;
    spec.sigma_z_p = cfg.sigma_z_over_m ? *cfg.sigma_z_over_m : sigma;
    spec.mean_p = pbar;
    spec.ell = cfg.ell;
    spec.n_radial = cfg.n;
    spec.helicity = cfg.helicity;
    spec.regime = parse_regime(cfg.regime);
    try {
        spec.validate_or_throw();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Table output
// ---------------------------------------------------------------------------

struct Table {
    std::vector<std::string> preamble;  // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Quote a cell iff it contains a separator; embedded quotes are doubled.
std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += "\"\"";
        else q += c;
    }
    q += "\"";
    return q;
}

void write_table(const Table& t, const std::string& out_path) {
    std::ostringstream body;
    for (const auto& p : t.preamble) body << "# " << p << "\n";
    for (size_t i = 0; i < t.header.size(); ++i)
        body << (i ? "," : "") << csv_cell(t.header[i]);
    body << "\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) body << (i ? "," : "") << csv_cell(row[i]);
        body << "\n";
    }
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw ConfigError("cannot open output file: " + out_path);
        f << body.str();
    }
}

std::string spec_line(const PacketSpec& spec, double time) {
    std::ostringstream s;
    s << "spec: regime=" << vortex::regime_name(spec.regime)
      << " sigma_over_m=" << fmt(spec.sigma_perp_p) << " sigma_z_over_m=" << fmt(spec.sigma_z_p)
      << " pbar_over_m=" << fmt(spec.mean_p) << " ell=" << spec.ell << " n=" << spec.n_radial
      << " helicity=" << fmt(spec.helicity) << " time=" << fmt(time);
    return s.str();
}

// ---------------------------------------------------------------------------
// observables
// ---------------------------------------------------------------------------

oracle::QuadratureResult converged_expectation(const PacketSpec& spec, oracle::Weight w,
                                               double tol, const std::string& label) {
    auto q = oracle::expectation(spec, w, tol);
    if (!q.converged)
        throw ConvergenceError("quadrature for '" + label + "' did not reach tolerance " +
                               fmt(tol));
    return q;
}

struct QuadCell {
    double value = 0.0;
    double error = 0.0;
};

// Independent quadrature values for the observables that have a momentum-space
// weight, keyed by the report row they cross-check.
std::map<std::string, QuadCell> quadrature_column(const PacketSpec& spec, double tol) {
    std::map<std::string, QuadCell> col;
    auto put = [&](const std::string& name, double v, double e) {
        col[name] = QuadCell{v, e};
    };
    const auto qn = converged_expectation(spec, oracle::Weight::one, tol, "norm");
    const double norm = qn.real();
    auto normalized = [&](oracle::Weight w, const std::string& label) {
        auto q = converged_expectation(spec, w, tol, label);
        return QuadCell{q.real() / norm, (q.abs_error + q.truncation_bound) / norm};
    };

    if (spec.regime == Regime::nonparaxial) {
        const QuadCell e = normalized(oracle::Weight::energy, "mean_energy");
        const QuadCell pz = normalized(oracle::Weight::pz, "mean_pz");
        const QuadCell pp = normalized(oracle::Weight::pperp, "mean_pperp");
        const QuadCell uz = normalized(oracle::Weight::pz_over_energy, "mean_velocity");
        put("mean_energy", e.value, e.error);
        put("mean_pz", pz.value, pz.error);
        put("mean_pperp", pp.value, pp.error);
        put("mean_velocity", uz.value, uz.error);
        const double ml = std::sqrt(e.value * e.value - pz.value * pz.value);
        put("invariant_mass", ml, e.error + pz.error);

        // mass excess is measured against the zero-vortex packet of the same
        // spreads, so that reference is integrated too
        PacketSpec ref = spec;
        ref.ell = 0;
        const auto rn = converged_expectation(ref, oracle::Weight::one, tol, "reference norm");
        auto re = converged_expectation(ref, oracle::Weight::energy, tol, "reference energy");
        auto rz = converged_expectation(ref, oracle::Weight::pz, tol, "reference pz");
        const double e0 = re.real() / rn.real(), z0 = rz.real() / rn.real();
        const double ml0 = std::sqrt(e0 * e0 - z0 * z0);
        put("mass_excess", ml / ml0 - 1.0,
            (e.error + pz.error + re.abs_error + rz.abs_error) / ml0);

        auto fm = oracle::moment_quadrature_fermion(spec, tol);
        for (const auto* q : {&fm.mu_b_z, &fm.mu_s_z})
            if (!q->converged)
                throw ConvergenceError("fermion moment quadrature did not reach tolerance " +
                                       fmt(tol));
        put("magnetic_moment_orbital", fm.mu_b_z.real(),
            fm.mu_b_z.abs_error + fm.mu_b_z.truncation_bound);
        put("magnetic_moment_spin", fm.mu_s_z.real(),
            fm.mu_s_z.abs_error + fm.mu_s_z.truncation_bound);
    } else if (spec.regime == Regime::paraxial) {
        const QuadCell pp = normalized(oracle::Weight::pperp, "mean_pperp");
        const QuadCell pp2 = normalized(oracle::Weight::pperp2, "mean_pperp2");
        put("mean_pperp", pp.value, pp.error);
        put("mean_pperp2", pp2.value, pp2.error);
    } else {
        const QuadCell pp = normalized(oracle::Weight::pperp, "mean_pperp");
        const QuadCell pp2 = normalized(oracle::Weight::pperp2, "mean_pperp2");
        const QuadCell pz = normalized(oracle::Weight::pz, "mean_pz");
        put("mean_pperp", pp.value, pp.error);
        put("mean_pperp2", pp2.value, pp2.error);
        put("mean_pz", pz.value, pz.error);
    }
    return col;
}

int cmd_observables(const RunConfig& cfg) {
    const PacketSpec spec = resolve_spec(cfg);
    const auto report = obs::full_report(spec, cfg.time);

    // Rows named <base>_expansion are folded into <base> as its expansion
    // columns; everything else keeps its own row.
    struct Line {
        std::string name, method, warning;
        double value = 0.0, error = 0.0;
        bool has_expansion = false;
        double expansion = 0.0, expansion_error = 0.0;
        bool has_quad = false;
        QuadCell quad;
    };
    std::vector<Line> lines;
    auto find_line = [&](const std::string& name) -> Line* {
        for (auto& l : lines)
            if (l.name == name) return &l;
        return nullptr;
    };
    const std::string suffix = "_expansion";
    for (const auto& r : report) {
        if (r.name.size() > suffix.size() &&
            r.name.compare(r.name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            if (Line* base = find_line(r.name.substr(0, r.name.size() - suffix.size()))) {
                base->has_expansion = true;
                base->expansion = r.value;
                base->expansion_error = r.error_estimate;
                if (base->warning.empty()) base->warning = r.warning;
                continue;
            }
        }
        Line l;
        l.name = r.name;
        l.method = obs::method_name(r.method);
        l.warning = r.warning;
        l.value = r.value;
        l.error = r.error_estimate;
        lines.push_back(std::move(l));
    }
    if (cfg.tol) {
        auto col = quadrature_column(spec, *cfg.tol);
        for (auto& l : lines) {
            auto it = col.find(l.name);
            if (it != col.end()) {
                l.has_quad = true;
                l.quad = it->second;
            }
        }
    }

    Table t;
    t.preamble = {std::string("vortex-cli ") + kVersion, "command: observables",
                  spec_line(spec, cfg.time),
                  "methods: closed-form | expansion-O(sigma^2/m^2) | quadrature"};
    if (cfg.tol) t.preamble.push_back("quadrature_tol: " + fmt(*cfg.tol));
    t.header = {"name",      "value",           "method",
                "error",     "expansion",       "expansion_error",
                "quadrature", "quadrature_error", "warning"};
    for (const auto& l : lines) {
        t.rows.push_back({l.name, fmt(l.value), l.method, fmt(l.error),
                          l.has_expansion ? fmt(l.expansion) : "",
                          l.has_expansion ? fmt(l.expansion_error) : "",
                          l.has_quad ? fmt(l.quad.value) : "", l.has_quad ? fmt(l.quad.error) : "",
                          l.warning});
    }
    write_table(t, cfg.out);
    return 0;
}

// ---------------------------------------------------------------------------
// figure
// ---------------------------------------------------------------------------

// Radial magnitude profiles at the focal plane: the exact packet focused to
// 2 Compton lengths against beam states focused to 2 and 10 Compton lengths.
// Curves are ln|psi| shifted so each maximum over the plotted range is 0.
Table figure_profiles(const RunConfig& cfg) {
    auto make = [&](double sigma, Regime regime) {
        PacketSpec s;
        s.sigma_perp_p = s.sigma_z_p = sigma;
        s.mean_p = 0.0;
        s.ell = cfg.ell;
        s.n_radial = 0;
        s.regime = regime;
        return s;
    };
    const PacketSpec exact = make(0.5, Regime::nonparaxial);
    const PacketSpec beam2 = make(0.5, Regime::paraxial);
    const PacketSpec beam10 = make(0.1, Regime::paraxial);

    std::vector<double> r, le, l2, l10;
    for (int i = 1; i <= 180; ++i) {
        const double rho = 0.25 * i;
        const wf::SpacetimePoint x{rho, 0.0, 0.0, 0.0};
        r.push_back(rho);
        le.push_back(wf::psi_vortex_x(exact, x).log_mag);
        l2.push_back(wf::psi_paraxial_x(beam2, x).log_mag);
        l10.push_back(wf::psi_paraxial_x(beam10, x).log_mag);
    }
    auto normalize = [](std::vector<double>& v) {
        const double peak = *std::max_element(v.begin(), v.end());
        for (double& x : v) x -= peak;
    };
    normalize(le);
    normalize(l2);
    normalize(l10);

    Table t;
    t.preamble = {std::string("vortex-cli ") + kVersion, "command: figure fig1",
                  "curves: exact packet focused to 2 Compton lengths; beam packets focused to 2 "
                  "and 10 Compton lengths; ell=" + std::to_string(cfg.ell) +
                      " n=0 pbar_over_m=0 time=0",
                  "normalization: each column is ln|psi| minus its maximum over the range"};
    t.header = {"r_over_lambda_c", "log_psi_exact", "log_psi_beam_2lc", "log_psi_beam_10lc"};
    for (size_t i = 0; i < r.size(); ++i)
        t.rows.push_back({fmt(r[i]), fmt(le[i]), fmt(l2[i]), fmt(l10[i])});
    return t;
}

// Mean transverse momentum of the beam state in units of the spread, against
// the vortex charge.
Table figure_pperp_curve(const RunConfig& cfg) {
    const double sigma = 1e-3;
    Table t;
    t.preamble = {std::string("vortex-cli ") + kVersion, "command: figure fig2",
                  "curve: beam-state <p_perp>/sigma against |ell|, n=" + std::to_string(cfg.n)};
    t.header = {"ell", "pperp_over_sigma"};
    for (int l = 0; l <= 100; ++l) {
        PacketSpec s;
        s.sigma_perp_p = s.sigma_z_p = sigma;
        s.mean_p = 0.0;
        s.ell = l;
        s.n_radial = cfg.n;
        s.regime = Regime::paraxial;
        const double v = obs::lg_moments(s, 0.0).mean_pperp / sigma;
        t.rows.push_back({std::to_string(l), fmt(v)});
    }
    return t;
}

// Focal-plane radial intensity of the beam state for two vortex charges and
// three radial indices, each curve normalized to its own maximum.
Table figure_radial_intensity(const RunConfig&) {
    const int ells[] = {3, 50};
    const int ns[] = {0, 1, 3};
    const int points = 501;

    Table t;
    t.preamble = {std::string("vortex-cli ") + kVersion, "command: figure fig3",
                  "curves: |psi|^2 against rho*sigma at time=0 for ell in {3,50}, n in {0,1,3}",
                  "normalization: each intensity column divided by its maximum over the range"};
    t.header = {"rho_sigma"};
    std::vector<std::vector<double>> logs;
    for (int l : ells)
        for (int n : ns) {
            t.header.push_back("intensity_l" + std::to_string(l) + "_n" + std::to_string(n));
            PacketSpec s;
            s.sigma_perp_p = s.sigma_z_p = 1.0;
            s.mean_p = 0.0;
            s.ell = l;
            s.n_radial = n;
            s.regime = Regime::paraxial;
            std::vector<double> col;
            for (int i = 0; i < points; ++i) {
                const double x = 0.02 * i;  // rho * sigma, with sigma = 1 internally
                col.push_back(2.0 * wf::psi_paraxial_x(s, {x, 0.0, 0.0, 0.0}).log_mag);
            }
            const double peak = *std::max_element(col.begin(), col.end());
            for (double& v : col) v = std::exp(v - peak);
            logs.push_back(std::move(col));
        }
    for (int i = 0; i < points; ++i) {
        std::vector<std::string> row{fmt(0.02 * i)};
        for (const auto& col : logs) row.push_back(fmt(col[i]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

int cmd_figure(const RunConfig& cfg) {
    Table t;
    if (cfg.which == "fig1") t = figure_profiles(cfg);
    else if (cfg.which == "fig2") t = figure_pperp_curve(cfg);
    else if (cfg.which == "fig3") t = figure_radial_intensity(cfg);
    else if (cfg.which.empty()) throw ConfigError("figure: missing selector (fig1 | fig2 | fig3)");
    else throw ConfigError("figure: unknown selector '" + cfg.which + "' (fig1 | fig2 | fig3)");
    write_table(t, cfg.out);
    return 0;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg) {
    vortex::acceptance::Options opt;
    opt.quick = cfg.quick;
    if (cfg.corrupt) opt.tol_scale = 1e-3;  // self-test hook: must turn the suite red

    // Human-readable progress goes to stderr; the table is the artifact.
    auto results = vortex::acceptance::run_all(opt, &std::cerr);

    Table t;
    t.preamble = {std::string("vortex-cli ") + kVersion, "command: validate",
                  std::string("mode: ") + (cfg.quick ? "quick" : "full") +
                      (cfg.corrupt ? ", corrupted tolerances (self-test)" : "")};
    t.header = {"id", "criterion", "status", "detail"};
    for (const auto& r : results)
        t.rows.push_back(
            {std::to_string(r.id), r.name, r.passed ? "PASS" : "FAIL", r.detail});
    write_table(t, cfg.out);
    return vortex::acceptance::all_passed(results) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.var != "ell" && cfg.var != "sigma" && cfg.var != "pbar")
        throw ConfigError("sweep: var must be one of ell | sigma | pbar (got '" + cfg.var + "')");
    if (cfg.steps < 0) throw ConfigError("sweep: steps must be >= 0");
    const PacketSpec base = resolve_spec(cfg);
    if (base.regime != Regime::nonparaxial)
        throw ConfigError("sweep: only the nonparaxial regime has the swept closed forms");

    Table t;
    t.preamble = {std::string("vortex-cli ") + kVersion, "command: sweep",
                  spec_line(base, cfg.time),
                  "sweep: var=" + cfg.var + " from=" + fmt(cfg.from) + " to=" + fmt(cfg.to) +
                      " steps=" + std::to_string(cfg.steps)};
    t.header = {"ell",
                "sigma_over_m",
                "pbar_over_m",
                "mean_energy",
                "mean_pz",
                "mean_pperp",
                "pperp_over_sigma",
                "invariant_mass",
                "mass_excess",
                "mass_excess_expansion",
                "mass_excess_remainder",
                "nonparaxiality"};
    for (int i = 0; i < cfg.steps; ++i) {
        const double v =
            cfg.steps == 1 ? cfg.from
                           : cfg.from + (cfg.to - cfg.from) * double(i) / double(cfg.steps - 1);
        PacketSpec spec = base;
        if (cfg.var == "ell") spec.ell = static_cast<int>(std::llround(v));
        else if (cfg.var == "sigma") {
            spec.sigma_perp_p = v;
            if (!cfg.sigma_z_over_m) spec.sigma_z_p = v;  // keep equal spreads tracking
        } else {
            spec.mean_p = v;
        }
        try {
            spec.validate_or_throw();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sweep value ") + fmt(v) + ": " + e.what());
        }
        const auto p4 = obs::mean_four_momentum(spec);
        const double excess = obs::mass_excess_exact(spec);
        const double excess_exp = obs::mass_excess_expansion(spec);
        t.rows.push_back({std::to_string(spec.ell), fmt(spec.sigma_perp_p), fmt(spec.mean_p),
                          fmt(p4.t), fmt(p4.z), fmt(obs::mean_pperp_exact(spec)),
                          fmt(obs::mean_pperp_exact(spec) / spec.sigma()),
                          fmt(obs::invariant_mass(spec)), fmt(excess), fmt(excess_exp),
                          fmt(std::abs(excess - excess_exp)),
                          fmt(obs::nonparaxiality_parameter(spec))});
    }
    write_table(t, cfg.out);
    return 0;
}

// ---------------------------------------------------------------------------
// flag plumbing
// ---------------------------------------------------------------------------

// Everything a flag can override; config-file values fill the gaps.
struct Staged {
    std::optional<std::string> config, out, regime, which, var;
    std::optional<double> sigma_perp_nm, sigma_perp_lambda_c, sigma_over_m, sigma_z_over_m;
    std::optional<double> kinetic_kev, pbar_over_m, helicity, time, tol, from, to;
    std::optional<int> ell, n, steps;
    bool quick = false, corrupt = false;
};

void add_common_flags(CLI::App* sub, Staged& st) {
    sub->add_option("--config", st.config, "key = value config file");
    sub->add_option("--out", st.out, "output file (default: stdout)");
    sub->add_option("--sigma-perp-nm", st.sigma_perp_nm, "transverse focal size, nm");
    sub->add_option("--sigma-perp-lambda-c", st.sigma_perp_lambda_c,
                    "transverse focal size, Compton lengths");
    sub->add_option("--sigma-over-m", st.sigma_over_m, "transverse momentum spread / m");
    sub->add_option("--sigma-z-over-m", st.sigma_z_over_m, "longitudinal momentum spread / m");
    sub->add_option("--kinetic-kev", st.kinetic_kev, "mean kinetic energy, keV");
    sub->add_option("--pbar-over-m", st.pbar_over_m, "mean longitudinal momentum / m");
    sub->add_option("--ell", st.ell, "orbital angular momentum");
    sub->add_option("--n", st.n, "radial index");
    sub->add_option("--helicity", st.helicity, "+0.5 or -0.5");
    sub->add_option("--regime", st.regime, "nonrelativistic | nonparaxial | paraxial");
    sub->add_option("--time", st.time, "evaluation time, units 1/m");
}

void apply_staged(const Staged& st, RunConfig& cfg) {
    if (st.out) cfg.out = *st.out;
    if (st.regime) cfg.regime = *st.regime;
    if (st.which) cfg.which = *st.which;
    if (st.var) cfg.var = *st.var;
    if (st.sigma_perp_nm) cfg.sigma_perp_nm = st.sigma_perp_nm;
    if (st.sigma_perp_lambda_c) cfg.sigma_perp_lambda_c = st.sigma_perp_lambda_c;
    if (st.sigma_over_m) cfg.sigma_over_m = st.sigma_over_m;
    if (st.sigma_z_over_m) cfg.sigma_z_over_m = st.sigma_z_over_m;
    if (st.kinetic_kev) cfg.kinetic_kev = st.kinetic_kev;
    if (st.pbar_over_m) cfg.pbar_over_m = st.pbar_over_m;
    if (st.helicity) cfg.helicity = *st.helicity;
    if (st.time) cfg.time = *st.time;
    if (st.tol) cfg.tol = st.tol;
    if (st.from) cfg.from = *st.from;
    if (st.to) cfg.to = *st.to;
    if (st.ell) cfg.ell = *st.ell;
    if (st.n) cfg.n = *st.n;
    if (st.steps) cfg.steps = *st.steps;
    if (st.quick) cfg.quick = true;
    if (st.corrupt) cfg.corrupt = true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relativistic vortex wave packets: observables, figure data, validation"};
    app.require_subcommand(1);
    Staged st;

    CLI::App* c_obs = app.add_subcommand("observables", "observable table for one packet");
    add_common_flags(c_obs, st);
    c_obs->add_option("--tol", st.tol,
                      "quadrature tolerance; adds independent quadrature columns");

    CLI::App* c_fig = app.add_subcommand("figure", "plot-ready curve data");
    add_common_flags(c_fig, st);
    c_fig->add_option("which", st.which, "fig1 | fig2 | fig3");

    CLI::App* c_val = app.add_subcommand("validate", "run the physics validation suite");
    c_val->add_option("--config", st.config, "key = value config file");
    c_val->add_option("--out", st.out, "output file (default: stdout)");
    c_val->add_flag("--quick", st.quick, "reduced panels, completes in seconds");
    c_val->add_flag("--corrupt-tolerances", st.corrupt,
                    "self-test hook: shrink every tolerance 1000x; the suite must go red");

    CLI::App* c_swp = app.add_subcommand("sweep", "observable trends over a parameter range");
    add_common_flags(c_swp, st);
    c_swp->add_option("--var", st.var, "swept parameter: ell | sigma | pbar");
    c_swp->add_option("--from", st.from, "range start");
    c_swp->add_option("--to", st.to, "range end");
    c_swp->add_option("--steps", st.steps, "number of points (0: header only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg;
        if (st.config) load_config_file(*st.config, cfg);
        apply_staged(st, cfg);
        if (c_obs->parsed()) return cmd_observables(cfg);
        if (c_fig->parsed()) return cmd_figure(cfg);
        if (c_val->parsed()) return cmd_validate(cfg);
        if (c_swp->parsed()) return cmd_sweep(cfg);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
