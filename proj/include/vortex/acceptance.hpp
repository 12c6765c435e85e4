#pragma once

// The project's exit gate: twelve numbered validation criteria, each checking
// a closed-form claim against an independent route (adaptive quadrature,
// finite differences, asymptotic laws, or frozen reference windows) at a
// stated tolerance. The same runner backs both the standalone acceptance
// binary and the command-line `validate` subcommand; each criterion reports
// one PASS/FAIL line with the measured worst case next to its bound.

#include <iosfwd>
#include <string>
#include <vector>

namespace vortex::acceptance {

struct CriterionResult {
    int id = 0;            // 1..12
    std::string name;      // short slug, stable across releases
    bool passed = false;
    std::string detail;    // measured values vs bounds; amendments appended
    double seconds = 0.0;  // wall-clock runtime of this criterion
};

struct Options {
    // Reduced panels everywhere; the whole run stays under a minute.
    bool quick = false;
    // Multiplies every tolerance/band half-width. 1.0 for real validation;
    // the `validate` subcommand's hidden self-test flag shrinks it to prove
    // the harness can fail and names the failing criterion.
    double tol_scale = 1.0;
};

// Run criteria 1..12 in order. If `os` is non-null, one result line is
// printed to it as each criterion completes.
std::vector<CriterionResult> run_all(const Options& opt = {}, std::ostream* os = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

// The formatted single-line report used by every front end.
std::string format_line(const CriterionResult& r);

}  // namespace vortex::acceptance
