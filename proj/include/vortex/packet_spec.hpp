#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortex/four_vector.hpp"

namespace vortex {

enum class Regime { nonrelativistic, nonparaxial, paraxial };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::nonrelativistic: return "nonrelativistic";
        case Regime::nonparaxial: return "nonparaxial";
        case Regime::paraxial: return "paraxial";
    }
    return "?";
}

// Full parameterization of a packet. All quantities are in internal units
// m = 1 (momenta/spreads in units of m, lengths/times in units of 1/m).
struct PacketSpec {
    double mass = 1.0;          // internal energy unit; kept explicit in formulas
    double sigma_perp_p = 0.1;  // transverse momentum spread sigma_{p,perp}
    double sigma_z_p = 0.1;     // longitudinal momentum spread sigma_{p,z}
    double mean_p = 0.0;        // mean longitudinal momentum pbar >= 0
    int ell = 0;                // orbital angular momentum
    int n_radial = 0;           // radial index (paraxial states)
    double helicity = 0.5;      // +-1/2, used by fermion states only
    Regime regime = Regime::nonparaxial;

    int abs_ell() const { return std::abs(ell); }
    double sigma() const { return sigma_perp_p; }  // the single-spread sigma
    bool equal_spreads() const { return sigma_perp_p == sigma_z_p; }

    double ebar() const { return std::sqrt(mean_p * mean_p + mass * mass); }
    double ubar() const { return mean_p / ebar(); }
    // chi = 2 m^2 / sigma^2, the large argument of every modified-Bessel form
    double chi() const { return 2.0 * mass * mass / (sigma_perp_p * sigma_perp_p); }

    // invariant paraxiality parameter (|l| + 2n + 1) sigma^2/m^2
    double paraxiality_parameter() const {
        double s = sigma_perp_p / mass;
        return (std::abs(ell) + 2 * n_radial + 1) * s * s;
    }
    bool paraxiality_warning() const { return paraxiality_parameter() >= 0.1; }

    std::vector<std::string> validate() const {
        std::vector<std::string> errs;
        if (mass <= 0) errs.push_back("mass must be positive");
        if (sigma_perp_p <= 0) errs.push_back("sigma_perp_p must be positive");
        if (sigma_z_p <= 0) errs.push_back("sigma_z_p must be positive");
        if (mean_p < 0) errs.push_back("mean_p must be non-negative");
        if (n_radial < 0) errs.push_back("n_radial must be non-negative");
        if (helicity != 0.5 && helicity != -0.5)
            errs.push_back("helicity must be +1/2 or -1/2");
        return errs;
    }

    void validate_or_throw() const {
        auto errs = validate();
        if (!errs.empty()) throw std::invalid_argument("PacketSpec: " + errs.front());
    }

    FourVector mean_four_momentum_vector() const { return {ebar(), 0, 0, mean_p}; }

    // The same physical packet described in a frame boosted by `rapidity`
    // along +z (spreads, OAM and indices are invariant; only pbar changes).
    PacketSpec boosted(double rapidity) const {
        PacketSpec out = *this;
        FourVector pb = boost_longitudinal(mean_four_momentum_vector(), rapidity);
        if (pb.z < 0)
            throw std::invalid_argument("boosted PacketSpec would have mean_p < 0");
        out.mean_p = pb.z;
        return out;
    }
};

}  // namespace vortex
