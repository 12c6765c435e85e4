#pragma once

#include <cmath>

namespace vortex {

// Four-vector (x^0, x^1, x^2, x^3) with metric diag(+1, -1, -1, -1).
struct FourVector {
    double t = 0, x = 0, y = 0, z = 0;

    double squared() const { return t * t - x * x - y * y - z * z; }
};

inline double minkowski_dot(const FourVector& a, const FourVector& b) {
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

// Boost along +z by rapidity eta: a particle at rest acquires
// (m cosh eta, 0, 0, m sinh eta).
inline FourVector boost_longitudinal(const FourVector& v, double rapidity) {
    double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
    return {v.t * ch + v.z * sh, v.x, v.y, v.z * ch + v.t * sh};
}

}  // namespace vortex
