#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace vortex {

// Complex value stored as (log-magnitude, phase) so that factors like
// exp(-2m^2/sigma^2) with m^2/sigma^2 ~ 1e5 never underflow a double.
// A zero value is represented by log_mag == -infinity (phase 0).
struct LogComplex {
    double log_mag = -std::numeric_limits<double>::infinity();
    double phase = 0.0;  // radians, kept in (-pi, pi]

    LogComplex() = default;
    LogComplex(double lm, double ph) : log_mag(lm), phase(wrap_phase(ph)) {}

    static double wrap_phase(double ph) {
        if (ph > -M_PI && ph <= M_PI) return ph;
        ph = std::remainder(ph, 2.0 * M_PI);  // -> [-pi, pi]
        if (ph <= -M_PI) ph += 2.0 * M_PI;
        return ph;
    }

    static LogComplex zero() { return LogComplex(); }

    static LogComplex one() { return LogComplex(0.0, 0.0); }

    static LogComplex from_complex(std::complex<double> v) {
        double a = std::abs(v);
        if (a == 0.0) return zero();
        return LogComplex(std::log(a), std::arg(v));
    }

    static LogComplex from_real(double v) {
        if (v == 0.0) return zero();
        return LogComplex(std::log(std::abs(v)), v > 0 ? 0.0 : M_PI);
    }

    // exp(w) for complex w, kept exactly in log form
    static LogComplex exp_of(std::complex<double> w) {
        return LogComplex(w.real(), w.imag());
    }

    bool is_zero() const { return std::isinf(log_mag) && log_mag < 0; }

    double abs() const { return std::exp(log_mag); }

    std::complex<double> to_complex() const {
        if (is_zero()) return {0.0, 0.0};
        double a = std::exp(log_mag);
        return {a * std::cos(phase), a * std::sin(phase)};
    }

    LogComplex operator*(const LogComplex& o) const {
        if (is_zero() || o.is_zero()) return zero();
        return LogComplex(log_mag + o.log_mag, phase + o.phase);
    }

    LogComplex operator/(const LogComplex& o) const {
        if (is_zero()) return zero();
        return LogComplex(log_mag - o.log_mag, phase - o.phase);
    }

    LogComplex operator*(double r) const {
        if (r == 0.0 || is_zero()) return zero();
        return LogComplex(log_mag + std::log(std::abs(r)), phase + (r > 0 ? 0.0 : M_PI));
    }

    // multiply by exp(i * dphi) -- exact phase increment, no rounding of the magnitude
    LogComplex rotated(double dphi) const {
        if (is_zero()) return zero();
        return LogComplex(log_mag, phase + dphi);
    }

    // integer or real power: |v|^e * exp(i e arg v)
    LogComplex pow(double e) const {
        if (is_zero()) return zero();
        return LogComplex(e * log_mag, e * phase);
    }

    // addition via the ratio trick: a + b = a * (1 + b/a), |b/a| <= 1
    LogComplex operator+(const LogComplex& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        const LogComplex *big = this, *small = &o;
        if (o.log_mag > log_mag) { big = &o; small = this; }
        std::complex<double> ratio =
            std::exp(std::complex<double>(small->log_mag - big->log_mag, 0.0)) *
            std::complex<double>(std::cos(small->phase - big->phase),
                                 std::sin(small->phase - big->phase));
        std::complex<double> f = 1.0 + ratio;
        if (std::abs(f) == 0.0) return zero();
        return LogComplex(big->log_mag + std::log(std::abs(f)), big->phase + std::arg(f));
    }
};

inline LogComplex operator*(double r, const LogComplex& v) { return v * r; }

}  // namespace vortex
