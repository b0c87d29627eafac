#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace sigma_lattice {

/// A nonzero complex number stored as (log|w|, arg w). Products and quotients
/// of quasiperiodic factors stay representable long after exp() would
/// overflow; arg is kept unwrapped by arithmetic and only reduced on request.
template <typename Real>
struct LogComplex {
    Real log_abs = 0;
    Real arg = 0;

    static LogComplex from(const std::complex<Real>& w) {
        return {std::log(std::abs(w)), std::arg(w)};
    }

    std::complex<Real> value() const {
        const Real m = std::exp(log_abs);
        return {m * std::cos(arg), m * std::sin(arg)};
    }

    friend LogComplex operator*(const LogComplex& a, const LogComplex& b) {
        return {a.log_abs + b.log_abs, a.arg + b.arg};
    }
    friend LogComplex operator/(const LogComplex& a, const LogComplex& b) {
        return {a.log_abs - b.log_abs, a.arg - b.arg};
    }
    LogComplex& operator*=(const LogComplex& o) {
        log_abs += o.log_abs;
        arg += o.arg;
        return *this;
    }
};

/// Reduce an angle to (-pi, pi].
template <typename Real>
Real wrap_angle(Real a) {
    constexpr Real pi = std::numbers::pi_v<Real>;
    constexpr Real two_pi = 2 * pi;
    a = std::fmod(a, two_pi);
    if (a <= -pi) a += two_pi;
    if (a > pi) a -= two_pi;
    return a;
}

/// |exp(a - b) - 1| with the angle difference wrapped: the natural residual
/// for "these two log-split values should be equal".
template <typename Real>
Real log_ratio_residual(const LogComplex<Real>& a, const LogComplex<Real>& b) {
    const Real dl = a.log_abs - b.log_abs;
    const Real da = wrap_angle(a.arg - b.arg);
    return std::abs(std::exp(std::complex<Real>(dl, da)) - std::complex<Real>(1, 0));
}

} // namespace sigma_lattice
