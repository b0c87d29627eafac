#pragma once

#include <cmath>
#include <complex>

namespace sigma_lattice::detail {

// Kahan's algorithm for a*b - c*d with one fma-corrected rounding.
template <typename Real>
Real diff_of_products(Real a, Real b, Real c, Real d) {
    const Real w = c * d;
    const Real e = std::fma(c, d, -w);
    const Real f = std::fma(a, b, -w);
    return f - e;
}

template <typename Real>
Real sum_of_products(Real a, Real b, Real c, Real d) {
    const Real w = c * d;
    const Real e = std::fma(c, d, -w);
    const Real f = std::fma(a, b, w);
    return f + e;
}

// Complex product with fma-corrected real and imaginary parts. Used where a
// quasiperiodicity exponent can reach ~1e6 and plain rounding would eat into
// the 1e-9 migration budget.
template <typename Real>
std::complex<Real> accurate_mul(const std::complex<Real>& x, const std::complex<Real>& y) {
    return {diff_of_products(x.real(), y.real(), x.imag(), y.imag()),
            sum_of_products(x.real(), y.imag(), x.imag(), y.real())};
}

// Neumaier-compensated accumulator for complex sums (stepwise migration).
template <typename Real>
class CompensatedSum {
public:
    void add(const std::complex<Real>& v) {
        add_part(v.real(), re_, re_c_);
        add_part(v.imag(), im_, im_c_);
    }
    std::complex<Real> value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_part(Real v, Real& s, Real& c) {
        const Real t = s + v;
        if (std::abs(s) >= std::abs(v)) {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    Real re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

} // namespace sigma_lattice::detail
