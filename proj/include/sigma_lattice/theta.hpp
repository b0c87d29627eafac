#pragma once

// Jacobi theta_1 through its product representation, written in the
// q <-> 1/q symmetric form so both signs of Im tau work. With the contracted
// nome r (|r| < 1, r = q or 1/q):
//
//   theta1(u|tau) = sin u * prod_{n>=1} (1 - 2 r^{2n} cos 2u + r^{4n}) / (1 - r^{2n})^2
//
// Every product factor equals 1 at u = 0, so this normalization has
// theta1'(0) = 1; zeros are simple and lie exactly on {m pi + n pi tau}. The
// logarithmic derivative and its u-derivative come from differentiating the
// product termwise, which keeps the geometric convergence.

#include <cmath>
#include <complex>
#include <numbers>

#include "sigma_lattice/errors.hpp"

namespace sigma_lattice {

template <typename Real>
struct ThetaContext {
    using Complex = std::complex<Real>;

    Complex tau;      ///< omega2/omega1
    Complex q;        ///< exp(i pi tau)
    Real q_abs;       ///< |q|, != 1
    Complex r;        ///< contracted nome, |r| < 1
    int truncation;   ///< n with |r|^{2n} < 2^-53: worst-case product length

    static ThetaContext from_tau(const Complex& tau_in) {
        constexpr Real pi = std::numbers::pi_v<Real>;
        ThetaContext ctx;
        ctx.tau = tau_in;
        ctx.q = std::exp(Complex(0, 1) * pi * tau_in);
        ctx.q_abs = std::abs(ctx.q);
        if (ctx.q_abs == Real(1)) throw Error("real tau: |q| = 1");
        ctx.r = ctx.q_abs <= Real(1) ? ctx.q : Real(1) / ctx.q;
        const Real ra = std::abs(ctx.r);
        ctx.truncation = static_cast<int>(std::ceil(Real(-53) * std::numbers::ln2_v<Real> /
                                                    (Real(2) * std::log(ra)))) +
                         1;
        return ctx;
    }
};

namespace detail {

inline constexpr int kThetaProductCap = 512;

// Shared product loop: calls f(r2n, next) per factor until the tail bound
// |r|^{2n} (2 + 2|cos 2u|) drops below 2^-53.
template <typename Real, typename F>
int theta_product_loop(const ThetaContext<Real>& ctx, Real cos_mag, F&& f) {
    const std::complex<Real> r2 = ctx.r * ctx.r;
    const Real r2_abs = std::norm(ctx.r);
    std::complex<Real> r2n = r2;
    Real r2n_abs = r2_abs;
    const Real bound = 2 + 2 * cos_mag;
    for (int n = 1; n <= kThetaProductCap; ++n) {
        f(r2n);
        if (r2n_abs * bound < Real(0x1p-53)) return n;
        r2n *= r2;
        r2n_abs *= r2_abs;
    }
    throw ConvergenceFailure("theta product did not converge within 512 factors");
}

// The bracket prod_n (...) alone; equals theta1(u)/sin(u). Returns factor
// count through *terms when non-null.
template <typename Real>
std::complex<Real> theta1_bracket(const ThetaContext<Real>& ctx, const std::complex<Real>& u,
                                  int* terms = nullptr) {
    using C = std::complex<Real>;
    const C c2u = std::cos(Real(2) * u);
    C prod(1);
    const int n = theta_product_loop(ctx, std::abs(c2u), [&](const C& r2n) {
        const C one_minus = Real(1) - r2n;
        prod *= (Real(1) - Real(2) * r2n * c2u + r2n * r2n) / (one_minus * one_minus);
    });
    if (terms) *terms = n;
    return prod;
}

} // namespace detail

/// theta1(u|tau), normalized with theta1'(0) = 1.
template <typename Real>
std::complex<Real> theta1(const ThetaContext<Real>& ctx, const std::complex<Real>& u) {
    return std::sin(u) * detail::theta1_bracket(ctx, u);
}

/// theta1'(u)/theta1(u) = cot u + sum_n 4 r^{2n} sin 2u / (1 - 2 r^{2n} cos 2u + r^{4n}).
template <typename Real>
std::complex<Real> theta1_log_derivative(const ThetaContext<Real>& ctx,
                                         const std::complex<Real>& u) {
    using C = std::complex<Real>;
    const C s2u = std::sin(Real(2) * u);
    const C c2u = std::cos(Real(2) * u);
    C t = std::cos(u) / std::sin(u);
    detail::theta_product_loop(ctx, std::abs(c2u), [&](const C& r2n) {
        const C den = Real(1) - Real(2) * r2n * c2u + r2n * r2n;
        t += Real(4) * r2n * s2u / den;
    });
    return t;
}

/// d/du of theta1'/theta1.
template <typename Real>
std::complex<Real> theta1_log_derivative_prime(const ThetaContext<Real>& ctx,
                                               const std::complex<Real>& u) {
    using C = std::complex<Real>;
    const C s2u = std::sin(Real(2) * u);
    const C c2u = std::cos(Real(2) * u);
    const C su = std::sin(u);
    C t = Real(-1) / (su * su);
    detail::theta_product_loop(ctx, std::abs(c2u), [&](const C& r2n) {
        const C den = Real(1) - Real(2) * r2n * c2u + r2n * r2n;
        t += (Real(8) * r2n * c2u * den - Real(16) * (r2n * s2u) * (r2n * s2u)) / (den * den);
    });
    return t;
}

} // namespace sigma_lattice
