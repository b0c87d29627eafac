#pragma once

// Argument reduction and migration. The sigma product is only evaluated at
// Voronoi-reduced arguments; the quasiperiodicity
//
//   sigma~(z_red + L) = xi(L) exp((pi L*/A)(z_red + L/2)) sigma~(z_red)
//
// migrates the value back to the original z. The cocycle composes exactly, so
// the closed-form single step (L = z - z_red) is the default; a stepwise walk
// is kept for cross-checking. The log-domain split (parity, exponent,
// reduced value) is the primitive: the combined complex value overflows once
// Re(exponent) ~ |z|^2 pi/2A exceeds ~709.

#include <complex>
#include <utility>

#include "sigma_lattice/detail/accurate.hpp"
#include "sigma_lattice/errors.hpp"
#include "sigma_lattice/lattice.hpp"
#include "sigma_lattice/log_complex.hpp"

namespace sigma_lattice {

template <typename Real>
struct MigrationFactor {
    int parity = 1;                   ///< xi(L)
    std::complex<Real> exponent{};    ///< (pi L*/A)(z_red + L/2)
    long steps = 0;                   ///< quasiperiodicity applications composed

    /// Factor as a log-split value: value_at_z = factor * value_at_z_red.
    LogComplex<Real> log_factor() const {
        return {exponent.real(),
                exponent.imag() + (parity < 0 ? std::numbers::pi_v<Real> : Real(0))};
    }
};

template <typename Real>
struct Migration {
    std::complex<Real> z_red;
    LatticeVector shift;
    MigrationFactor<Real> factor;
};

enum class MigrationMode { closed_form, stepwise };

namespace detail {

template <typename Real>
std::complex<Real> migration_exponent(const Lattice<Real>& lat, const std::complex<Real>& z_red,
                                      const LatticeVector& v) {
    using C = std::complex<Real>;
    constexpr Real pi = std::numbers::pi_v<Real>;
    const C big_l = lat.vector(v);
    const C half_l = Real(v.m) * lat.omega1() + Real(v.n) * lat.omega2();
    const C s = (pi / lat.area()) * std::conj(big_l);
    return accurate_mul(s, z_red + half_l);
}

} // namespace detail

/// Reduce z and build the factor with sigma~(z) = parity * e^exponent * sigma~(z_red).
template <typename Real>
Migration<Real> migrate_point(const Lattice<Real>& lat, const std::complex<Real>& z,
                              MigrationMode mode = MigrationMode::closed_form) {
    using C = std::complex<Real>;
    const ReducedPoint<Real> rp = reduce_point(lat, z);
    Migration<Real> out{rp.z_red, rp.shift, {}};
    if (rp.shift.m == 0 && rp.shift.n == 0) return out;

    if (mode == MigrationMode::closed_form) {
        out.factor.parity = parity(rp.shift);
        out.factor.exponent = detail::migration_exponent(lat, rp.z_red, rp.shift);
        out.factor.steps = 1;
        return out;
    }

    // Stepwise: apply one period at a time, compensated accumulation.
    constexpr Real pi = std::numbers::pi_v<Real>;
    detail::CompensatedSum<Real> acc;
    C cur = rp.z_red;
    int par = 1;
    long steps = 0;
    auto walk = [&](const C& period, std::int64_t count) {
        const C step = count >= 0 ? period : -period;
        for (std::int64_t i = 0; i < std::abs(count); ++i) {
            acc.add((pi * std::conj(step) / lat.area()) * (cur + step / Real(2)));
            cur += step;
            par = -par; // xi of a single period is -1
            ++steps;
        }
    };
    walk(Real(2) * lat.omega1(), rp.shift.m);
    walk(Real(2) * lat.omega2(), rp.shift.n);
    out.factor = {par, acc.value(), steps};
    return out;
}

/// Migration with an exactly known commensuration: p*z must be a lattice
/// point. L is recovered as an exact integer combination by rounding p*z in
/// lattice coordinates, which removes rounding drift from z - z_red.
template <typename Real>
Migration<Real> migrate_point_known_order(const Lattice<Real>& lat, const std::complex<Real>& z,
                                          std::int64_t p) {
    using C = std::complex<Real>;
    if (p < 1) throw Error("commensuration order must be >= 1");
    const auto [pa, pb] = detail::frac_coords(lat, Real(p) * z);
    const auto big_m = std::llround(pa);
    const auto big_n = std::llround(pb);
    const C residue = Real(p) * z - lat.vector({big_m, big_n});
    if (std::abs(residue) > Real(1e-9) * std::abs(lat.omega1()))
        throw NotCommensurate("p*z is not a lattice point to within 1e-9*|omega1|");

    // z = (M/p) 2 omega1 + (N/p) 2 omega2 + residue/p; search (m, n) near (M/p, N/p).
    const auto mc = std::llround(static_cast<Real>(big_m) / Real(p));
    const auto nc = std::llround(static_cast<Real>(big_n) / Real(p));
    auto rep = [&](std::int64_t m, std::int64_t n) {
        return (Real(2 * (big_m - m * p)) * lat.omega1() + Real(2 * (big_n - n * p)) * lat.omega2() +
                residue) /
               Real(p);
    };
    Real best_norm = std::numeric_limits<Real>::infinity();
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -1; dn <= 1; ++dn)
            best_norm = std::min(best_norm, std::norm(rep(mc + dm, nc + dn)));
    const Real tie = best_norm * Real(1e-12) + std::numeric_limits<Real>::min();
    Migration<Real> out;
    bool have = false;
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -1; dn <= 1; ++dn) {
            const LatticeVector v{mc + dm, nc + dn};
            const C zr = rep(v.m, v.n);
            if (std::norm(zr) > best_norm + tie) continue;
            if (!have || zr.real() < out.z_red.real() ||
                (zr.real() == out.z_red.real() && zr.imag() < out.z_red.imag())) {
                out.z_red = zr;
                out.shift = v;
                have = true;
            }
        }
    if (out.shift.m != 0 || out.shift.n != 0) {
        out.factor.parity = parity(out.shift);
        out.factor.exponent = detail::migration_exponent(lat, out.z_red, out.shift);
        out.factor.steps = 1;
    }
    return out;
}

} // namespace sigma_lattice
