#pragma once

// Complex Bravais lattices Lambda = {2m*omega1 + 2n*omega2} described by a
// half-period basis (omega1, omega2), together with the lattice data the
// elliptic-function layer needs:
//
//   area        A = 2|omega1* omega2 - omega2* omega1|
//   parity      xi(L) = +1 iff L/2 is itself a lattice vector
//   invariants  gamma_{2k} = sum' L^{-2k} (k >= 2), and the Eisenstein-ordered
//               weight-2 invariant gamma_2
//   eta constants  eta~_i = pi omega_i*/A,  eta_i = gamma_2 omega_i + eta~_i
//
// Both orientations of the basis (sign of Im tau) are accepted throughout;
// nothing here normalizes the orientation.
//
// The weight-2 sum is conditionally convergent and is defined by Eisenstein
// ordering (inner sum over m, symmetric limit in n). The inner sums have the
// closed form sum_m (m+x)^{-2} = pi^2/sin^2(pi x), which turns the double sum
// into a single geometrically convergent series in the nome. The same device
// evaluates gamma_{2k}: sum_m (m+x)^{-2k} = pi^{2k} Q_k(1/sin^2(pi x)) with
// Q_k polynomial. Direct shell summation of sum' L^{-2k} converges only like
// cutoff^{-2} and cannot reach the accuracy the invariant identities need.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "sigma_lattice/errors.hpp"

namespace sigma_lattice {

/// Integer pair (m, n) denoting the lattice vector L = 2m*omega1 + 2n*omega2.
struct LatticeVector {
    std::int64_t m = 0;
    std::int64_t n = 0;

    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
};

/// xi(L): +1 iff L/2 is itself a lattice vector, i.e. m and n both even.
/// Depends only on (m mod 2, n mod 2).
constexpr int parity(const LatticeVector& v) noexcept {
    return (v.m % 2 == 0 && v.n % 2 == 0) ? 1 : -1;
}

/// Selects one of the three primitive half-periods; omega3 = -(omega1 + omega2).
enum class HalfPeriodIndex : int { omega1 = 1, omega2 = 2, omega3 = 3 };

inline HalfPeriodIndex half_period_index(int i) {
    if (i < 1 || i > 3) throw Error("half-period index must be 1, 2 or 3");
    return static_cast<HalfPeriodIndex>(i);
}

namespace detail {

// Series caps. The weight-2 series needs ~10/(pi |Im tau|) terms, so the cap
// corresponds to |Im tau| down to ~1e-6; beyond that the basis should be
// reduced first.
inline constexpr int kNomeSeriesCap = 4'000'000;
inline constexpr double kDegenerateImTau = 1e-14;

// Contracted nome: r = exp(+-i pi tau) chosen with |r| < 1, so series in
// r^{2n} converge for either orientation.
template <typename Real>
std::complex<Real> contracted_nome(const std::complex<Real>& tau) {
    const std::complex<Real> q = std::exp(std::complex<Real>(0, 1) * std::numbers::pi_v<Real> * tau);
    return std::abs(q) <= Real(1) ? q : Real(1) / q;
}

// sum_{n>=1} 1/sin^2(n pi tau), via 1/sin^2(n pi tau) = -4 r^{2n}/(1-r^{2n})^2.
template <typename Real>
std::complex<Real> inv_sin_sq_sum(const std::complex<Real>& tau, Real rel_tol) {
    using C = std::complex<Real>;
    const C r = contracted_nome(tau);
    const C r2 = r * r;
    C r2n = r2;
    C sum = 0;
    for (int n = 1; n <= kNomeSeriesCap; ++n) {
        const C one_minus = Real(1) - r2n;
        const C term = Real(-4) * r2n / (one_minus * one_minus);
        sum += term;
        if (std::abs(term) < rel_tol * std::max(Real(1), std::abs(sum))) return sum;
        r2n *= r2;
    }
    throw ConvergenceFailure("weight-2 nome series exceeded its cap; |Im tau| too small, reduce the basis first");
}

// Coefficients of Q_k(c) with sum_m (m+x)^{-2k} = pi^{2k} Q_k(1/sin^2(pi x)).
// Q_1 = c and Q_{k+1} = D2[Q_k]/((2k)(2k+1)) where D2[c^n] = 2n(2n+1)c^{n+1} - 4n^2 c^n.
template <typename Real>
std::vector<Real> q_poly_coeffs(int k) {
    std::vector<Real> coef{Real(1)}; // coef[i] multiplies c^{i+1}
    for (int kk = 1; kk < k; ++kk) {
        std::vector<Real> next(coef.size() + 1, Real(0));
        for (std::size_t i = 0; i < coef.size(); ++i) {
            const Real n = Real(i + 1);
            next[i + 1] += coef[i] * 2 * n * (2 * n + 1);
            next[i] -= coef[i] * 4 * n * n;
        }
        const Real denom = Real(2 * kk) * Real(2 * kk + 1);
        for (auto& c : next) c /= denom;
        coef = std::move(next);
    }
    return coef;
}

template <typename Real>
std::complex<Real> pow_int(std::complex<Real> base, int e) {
    std::complex<Real> acc(1);
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
}

} // namespace detail

template <typename Real>
class Lattice;

template <typename Real>
Lattice<Real> lattice_from_basis(const std::complex<Real>& omega1, const std::complex<Real>& omega2);

/// Recompute the Eisenstein-ordered weight-2 invariant in the lattice's own
/// basis: gamma_2 = Gamma_2(omega1) - (pi/A)(omega1*/omega1), with
/// Gamma_2 = (pi/2 omega1)^2 [1/3 + 2 sum_{n>=1} 1/sin^2(n pi tau)].
/// Gamma_2 depends on the basis; the combination gamma_2 does not.
template <typename Real>
std::complex<Real> compute_gamma2(const Lattice<Real>& lat);

/// Recompute gamma_{2k} = sum'_{L != 0} L^{-2k} (k >= 2) by Eisenstein-type
/// closed-form inner sums in the lattice's own basis.
template <typename Real>
std::complex<Real> compute_gamma2k(const Lattice<Real>& lat, int k);

/// A complex Bravais lattice with a chosen half-period basis. Immutable after
/// construction; the weight-2/4/6 invariants are computed once and cached.
template <typename Real>
class Lattice {
    static_assert(std::is_floating_point_v<Real>);

public:
    using Complex = std::complex<Real>;

    const Complex& omega1() const { return w1_; }
    const Complex& omega2() const { return w2_; }
    Complex omega3() const { return -(w1_ + w2_); }

    Complex omega(HalfPeriodIndex i) const {
        switch (i) {
            case HalfPeriodIndex::omega1: return w1_;
            case HalfPeriodIndex::omega2: return w2_;
            default: return omega3();
        }
    }

    /// L = 2m omega1 + 2n omega2.
    Complex vector(const LatticeVector& v) const {
        return Real(2 * v.m) * w1_ + Real(2 * v.n) * w2_;
    }

    Real area() const { return area_; }
    const Complex& tau() const { return tau_; }
    int orientation() const { return orientation_; }

    const Complex& gamma2() const { return g2_; }
    const Complex& gamma4() const { return g4_; }
    const Complex& gamma6() const { return g6_; }

    friend Lattice lattice_from_basis<Real>(const Complex&, const Complex&);

private:
    Lattice(const Complex& w1, const Complex& w2, Real area, const Complex& tau, int orientation)
        : w1_(w1), w2_(w2), tau_(tau), area_(area), orientation_(orientation) {}

    Complex w1_, w2_, tau_;
    Real area_;
    int orientation_;
    Complex g2_{}, g4_{}, g6_{};
};

template <typename Real>
Lattice<Real> lattice_from_basis(const std::complex<Real>& omega1, const std::complex<Real>& omega2) {
    using C = std::complex<Real>;
    if (omega1 == C(0) || omega2 == C(0)) throw DegenerateBasis("zero half-period");
    const C tau = omega2 / omega1;
    if (std::abs(tau.imag()) <= Real(detail::kDegenerateImTau) * std::abs(tau))
        throw DegenerateBasis("collinear half-periods: basis does not span the plane");
    const C cross = std::conj(omega1) * omega2 - std::conj(omega2) * omega1;
    const Real area = 2 * std::abs(cross);
    const int orientation = tau.imag() > 0 ? 1 : -1;
    Lattice<Real> lat(omega1, omega2, area, tau, orientation);
    lat.g2_ = compute_gamma2(lat);
    lat.g4_ = compute_gamma2k(lat, 2);
    lat.g6_ = compute_gamma2k(lat, 3);
    return lat;
}

template <typename Real>
std::complex<Real> compute_gamma2(const Lattice<Real>& lat) {
    using C = std::complex<Real>;
    constexpr Real pi = std::numbers::pi_v<Real>;
    const C s = detail::inv_sin_sq_sum(lat.tau(), Real(1e-17));
    const C half = pi / (Real(2) * lat.omega1());
    const C big_gamma2 = half * half * (Real(1) / Real(3) + Real(2) * s);
    return big_gamma2 - (pi / lat.area()) * (std::conj(lat.omega1()) / lat.omega1());
}

template <typename Real>
std::complex<Real> compute_gamma2k(const Lattice<Real>& lat, int k) {
    using C = std::complex<Real>;
    constexpr Real pi = std::numbers::pi_v<Real>;
    if (k < 2) throw Error("gamma2k requires k >= 2");
    const auto coef = detail::q_poly_coeffs<Real>(k);
    const C r = detail::contracted_nome(lat.tau());
    const C r2 = r * r;
    C r2n = r2;
    C sum = 0;
    bool converged = false;
    for (int n = 1; n <= detail::kNomeSeriesCap; ++n) {
        const C one_minus = Real(1) - r2n;
        const C c = Real(-4) * r2n / (one_minus * one_minus); // 1/sin^2(n pi tau)
        C q = 0;
        C cp = c;
        for (const Real a : coef) {
            q += a * cp;
            cp *= c;
        }
        sum += Real(2) * q; // n and -n
        if (std::abs(q) < Real(1e-17) * std::max(Real(1), std::abs(sum))) {
            converged = true;
            break;
        }
        r2n *= r2;
    }
    if (!converged) throw ConvergenceFailure("gamma2k nome series exceeded its cap");
    const Real zeta2k = std::riemann_zeta(Real(2 * k));
    const C total = Real(2) * zeta2k + detail::pow_int<Real>(C(pi), 2 * k) * sum;
    return total / detail::pow_int<Real>(Real(2) * lat.omega1(), 2 * k);
}

/// gamma_{2k} with the cached k = 2, 3 fast path.
template <typename Real>
std::complex<Real> gamma2k(const Lattice<Real>& lat, int k) {
    if (k == 2) return lat.gamma4();
    if (k == 3) return lat.gamma6();
    return compute_gamma2k(lat, k);
}

template <typename Real>
std::complex<Real> gamma2(const Lattice<Real>& lat) {
    return lat.gamma2();
}

/// eta~_i = pi omega_i*/A. Arithmetic only; no series.
template <typename Real>
std::complex<Real> eta_modified(const Lattice<Real>& lat, HalfPeriodIndex i) {
    return std::numbers::pi_v<Real> * std::conj(lat.omega(i)) / lat.area();
}

/// eta_i = zeta(omega_i) = gamma_2 omega_i + pi omega_i*/A.
template <typename Real>
std::complex<Real> eta_original(const Lattice<Real>& lat, HalfPeriodIndex i) {
    return lat.gamma2() * lat.omega(i) + eta_modified(lat, i);
}

/// New basis (a omega1 + b omega2, c omega1 + d omega2); |ad - bc| = 1 keeps
/// the point set (and the area) unchanged.
template <typename Real>
Lattice<Real> modular_transform(const Lattice<Real>& lat, std::int64_t a, std::int64_t b,
                                std::int64_t c, std::int64_t d) {
    const std::int64_t det = a * d - b * c;
    if (det != 1 && det != -1)
        throw NotUnimodular("basis change must have determinant +-1, got " + std::to_string(det));
    return lattice_from_basis(Real(a) * lat.omega1() + Real(b) * lat.omega2(),
                              Real(c) * lat.omega1() + Real(d) * lat.omega2());
}

/// Gauss pair reduction, determinant +1 steps only. The result satisfies
/// |omega1| <= |omega2| <= |omega3|, which puts +-omega1, +-omega2, +-omega3
/// on the boundary of the Voronoi cell of the origin.
template <typename Real>
Lattice<Real> reduce_basis(const Lattice<Real>& lat) {
    using C = std::complex<Real>;
    C w1 = lat.omega1();
    C w2 = lat.omega2();
    for (int iter = 0; iter < 128; ++iter) {
        if (std::abs(w2) < std::abs(w1)) {
            const C t = w1;
            w1 = w2;
            w2 = -t;
        }
        const Real mu = (w2 * std::conj(w1)).real() / std::norm(w1);
        const auto k = std::llround(mu);
        if (k == 0) break;
        w2 -= Real(k) * w1;
    }
    return lattice_from_basis(w1, w2);
}

template <typename Real>
struct ReducedPoint {
    std::complex<Real> z_red;
    LatticeVector shift; ///< z = z_red + 2m omega1 + 2n omega2
};

namespace detail {

// Real coordinates (a, b) with z = a*(2 omega1) + b*(2 omega2).
template <typename Real>
std::pair<Real, Real> frac_coords(const Lattice<Real>& lat, const std::complex<Real>& z) {
    const std::complex<Real> p1 = Real(2) * lat.omega1();
    const std::complex<Real> p2 = Real(2) * lat.omega2();
    const Real det = p1.real() * p2.imag() - p1.imag() * p2.real();
    const Real a = (z.real() * p2.imag() - z.imag() * p2.real()) / det;
    const Real b = (p1.real() * z.imag() - p1.imag() * z.real()) / det;
    return {a, b};
}

} // namespace detail

/// Translate z by a lattice vector into the Voronoi cell of the origin.
/// Expects a reduced basis (see reduce_basis); near-boundary ties are broken
/// toward the representative with lexicographically smallest (Re, Im).
template <typename Real>
ReducedPoint<Real> reduce_point(const Lattice<Real>& lat, const std::complex<Real>& z) {
    using C = std::complex<Real>;
    const auto [a, b] = detail::frac_coords(lat, z);
    const auto m0 = std::llround(a);
    const auto n0 = std::llround(b);

    Real best_norm = std::numeric_limits<Real>::infinity();
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -1; dn <= 1; ++dn) {
            const C zr = z - lat.vector({m0 + dm, n0 + dn});
            best_norm = std::min(best_norm, std::norm(zr));
        }

    const Real tie = best_norm * Real(1e-12) + std::numeric_limits<Real>::min();
    ReducedPoint<Real> best{C(std::numeric_limits<Real>::infinity(), 0), {0, 0}};
    bool have = false;
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -1; dn <= 1; ++dn) {
            const LatticeVector v{m0 + dm, n0 + dn};
            const C zr = z - lat.vector(v);
            if (std::norm(zr) > best_norm + tie) continue;
            if (!have || zr.real() < best.z_red.real() ||
                (zr.real() == best.z_red.real() && zr.imag() < best.z_red.imag())) {
                best = {zr, v};
                have = true;
            }
        }
    return best;
}

} // namespace sigma_lattice
