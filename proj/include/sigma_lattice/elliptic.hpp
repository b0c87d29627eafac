#pragma once

// The modified Weierstrass functions over a lattice Lambda, built on the
// theta_1 product. With u = pi z / 2 omega1 and eta~_1 = pi omega1*/A:
//
//   sigma~(z) = z exp(eta~_1 z^2 / 2 omega1) theta1(u|tau) / u
//   zeta~(z)  = eta~_1 z/omega1 + (pi/2 omega1) theta1'/theta1 (u)
//   wp~(z)    = -zeta~'(z)
//
// sigma~ is odd and entire with simple zeros exactly on Lambda; zeta~ has
// simple poles of residue 1 there; wp~ is even and doubly periodic. The
// original Weierstrass forms differ by gamma_2 factors:
// sigma = exp(+gamma_2 z^2/2) sigma~, zeta = zeta~ + gamma_2 z,
// wp = wp~ - gamma_2. All of these depend only on the lattice, not on the
// basis; the evaluator reduces the basis once on construction and reduces
// every argument into the Voronoi cell before touching the product.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "sigma_lattice/errors.hpp"
#include "sigma_lattice/lattice.hpp"
#include "sigma_lattice/log_complex.hpp"
#include "sigma_lattice/reduce.hpp"
#include "sigma_lattice/theta.hpp"

namespace sigma_lattice {

template <typename Real>
struct SigmaLogEval {
    LogComplex<Real> log;  ///< log-split sigma~(z); log_abs = -inf at lattice points
    int product_terms = 0; ///< theta product factors consumed
};

/// Immutable evaluation context: the user's lattice, its reduced basis, the
/// theta context of the reduced tau, and sigma~ at the user's half-periods
/// (for the symmetric variants). Evaluations are pure; concurrent use over
/// point grids is the intended pattern.
template <typename Real>
class SigmaEvaluator {
    static_assert(std::is_floating_point_v<Real>);

public:
    using Complex = std::complex<Real>;

    explicit SigmaEvaluator(const Lattice<Real>& lat)
        : original_(lat),
          reduced_(reduce_basis(lat)),
          theta_(ThetaContext<Real>::from_tau(reduced_.tau())),
          eta_mod1_(std::numbers::pi_v<Real> * std::conj(reduced_.omega1()) / reduced_.area()) {
        for (int i = 1; i <= 3; ++i)
            sigma_half_[i - 1] = sigma_log_at(original_.omega(half_period_index(i)));
    }

    const Lattice<Real>& lattice() const { return original_; }
    const Lattice<Real>& reduced_lattice() const { return reduced_; }
    const ThetaContext<Real>& theta() const { return theta_; }
    const Complex& eta_mod1() const { return eta_mod1_; }

    /// Pole exclusion radius (in absolute units): 1e-12 * |omega1_reduced|.
    Real pole_threshold() const { return Real(1e-12) * std::abs(reduced_.omega1()); }

    /// sigma~ at a Voronoi-reduced argument, log-split plus term count.
    SigmaLogEval<Real> sigma_reduced_log(const Complex& z_red) const {
        SigmaLogEval<Real> out;
        if (z_red == Complex(0)) {
            out.log = {-std::numeric_limits<Real>::infinity(), 0};
            return out;
        }
        const Complex u = u_of(z_red);
        const Complex bracket =
            detail::theta1_bracket(theta_, u, &out.product_terms) * std::sin(u) / u;
        const Complex gauss = eta_mod1_ * z_red * z_red / (Real(2) * reduced_.omega1());
        out.log.log_abs = std::log(std::abs(z_red)) + gauss.real() + std::log(std::abs(bracket));
        out.log.arg = std::arg(z_red) + gauss.imag() + std::arg(bracket);
        return out;
    }

    Complex u_of(const Complex& z_red) const {
        return std::numbers::pi_v<Real> * z_red / (Real(2) * reduced_.omega1());
    }

    const LogComplex<Real>& sigma_at_half_period(HalfPeriodIndex i) const {
        return sigma_half_[static_cast<int>(i) - 1];
    }

private:
    LogComplex<Real> sigma_log_at(const Complex& z) const {
        const Migration<Real> mig = migrate_point(reduced_, z);
        return mig.factor.log_factor() * sigma_reduced_log(mig.z_red).log;
    }

    Lattice<Real> original_;
    Lattice<Real> reduced_;
    ThetaContext<Real> theta_;
    Complex eta_mod1_;
    std::array<LogComplex<Real>, 3> sigma_half_;
};

namespace detail {

template <typename Real>
void check_pole(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z,
                const std::complex<Real>& z_red) {
    if (std::abs(z_red) < ev.pole_threshold()) {
        std::ostringstream os;
        os << "argument (" << z.real() << ", " << z.imag() << ") is within 1e-12*|omega1| of the lattice point at ("
           << (z - z_red).real() << ", " << (z - z_red).imag() << ")";
        throw PoleAt(os.str());
    }
}

} // namespace detail

/// Log-split sigma~(z) with product-term count; never over/underflows.
template <typename Real>
SigmaLogEval<Real> sigma_modified_eval(const SigmaEvaluator<Real>& ev,
                                       const std::complex<Real>& z) {
    const Migration<Real> mig = migrate_point(ev.reduced_lattice(), z);
    SigmaLogEval<Real> red = ev.sigma_reduced_log(mig.z_red);
    red.log = mig.factor.log_factor() * red.log;
    return red;
}

template <typename Real>
LogComplex<Real> sigma_modified_log(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z) {
    return sigma_modified_eval(ev, z).log;
}

/// sigma~(z) as a plain complex value. Overflows for |z| >> |omega1| (the
/// exponent grows like |z|^2); use the log form out there.
template <typename Real>
std::complex<Real> sigma_modified(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z) {
    return sigma_modified_log(ev, z).value();
}

/// Original sigma = exp(+gamma_2 z^2/2) sigma~(z).
template <typename Real>
LogComplex<Real> sigma_original_log(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z) {
    const std::complex<Real> g = ev.lattice().gamma2() * z * z / Real(2);
    LogComplex<Real> s = sigma_modified_log(ev, z);
    s.log_abs += g.real();
    s.arg += g.imag();
    return s;
}

template <typename Real>
std::complex<Real> sigma_original(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z) {
    return sigma_original_log(ev, z).value();
}

/// zeta~(z); simple poles of residue 1 on the lattice.
template <typename Real>
std::complex<Real> zeta_modified(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z) {
    constexpr Real pi = std::numbers::pi_v<Real>;
    const auto& lat = ev.reduced_lattice();
    const Migration<Real> mig = migrate_point(lat, z);
    detail::check_pole(ev, z, mig.z_red);
    const std::complex<Real> t = theta1_log_derivative(ev.theta(), ev.u_of(mig.z_red));
    return ev.eta_mod1() * mig.z_red / lat.omega1() + (pi / (Real(2) * lat.omega1())) * t +
           pi * std::conj(lat.vector(mig.shift)) / lat.area();
}

/// wp~(z) = -zeta~'(z); doubly periodic, wp~ ~ 1/z^2 + gamma_2 near 0.
template <typename Real>
std::complex<Real> wp_modified(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z) {
    constexpr Real pi = std::numbers::pi_v<Real>;
    const auto& lat = ev.reduced_lattice();
    const Migration<Real> mig = migrate_point(lat, z);
    detail::check_pole(ev, z, mig.z_red);
    const std::complex<Real> tp = theta1_log_derivative_prime(ev.theta(), ev.u_of(mig.z_red));
    const std::complex<Real> half = pi / (Real(2) * lat.omega1());
    return -ev.eta_mod1() / lat.omega1() - half * half * tp;
}

/// Symmetric variant sigma~_i(z) = e^{-eta~_i z} sigma~(z + omega_i)/sigma~(omega_i);
/// even, equals 1 at z = 0 exactly, zeros on {omega_i + L}.
template <typename Real>
LogComplex<Real> sigma_symmetric_log(const SigmaEvaluator<Real>& ev, HalfPeriodIndex i,
                                     const std::complex<Real>& z) {
    if (z == std::complex<Real>(0)) return {0, 0};
    const std::complex<Real> w = ev.lattice().omega(i);
    const std::complex<Real> eta_i =
        std::numbers::pi_v<Real> * std::conj(w) / ev.lattice().area();
    const std::complex<Real> e = -eta_i * z;
    LogComplex<Real> out = sigma_modified_log(ev, z + w) / ev.sigma_at_half_period(i);
    out.log_abs += e.real();
    out.arg += e.imag();
    return out;
}

template <typename Real>
std::complex<Real> sigma_symmetric(const SigmaEvaluator<Real>& ev, HalfPeriodIndex i,
                                   const std::complex<Real>& z) {
    return sigma_symmetric_log(ev, i, z).value();
}

/// Eisenstein's periodic completion zeta^(z, z*) = zeta~(z) - pi z*/A.
/// Doubly periodic but not holomorphic.
template <typename Real>
std::complex<Real> eisenstein_completion(const SigmaEvaluator<Real>& ev,
                                         const std::complex<Real>& z) {
    return zeta_modified(ev, z) -
           std::numbers::pi_v<Real> * std::conj(z) / ev.lattice().area();
}

/// Z(z, z*) = sigma~(z) exp(-pi z* z / 2A); |Z| has the lattice periodicity.
template <typename Real>
LogComplex<Real> z_quasi_log(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z) {
    LogComplex<Real> s = sigma_modified_log(ev, z);
    s.log_abs -= std::numbers::pi_v<Real> * std::norm(z) / (Real(2) * ev.lattice().area());
    return s;
}

template <typename Real>
std::complex<Real> z_quasi(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z) {
    return z_quasi_log(ev, z).value();
}

/// Truncated defining sum 1/z + sum' z^3/(L^2 (z^2 - L^2)) over
/// max(|m|, |n|) <= cutoff: the original (unmodified) zeta. Converges like
/// cutoff^-2; kept as the definitional cross-check for the theta route.
template <typename Real>
std::complex<Real> zeta_direct_sum(const Lattice<Real>& lat, const std::complex<Real>& z,
                                   int cutoff) {
    using C = std::complex<Real>;
    if (cutoff < 1) throw Error("cutoff must be >= 1");
    const C z2 = z * z;
    const C z3 = z2 * z;
    C sum = Real(1) / z;
    auto add = [&](std::int64_t m, std::int64_t n) {
        const C l = lat.vector({m, n});
        const C l2 = l * l;
        sum += z3 / (l2 * (z2 - l2));
    };
    for (int s = 1; s <= cutoff; ++s) {
        for (std::int64_t m = -s; m <= s; ++m) {
            add(m, s);
            add(m, -s);
        }
        for (std::int64_t n = -s + 1; n < s; ++n) {
            add(s, n);
            add(-s, n);
        }
    }
    return sum;
}

// Spec-facing aliases for the migration operations, at evaluator level.

template <typename Real>
Migration<Real> migrate_sigma(const SigmaEvaluator<Real>& ev, const std::complex<Real>& z,
                              MigrationMode mode = MigrationMode::closed_form) {
    return migrate_point(ev.reduced_lattice(), z, mode);
}

template <typename Real>
Migration<Real> migrate_with_known_order(const SigmaEvaluator<Real>& ev,
                                         const std::complex<Real>& z, std::int64_t p) {
    return migrate_point_known_order(ev.reduced_lattice(), z, p);
}

} // namespace sigma_lattice
