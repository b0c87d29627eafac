#pragma once

// Lowest-Landau-level wavefunctions on the torus, built from the modified
// sigma function. In symmetric gauge a single-particle state is
//
//   psi(z, z*) = e^{K* z} prod_i sigma~(z - w_i) e^{-z* z / 4 l^2},
//
// with N_phi prescribed zeros w_i, sum w_i = K A / pi, and A = 2 pi N_phi l^2.
// Under a lattice translation psi picks up only the boundary phase
// xi(L)^{N_phi} e^{K*L - KL*} e^{(L*z - L z*)/4 l^2}. The filled-level state
// of N = N_phi fermions is the pairwise product
//
//   Psi = e^{K* Z} sigma~(Z - W) prod_{i<j} sigma~(z_i - z_j)
//         prod_i e^{-N_phi pi z_i* z_i / 2A},   Z = sum z_i, W = K A / pi.
//
// Magnitudes are handled in log-split form throughout; the raw complex
// accessors are conveniences that can under/overflow a few cells out.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "sigma_lattice/detail/random.hpp"
#include "sigma_lattice/elliptic.hpp"
#include "sigma_lattice/errors.hpp"

namespace sigma_lattice {

/// Torus LLL data: lattice, flux count, prescribed zeros, boundary phase K,
/// magnetic length l = sqrt(A / 2 pi N_phi). Immutable.
template <typename Real>
class WavefunctionSpec {
public:
    using Complex = std::complex<Real>;

    /// Derive K from the zeros: K = pi sum w_i / A.
    static WavefunctionSpec from_zeros(const Lattice<Real>& lat, int n_phi,
                                       std::vector<Complex> zeros) {
        check_count(n_phi, zeros.size());
        Complex sum = 0;
        for (const auto& w : zeros) sum += w;
        const Complex k = std::numbers::pi_v<Real> * sum / lat.area();
        return WavefunctionSpec(lat, n_phi, std::move(zeros), k);
    }

    /// Accept an independent K and validate sum w_i = K A / pi.
    static WavefunctionSpec with_boundary_phase(const Lattice<Real>& lat, int n_phi,
                                                std::vector<Complex> zeros, const Complex& k) {
        check_count(n_phi, zeros.size());
        Complex sum = 0;
        for (const auto& w : zeros) sum += w;
        const Complex target = k * lat.area() / std::numbers::pi_v<Real>;
        if (std::abs(sum - target) > Real(1e-10) * std::abs(lat.omega1()))
            throw Error("boundary phase K inconsistent with the zero set: sum w_i != K A/pi");
        return WavefunctionSpec(lat, n_phi, std::move(zeros), k);
    }

    const SigmaEvaluator<Real>& evaluator() const { return ev_; }
    const Lattice<Real>& lattice() const { return ev_.lattice(); }
    int n_phi() const { return n_phi_; }
    Real ell() const { return ell_; }
    const std::vector<Complex>& zeros() const { return zeros_; }
    const Complex& boundary_k() const { return k_; }

private:
    static void check_count(int n_phi, std::size_t got) {
        if (n_phi < 1 || got != static_cast<std::size_t>(n_phi))
            throw CountMismatch("expected " + std::to_string(n_phi) + " zeros, got " +
                                std::to_string(got));
    }

    WavefunctionSpec(const Lattice<Real>& lat, int n_phi, std::vector<Complex> zeros,
                     const Complex& k)
        : ev_(lat),
          n_phi_(n_phi),
          ell_(std::sqrt(lat.area() / (Real(2) * std::numbers::pi_v<Real> * Real(n_phi)))),
          zeros_(std::move(zeros)),
          k_(k) {}

    SigmaEvaluator<Real> ev_;
    int n_phi_;
    Real ell_;
    std::vector<Complex> zeros_;
    Complex k_;
};

/// Log-split psi(z, z*).
template <typename Real>
LogComplex<Real> single_particle_psi_log(const WavefunctionSpec<Real>& spec,
                                         const std::complex<Real>& z) {
    const std::complex<Real> kz = std::conj(spec.boundary_k()) * z;
    LogComplex<Real> acc{kz.real(), kz.imag()};
    for (const auto& w : spec.zeros()) acc *= sigma_modified_log(spec.evaluator(), z - w);
    acc.log_abs -= std::norm(z) / (Real(4) * spec.ell() * spec.ell());
    return acc;
}

template <typename Real>
std::complex<Real> single_particle_psi(const WavefunctionSpec<Real>& spec,
                                       const std::complex<Real>& z) {
    return single_particle_psi_log(spec, z).value();
}

/// The boundary factor psi(z+L)/psi(z) predicted by quasiperiodicity:
/// xi(L)^{N_phi} e^{K*L - KL*} e^{(L*z - Lz*)/4 l^2}. A pure phase.
template <typename Real>
LogComplex<Real> predicted_boundary_factor(const WavefunctionSpec<Real>& spec,
                                           const std::complex<Real>& z, const LatticeVector& v) {
    constexpr Real pi = std::numbers::pi_v<Real>;
    const std::complex<Real> l = spec.lattice().vector(v);
    Real arg = 0;
    if (parity(v) < 0 && spec.n_phi() % 2 != 0) arg += pi;
    arg += 2 * std::imag(std::conj(spec.boundary_k()) * l); // K*L - KL* = 2i Im(K*L)
    arg += std::imag(std::conj(l) * z) / (2 * spec.ell() * spec.ell());
    return {Real(0), arg};
}

/// |measured/predicted - 1| for the boundary factor, in log domain.
template <typename Real>
Real boundary_residual(const WavefunctionSpec<Real>& spec, const std::complex<Real>& z,
                       const LatticeVector& v) {
    if (v.m == 0 && v.n == 0) return Real(0);
    const LogComplex<Real> at_z = single_particle_psi_log(spec, z);
    if (at_z.log_abs < Real(-690.0)) // |psi| < ~1e-300
        throw NearZeroDivision("|psi(z)| below 1e-300; resample z");
    const LogComplex<Real> at_zl = single_particle_psi_log(spec, z + spec.lattice().vector(v));
    return log_ratio_residual(at_zl / at_z, predicted_boundary_factor(spec, z, v));
}

/// Particle positions plus their cached sum Z.
template <typename Real>
struct ManyBodyConfig {
    std::vector<std::complex<Real>> positions;
    std::complex<Real> center_of_mass;

    static ManyBodyConfig from_positions(std::vector<std::complex<Real>> pos) {
        std::complex<Real> z = 0;
        for (const auto& p : pos) z += p;
        return {std::move(pos), z};
    }
};

/// Log-split filled-level state at N = N_phi positions.
template <typename Real>
LogComplex<Real> filled_state_psi_log(const WavefunctionSpec<Real>& spec,
                                      const ManyBodyConfig<Real>& config) {
    constexpr Real pi = std::numbers::pi_v<Real>;
    const auto& zs = config.positions;
    if (zs.size() != static_cast<std::size_t>(spec.n_phi()))
        throw ParticleCountMismatch("filled state needs exactly N_phi = " +
                                    std::to_string(spec.n_phi()) + " particles, got " +
                                    std::to_string(zs.size()));
    const Real area = spec.lattice().area();
    const std::complex<Real> w = spec.boundary_k() * area / pi;
    const std::complex<Real> kz = std::conj(spec.boundary_k()) * config.center_of_mass;
    LogComplex<Real> acc{kz.real(), kz.imag()};
    acc *= sigma_modified_log(spec.evaluator(), config.center_of_mass - w);
    for (std::size_t i = 0; i < zs.size(); ++i)
        for (std::size_t j = i + 1; j < zs.size(); ++j)
            acc *= sigma_modified_log(spec.evaluator(), zs[i] - zs[j]);
    for (const auto& z : zs)
        acc.log_abs -= Real(spec.n_phi()) * pi * std::norm(z) / (Real(2) * area);
    return acc;
}

template <typename Real>
std::complex<Real> filled_state_psi(const WavefunctionSpec<Real>& spec,
                                    const ManyBodyConfig<Real>& config) {
    return filled_state_psi_log(spec, config).value();
}

/// The standard independent orbital family: member k has every zero shifted
/// by 2(k-1) omega1 / N_phi. All members share the lattice and boundary
/// sector (K shifts by pi (lattice vector)/A across the family).
template <typename Real>
std::vector<WavefunctionSpec<Real>> orbital_family(const WavefunctionSpec<Real>& base) {
    std::vector<WavefunctionSpec<Real>> fam;
    fam.reserve(base.n_phi());
    for (int k = 0; k < base.n_phi(); ++k) {
        const std::complex<Real> shift =
            Real(2 * k) * base.lattice().omega1() / Real(base.n_phi());
        auto zeros = base.zeros();
        for (auto& w : zeros) w += shift;
        fam.push_back(WavefunctionSpec<Real>::from_zeros(base.lattice(), base.n_phi(), zeros));
    }
    return fam;
}

namespace detail {

template <typename Real>
bool same_boundary_sector(const WavefunctionSpec<Real>& a, const WavefunctionSpec<Real>& b) {
    // K may differ only by pi L0 / A with L0 a lattice vector.
    const std::complex<Real> dk = b.boundary_k() - a.boundary_k();
    const std::complex<Real> l0 =
        dk * a.lattice().area() / std::numbers::pi_v<Real>;
    const auto [x, y] = frac_coords(a.lattice(), l0);
    // lattice coordinates of L0 are (2m, 2n) in half-period units: frac_coords
    // returns (m, n) directly since vector() carries the factor 2
    return std::abs(x - std::round(x)) < Real(1e-9) && std::abs(y - std::round(y)) < Real(1e-9);
}

template <typename Real>
LogComplex<Real> slater_determinant(const std::vector<WavefunctionSpec<Real>>& family,
                                    const ManyBodyConfig<Real>& config) {
    using C = std::complex<Real>;
    const int n = static_cast<int>(family.size());
    std::vector<LogComplex<Real>> raw(static_cast<std::size_t>(n) * n);
    Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
    Real scale_sum = 0;
    for (int k = 0; k < n; ++k) {
        Real row_max = -std::numeric_limits<Real>::infinity();
        for (int j = 0; j < n; ++j) {
            raw[k * n + j] = single_particle_psi_log(family[k], config.positions[j]);
            row_max = std::max(row_max, raw[k * n + j].log_abs);
        }
        if (!std::isfinite(row_max)) return {-std::numeric_limits<Real>::infinity(), 0};
        scale_sum += row_max;
        for (int j = 0; j < n; ++j) {
            const LogComplex<Real> e{raw[k * n + j].log_abs - row_max, raw[k * n + j].arg};
            m(k, j) = e.value();
        }
    }
    const C det = Eigen::PartialPivLU<Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>>(m)
                      .determinant();
    if (det == C(0)) return {-std::numeric_limits<Real>::infinity(), 0};
    return {std::log(std::abs(det)) + scale_sum, std::arg(det)};
}

} // namespace detail

/// Determinant of [psi_k(z_j)] over an independent orbital family: the
/// textbook form of the filled state, used as the cross-check for the
/// pairwise-product formula. Throws SingularBasis when the family is
/// numerically dependent (determinant tiny for 10 probe configurations).
template <typename Real>
LogComplex<Real> slater_determinant_oracle(const std::vector<WavefunctionSpec<Real>>& family,
                                           const ManyBodyConfig<Real>& config) {
    if (family.empty()) throw CountMismatch("empty orbital family");
    const int n = family.front().n_phi();
    if (static_cast<int>(family.size()) != n)
        throw CountMismatch("orbital family must have exactly N_phi members");
    if (config.positions.size() != static_cast<std::size_t>(n))
        throw ParticleCountMismatch("configuration size must equal N_phi");
    for (const auto& spec : family) {
        if (spec.n_phi() != n || spec.lattice().omega1() != family.front().lattice().omega1() ||
            spec.lattice().omega2() != family.front().lattice().omega2())
            throw CountMismatch("orbital family members must share lattice and N_phi");
        if (!detail::same_boundary_sector(family.front(), spec))
            throw Error("orbital family members must share the boundary K-sector");
    }

    const LogComplex<Real> det = detail::slater_determinant(family, config);
    const Real tiny = Real(-575.6); // log(1e-250)
    if (det.log_abs > tiny) return det;

    // Possibly just a node of this configuration: probe deterministic configs.
    std::mt19937_64 rng(0xC0FFEEuLL);
    const auto& lat = family.front().lattice();
    for (int probe = 0; probe < 10; ++probe) {
        std::vector<std::complex<Real>> pos(static_cast<std::size_t>(n));
        for (auto& p : pos) {
            const auto c = detail::uniform_in_cell(rng, std::complex<double>(2) * std::complex<double>(lat.omega1()),
                                                   std::complex<double>(2) * std::complex<double>(lat.omega2()));
            p = std::complex<Real>(static_cast<Real>(c.real()), static_cast<Real>(c.imag()));
        }
        const auto d = detail::slater_determinant(family, ManyBodyConfig<Real>::from_positions(pos));
        if (d.log_abs > tiny) return det;
    }
    throw SingularBasis("orbital family is numerically linearly dependent");
}

/// Count the zeros of psi per fundamental cell as the winding of its phase
/// around the cell boundary (the Gaussian factor is real and positive, so the
/// phase winding is that of the holomorphic part f).
template <typename Real>
int lll_zero_count(const WavefunctionSpec<Real>& spec) {
    using C = std::complex<Real>;
    constexpr Real pi = std::numbers::pi_v<Real>;
    const auto& lat = spec.lattice();
    const C p1 = Real(2) * lat.omega1();
    const C p2 = Real(2) * lat.omega2();
    const int per_side = 96 * std::max(2, spec.n_phi());

    for (int attempt = 0; attempt < 8; ++attempt) {
        // offset the cell so no prescribed zero sits on the contour
        const C origin = -(p1 + p2) / Real(2) +
                         (Real(0.0137) + Real(0.031) * Real(attempt)) * (p1 + Real(0.618) * p2);
        const std::array<C, 4> corner{origin, origin + p1, origin + p1 + p2, origin + p2};
        Real total = 0;
        bool ok = true;
        LogComplex<Real> prev = single_particle_psi_log(spec, corner[0]);
        if (prev.log_abs < Real(-600)) continue;
        for (int side = 0; side < 4 && ok; ++side) {
            const C a = corner[side];
            const C b = corner[(side + 1) % 4];
            for (int s = 1; s <= per_side; ++s) {
                const C p = a + (b - a) * Real(s) / Real(per_side);
                const LogComplex<Real> cur = single_particle_psi_log(spec, p);
                if (cur.log_abs < Real(-600)) {
                    ok = false;
                    break;
                }
                const Real d = wrap_angle(cur.arg - prev.arg);
                if (std::abs(d) > Real(2.6)) {
                    ok = false;
                    break;
                }
                total += d;
                prev = cur;
            }
        }
        if (!ok) continue;
        const Real turns = total / (Real(2) * pi);
        const auto w = std::llround(turns);
        if (std::abs(turns - Real(w)) < Real(0.25)) return static_cast<int>(w);
    }
    throw Error("could not find a zero-free contour for the cell winding count");
}

} // namespace sigma_lattice
