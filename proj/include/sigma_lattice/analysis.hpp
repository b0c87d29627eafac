#pragma once

// Numerical census of the zeros of Eisenstein's periodic completion
// zeta^(z, z*) within one primitive cell. zeta^ is doubly periodic with one
// simple pole per cell; its zeros split into holomorphic-type (local Jacobian
// positive, winding +1) and antiholomorphic-type (winding -1). Wirtinger
// derivatives are known in closed form:
//
//   d(zeta^)/dz  = -wp~(z),   d(zeta^)/dz* = -pi/A,
//
// so Newton steps on the 2-real-variable system are exact, and the sign of
// |wp~|^2 - (pi/A)^2 classifies each zero. Periodicity forces the winding sum
// over a cell (pole counted as -1) to vanish; a nonzero sum means the seeding
// grid missed a zero.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "sigma_lattice/detail/parallel.hpp"
#include "sigma_lattice/elliptic.hpp"
#include "sigma_lattice/errors.hpp"

namespace sigma_lattice {

enum class ZeroKind { holomorphic, antiholomorphic };

template <typename Real>
struct ZeroRecord {
    std::complex<Real> position; ///< Voronoi-cell representative
    int winding = 0;             ///< +1 holomorphic, -1 antiholomorphic
    ZeroKind kind = ZeroKind::holomorphic;
    Real residual_norm = 0;      ///< |zeta^(position)|
};

namespace detail {

template <typename Real>
std::optional<std::complex<Real>> newton_completion_zero(const SigmaEvaluator<Real>& ev,
                                                         std::complex<Real> z, Real tol) {
    using C = std::complex<Real>;
    constexpr Real pi = std::numbers::pi_v<Real>;
    const C b = C(-pi / ev.lattice().area(), 0);
    Real fmag = std::numeric_limits<Real>::infinity();
    for (int it = 0; it < 50; ++it) {
        C f;
        try {
            f = eisenstein_completion(ev, z);
        } catch (const PoleAt&) {
            return std::nullopt;
        }
        fmag = std::abs(f);
        if (fmag < tol) return z;
        C a;
        try {
            a = -wp_modified(ev, z);
        } catch (const PoleAt&) {
            return std::nullopt;
        }
        const Real det = std::norm(a) - std::norm(b);
        if (det == Real(0)) return std::nullopt;
        C step = (b * std::conj(f) - std::conj(a) * f) / det;
        // damp when the residual grows
        C zn = z + step;
        try {
            if (std::abs(eisenstein_completion(ev, zn)) > fmag) zn = z + step / Real(2);
        } catch (const PoleAt&) {
            zn = z + step / Real(2);
        }
        z = zn;
    }
    return std::nullopt;
}

} // namespace detail

/// Locate and classify all zeros of zeta^ in one primitive cell by Newton
/// iteration from a grid_n x grid_n seed grid. Coincident zeros (rectangular
/// degeneration) merge into a single record. Throws IncompleteCensus when the
/// winding sum (with the pole counted as -1) is nonzero.
template <typename Real>
std::vector<ZeroRecord<Real>> find_completion_zeros(const SigmaEvaluator<Real>& ev,
                                                    int grid_n = 32) {
    using C = std::complex<Real>;
    constexpr Real pi = std::numbers::pi_v<Real>;
    if (grid_n < 16) throw Error("census grid must be at least 16 x 16");
    const auto& lat = ev.reduced_lattice();
    const Real scale = std::abs(lat.omega1());
    const Real tol = Real(1e-11) / scale;

    std::vector<std::optional<C>> hits(static_cast<std::size_t>(grid_n) * grid_n);
    detail::parallel_for(hits.size(), [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / grid_n;
        const int j = static_cast<int>(idx) % grid_n;
        const Real a = (Real(i) + Real(0.5)) / Real(grid_n) - Real(0.5);
        const Real b = (Real(j) + Real(0.5)) / Real(grid_n) - Real(0.5);
        const C seed = a * Real(2) * lat.omega1() + b * Real(2) * lat.omega2();
        hits[idx] = detail::newton_completion_zero(ev, seed, tol);
    });

    const Real dedup = Real(1e-6) * scale;
    std::vector<C> distinct;
    for (const auto& h : hits) {
        if (!h) continue;
        const C zr = reduce_point(lat, *h).z_red;
        bool fresh = true;
        for (const C& w : distinct) {
            if (std::abs(reduce_point(lat, zr - w).z_red) < dedup) {
                fresh = false;
                break;
            }
        }
        if (fresh) distinct.push_back(zr);
    }

    std::sort(distinct.begin(), distinct.end(), [](const C& x, const C& y) {
        return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
    });

    std::vector<ZeroRecord<Real>> out;
    const Real dbar = pi / lat.area();
    int winding_sum = -1; // the pole at the origin
    for (const C& z : distinct) {
        ZeroRecord<Real> rec;
        rec.position = z;
        rec.residual_norm = std::abs(eisenstein_completion(ev, z));
        const Real dz = std::abs(wp_modified(ev, z));
        rec.winding = dz > dbar ? 1 : -1;
        rec.kind = rec.winding > 0 ? ZeroKind::holomorphic : ZeroKind::antiholomorphic;
        winding_sum += rec.winding;
        out.push_back(rec);
    }
    if (winding_sum != 0)
        throw IncompleteCensus("winding sum over the cell is " + std::to_string(winding_sum) +
                               ", expected 0; retry with a denser grid");
    return out;
}

/// Discrete winding number of arg zeta^ around a circle.
template <typename Real>
int winding_number(const SigmaEvaluator<Real>& ev, const std::complex<Real>& center, Real radius,
                   int samples = 256) {
    using C = std::complex<Real>;
    constexpr Real pi = std::numbers::pi_v<Real>;
    if (samples < 64) throw Error("winding_number needs at least 64 samples");
    const Real floor = Real(1e-10) / std::abs(ev.reduced_lattice().omega1());
    Real total = 0;
    C prev;
    C first;
    for (int j = 0; j <= samples; ++j) {
        const Real th = Real(2) * pi * Real(j % samples) / Real(samples);
        const C p = center + radius * C(std::cos(th), std::sin(th));
        const C f = eisenstein_completion(ev, p);
        if (std::abs(f) < floor) throw OnContour("|zeta^| below 1e-10 at a winding sample");
        if (j == 0) {
            first = f;
            prev = f;
            continue;
        }
        total += std::arg(f / prev);
        prev = f;
    }
    const Real turns = total / (Real(2) * pi);
    const auto w = std::llround(turns);
    if (std::abs(turns - Real(w)) > Real(0.25))
        throw OnContour("winding estimate ambiguous; increase samples");
    return static_cast<int>(w);
}

/// Vertices of the Voronoi cell of the origin (reduced basis; generically a
/// hexagon, degenerating to a rectangle when Re(omega2 omega1*) = 0).
template <typename Real>
std::vector<std::complex<Real>> voronoi_vertices(const Lattice<Real>& lat_in) {
    using C = std::complex<Real>;
    const Lattice<Real> lat = reduce_basis(lat_in);
    const C p1 = Real(2) * lat.omega1();
    const C p2 = Real(2) * lat.omega2();
    const Real r = (lat.omega2() * std::conj(lat.omega1())).real();
    const C pd = r <= Real(0) ? p1 + p2 : p1 - p2; // the shorter diagonal
    std::vector<C> nb{p1, -p1, p2, -p2, pd, -pd};
    std::sort(nb.begin(), nb.end(), [](const C& x, const C& y) {
        return std::atan2(x.imag(), x.real()) < std::atan2(y.imag(), y.real());
    });
    std::vector<C> vertices;
    for (std::size_t i = 0; i < nb.size(); ++i) {
        const C u = nb[i];
        const C v = nb[(i + 1) % nb.size()];
        Eigen::Matrix<Real, 2, 2> m;
        m << u.real(), u.imag(), v.real(), v.imag();
        if (std::abs(m.determinant()) < Real(1e-12) * std::abs(u) * std::abs(v)) continue;
        Eigen::Matrix<Real, 2, 1> rhs;
        rhs << std::norm(u) / 2, std::norm(v) / 2;
        const Eigen::Matrix<Real, 2, 1> x = m.colPivHouseholderQr().solve(rhs);
        const C vert(x(0), x(1));
        bool fresh = true;
        for (const C& w : vertices)
            if (std::abs(vert - w) < Real(1e-9) * std::abs(p1)) fresh = false;
        if (fresh) vertices.push_back(vert);
    }
    return vertices;
}

template <typename Real>
struct VoronoiReport {
    Real max_discrepancy = 0; ///< worst distance, antiholomorphic zero to nearest vertex (mod lattice)
    std::vector<std::complex<Real>> vertices;
    std::vector<std::complex<Real>> anti_zeros;
};

/// Distances between the antiholomorphic zeros of zeta^ and the Voronoi-cell
/// vertices. They coincide on square and hexagonal lattices but not in
/// general.
template <typename Real>
VoronoiReport<Real> voronoi_comparison(const SigmaEvaluator<Real>& ev, int grid_n = 32) {
    VoronoiReport<Real> rep;
    rep.vertices = voronoi_vertices(ev.reduced_lattice());
    for (const auto& rec : find_completion_zeros(ev, grid_n)) {
        if (rec.kind != ZeroKind::antiholomorphic) continue;
        rep.anti_zeros.push_back(rec.position);
        Real best = std::numeric_limits<Real>::infinity();
        for (const auto& v : rep.vertices)
            best = std::min(best,
                            std::abs(reduce_point(ev.reduced_lattice(), rec.position - v).z_red));
        rep.max_discrepancy = std::max(rep.max_discrepancy, best);
    }
    return rep;
}

} // namespace sigma_lattice
