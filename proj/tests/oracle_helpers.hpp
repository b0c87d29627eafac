#pragma once

// Independent oracles and frozen reference values for the test suites. These
// deliberately avoid the library's evaluation paths: gamma_{2k} by brute
// shell summation of the defining sum (Richardson-extrapolated; raw partial
// sums converge only like S^-2), eta_1 through the theta_1 *sum* series
// rather than the product, and basis minimality by exhaustive search.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "sigma_lattice/detail/random.hpp"
#include "sigma_lattice/lattice.hpp"

namespace oracle {

using C = std::complex<double>;
inline constexpr double kPi = std::numbers::pi_v<double>;

// ---- frozen references (40-digit computation, rounded to double) ----------
// bases: square (0.5, 0.5i), hexagonal (0.5, 0.5 e^{i pi/3}),
// rectangular (0.5, 1.0i), generic (0.5, 0.3 + 0.55i)

inline constexpr double kGamma4Square = 3.1512120021538976;
inline constexpr double kGamma6Hex = 5.863031693425403;
inline constexpr double kGamma4Rect = 2.1664582514808046;
inline constexpr double kGamma6Rect = 2.031109506261006;
inline const C kGamma4Generic{1.7473609117841666, -0.29982089191582284};
inline const C kGamma6Generic{2.850759327343827, 0.5687982827690679};
inline constexpr double kGamma2Rect = 1.7187964545050924;
inline const C kGamma2Generic{0.497440487350314, 0.04601272167390122};

// sigma~ / zeta~ / wp~ golden values on the generic lattice (0.5, 0.3+0.55i)
inline const C kSigmaGenericAt17{0.17062978595651037, 0.10792946144139570};   // z = 0.17+0.11i
inline const C kSigmaGenericAtM32{-0.34596743104125254, 0.39828537282971872}; // z = -0.32+0.40i
inline const C kSigmaGenericAt45{0.43177346905236221, -0.10133976034848073};  // z = 0.45-0.13i
inline const C kZetaGenericAt17{4.0675781096684247, -2.7602449357394392};
inline const C kWpGenericAt17{10.593057542459720, -22.007006524499688};
inline const C kSigmaSquareAt25{0.25036471137126265, 0.09894628113700686};    // z = 0.25+0.10i

// ---- shell-sum oracle for gamma_{2k} ---------------------------------------

inline C gamma2k_shell_sum(const sigma_lattice::Lattice<double>& lat, int k, int cutoff) {
    C total = 0;
    for (int s = 1; s <= cutoff; ++s) {
        C shell = 0;
        auto add = [&](std::int64_t m, std::int64_t n) {
            const C l = lat.vector({m, n});
            C p = 1.0;
            for (int e = 0; e < 2 * k; ++e) p *= l;
            shell += 1.0 / p;
        };
        for (std::int64_t m = -s; m <= s; ++m) {
            add(m, s);
            add(m, -s);
        }
        for (std::int64_t n = -s + 1; n < s; ++n) {
            add(s, n);
            add(-s, n);
        }
        total += shell;
    }
    return total;
}

// Two-level Richardson in the cutoff: the tail behaves like
// a/S^{2k-2} (1 + O(1/S)). Cutoffs S, 2S, 4S.
inline C gamma2k_shell_richardson(const sigma_lattice::Lattice<double>& lat, int k, int base) {
    const double p = 2.0 * k - 2.0;
    const C p1 = gamma2k_shell_sum(lat, k, base);
    const C p2 = gamma2k_shell_sum(lat, k, 2 * base);
    const C p4 = gamma2k_shell_sum(lat, k, 4 * base);
    const double w = std::pow(2.0, p) - 1.0;
    const C r12 = p2 + (p2 - p1) / w;
    const C r24 = p4 + (p4 - p2) / w;
    const double w2 = std::pow(2.0, p + 1.0) - 1.0;
    return r24 + (r24 - r12) / w2;
}

// ---- theta-series eta_1 oracle ---------------------------------------------
// eta_1 = -(pi^2 / 12 omega1) theta1'''(0|tau)/theta1'(0|tau) using the sum
// series theta1(u) = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1)u).

inline C eta1_theta_series(C omega1, C omega2) {
    C tau = omega2 / omega1;
    if (tau.imag() < 0) tau = -tau; // omega2 -> -omega2, same lattice
    const C q = std::exp(C(0, 1) * kPi * tau);
    C num = 0, den = 0;
    for (int n = 0; n < 64; ++n) {
        const C qq = std::pow(q, (n + 0.5) * (n + 0.5));
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        const double f = 2.0 * n + 1.0;
        den += sign * f * qq;
        num -= sign * f * f * f * qq;
        if (std::abs(qq) < 1e-40) break;
    }
    return -(kPi * kPi / (12.0 * omega1)) * (num / den);
}

inline C gamma2_theta_oracle(const sigma_lattice::Lattice<double>& lat) {
    const C eta1 = eta1_theta_series(lat.omega1(), lat.omega2());
    return (eta1 - kPi * std::conj(lat.omega1()) / lat.area()) / lat.omega1();
}

// ---- exhaustive successive minima ------------------------------------------

struct SuccessiveMinima {
    double lambda1;
    double lambda2;
};

inline SuccessiveMinima shortest_vectors_exhaustive(C omega1, C omega2, int range = 12) {
    double l1 = std::numeric_limits<double>::infinity();
    std::pair<int, int> v1{0, 0};
    for (int m = -range; m <= range; ++m)
        for (int n = -range; n <= range; ++n) {
            if (m == 0 && n == 0) continue;
            const double len = std::abs(double(m) * omega1 + double(n) * omega2);
            if (len < l1) {
                l1 = len;
                v1 = {m, n};
            }
        }
    double l2 = std::numeric_limits<double>::infinity();
    for (int m = -range; m <= range; ++m)
        for (int n = -range; n <= range; ++n) {
            if (m == 0 && n == 0) continue;
            if (m * v1.second - n * v1.first == 0) continue; // parallel to the shortest
            l2 = std::min(l2, std::abs(double(m) * omega1 + double(n) * omega2));
        }
    return {l1, l2};
}

// ---- random lattice generation ----------------------------------------------

inline sigma_lattice::Lattice<double> random_lattice(std::mt19937_64& rng, double aspect_lo = 0.2,
                                                     double aspect_hi = 5.0) {
    namespace d = sigma_lattice::detail;
    const double mag = std::exp(d::uniform(rng, std::log(0.3), std::log(1.5)));
    const double ph = d::uniform(rng, 0.0, 2 * kPi);
    const C w1 = mag * C(std::cos(ph), std::sin(ph));
    const double at = std::exp(d::uniform(rng, std::log(aspect_lo), std::log(aspect_hi)));
    double th = d::uniform(rng, kPi / 12, kPi - kPi / 12);
    if (d::uniform_unit(rng) < 0.5) th = -th;
    const C tau = at * C(std::cos(th), std::sin(th));
    return sigma_lattice::lattice_from_basis(w1, w1 * tau);
}

// Compose a word of T, T^-1, S into an integer basis change.
inline std::array<std::int64_t, 4> random_unimodular_word(std::mt19937_64& rng, int max_len = 10) {
    std::array<std::int64_t, 4> m{1, 0, 0, 1};
    const int len = 1 + static_cast<int>(rng() % max_len);
    for (int i = 0; i < len; ++i) {
        std::array<std::int64_t, 4> g;
        switch (rng() % 3) {
            case 0: g = {1, 1, 0, 1}; break;  // T
            case 1: g = {1, -1, 0, 1}; break; // T^-1
            default: g = {0, 1, -1, 0}; break; // S
        }
        m = {g[0] * m[0] + g[1] * m[2], g[0] * m[1] + g[1] * m[3],
             g[2] * m[0] + g[3] * m[2], g[2] * m[1] + g[3] * m[3]};
    }
    return m;
}

} // namespace oracle
