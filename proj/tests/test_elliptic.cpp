#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "oracle_helpers.hpp"
#include "sigma_lattice/elliptic.hpp"

using namespace sigma_lattice;
using oracle::kPi;
using C = std::complex<double>;

namespace {
const Lattice<double> kSquare = lattice_from_basis(C(0.5, 0), C(0, 0.5));
const Lattice<double> kHex = lattice_from_basis(C(0.5, 0), 0.5 * std::exp(C(0, kPi / 3)));
const Lattice<double> kRect = lattice_from_basis(C(0.5, 0), C(0, 1.0));
const Lattice<double> kGeneric = lattice_from_basis(C(0.5, 0), C(0.3, 0.55));

C rand_cell_point(std::mt19937_64& rng, const Lattice<double>& lat, double spread = 1.0) {
    return detail::uniform_in_cell(rng, 2.0 * lat.omega1(), 2.0 * lat.omega2(), spread);
}
} // namespace

TEST_CASE("sigma~: zeros, normalization, golden values") {
    const SigmaEvaluator<double> ev(kGeneric);

    CHECK(sigma_modified(ev, 2.0 * kGeneric.omega1()) == C(0, 0));
    CHECK(sigma_modified(ev, C(0, 0)) == C(0, 0));

    const C z(1e-6, 0);
    CHECK(std::abs(sigma_modified(ev, z) / z - 1.0) < 1e-11);

    CHECK(std::abs(sigma_modified(ev, C(0.17, 0.11)) - oracle::kSigmaGenericAt17) <
          1e-13 * std::abs(oracle::kSigmaGenericAt17));
    CHECK(std::abs(sigma_modified(ev, C(-0.32, 0.40)) - oracle::kSigmaGenericAtM32) <
          1e-13 * std::abs(oracle::kSigmaGenericAtM32));
    CHECK(std::abs(sigma_modified(ev, C(0.45, -0.13)) - oracle::kSigmaGenericAt45) <
          1e-13 * std::abs(oracle::kSigmaGenericAt45));

    const SigmaEvaluator<double> evs(kSquare);
    CHECK(std::abs(sigma_modified(evs, C(0.25, 0.10)) - oracle::kSigmaSquareAt25) <
          1e-13 * std::abs(oracle::kSigmaSquareAt25));

    // oddness
    std::mt19937_64 rng(21);
    for (int i = 0; i < 30; ++i) {
        const C w = rand_cell_point(rng, kGeneric);
        const C a = sigma_modified(ev, w);
        CHECK(std::abs(sigma_modified(ev, -w) + a) <= 1e-12 * std::abs(a));
    }
}

TEST_CASE("sigma~ quasiperiodicity cocycle") {
    std::mt19937_64 rng(22);
    for (const auto& lat : {kSquare, kGeneric, kRect}) {
        const SigmaEvaluator<double> ev(lat);
        for (int rep = 0; rep < 8; ++rep) {
            const C z = rand_cell_point(rng, lat);
            const LogComplex<double> s = sigma_modified_log(ev, z);
            for (std::int64_t m = -3; m <= 3; ++m)
                for (std::int64_t n = -3; n <= 3; ++n) {
                    const LatticeVector v{m, n};
                    const C l = lat.vector(v);
                    const C expo = (kPi * std::conj(l) / lat.area()) * (z + 0.5 * l);
                    LogComplex<double> rhs = s;
                    rhs.log_abs += expo.real();
                    rhs.arg += expo.imag() + (parity(v) < 0 ? kPi : 0.0);
                    CHECK(log_ratio_residual(sigma_modified_log(ev, z + l), rhs) < 1e-11);
                }
        }
    }

    // the explicit single-period example with its -1 parity
    const SigmaEvaluator<double> ev(kGeneric);
    const C z(0.11, 0.23);
    const C l = 2.0 * kGeneric.omega1();
    const C factor = -std::exp((kPi * std::conj(l) / kGeneric.area()) * (z + 0.5 * l));
    CHECK(std::abs(sigma_modified(ev, z + l) / (factor * sigma_modified(ev, z)) - 1.0) < 1e-11);
}

TEST_CASE("original sigma") {
    const SigmaEvaluator<double> evs(kSquare);
    const SigmaEvaluator<double> evh(kHex);
    const SigmaEvaluator<double> evr(kRect);
    std::mt19937_64 rng(23);

    // high-symmetry degeneracy: modified == original pointwise
    for (int i = 0; i < 20; ++i) {
        const C zs = rand_cell_point(rng, kSquare);
        CHECK(std::abs(sigma_original(evs, zs) - sigma_modified(evs, zs)) <=
              1e-12 * std::abs(sigma_modified(evs, zs)));
        const C zh = rand_cell_point(rng, kHex);
        CHECK(std::abs(sigma_original(evh, zh) - sigma_modified(evh, zh)) <=
              1e-12 * std::abs(sigma_modified(evh, zh)));
    }

    // definitional relation on the rectangular lattice
    const C w1 = kRect.omega1();
    const C expect = std::exp(kRect.gamma2() * w1 * w1 / 2.0) * sigma_modified(evr, w1);
    CHECK(std::abs(sigma_original(evr, w1) - expect) <= 1e-13 * std::abs(expect));

    for (int i = 0; i < 20; ++i) {
        const C z = rand_cell_point(rng, kRect);
        const C a = sigma_original(evr, z);
        CHECK(std::abs(sigma_original(evr, -z) + a) <= 1e-12 * std::abs(a));
    }
}

TEST_CASE("zeta~: eta values, oddness, pole behavior") {
    for (const auto& lat : {kSquare, kHex, kRect, kGeneric}) {
        const SigmaEvaluator<double> ev(lat);
        for (int i = 1; i <= 3; ++i) {
            const C w = lat.omega(half_period_index(i));
            CHECK(std::abs(zeta_modified(ev, w) - kPi * std::conj(w) / lat.area()) < 1e-12);
        }
    }

    const SigmaEvaluator<double> ev(kGeneric);
    CHECK(std::abs(zeta_modified(ev, C(0.17, 0.11)) - oracle::kZetaGenericAt17) <
          1e-13 * std::abs(oracle::kZetaGenericAt17));

    std::mt19937_64 rng(24);
    for (int i = 0; i < 25; ++i) {
        const C z = rand_cell_point(rng, kGeneric);
        const C a = zeta_modified(ev, z);
        CHECK(std::abs(zeta_modified(ev, -z) + a) <= 1e-12 * std::abs(a));
    }

    const C eps(1e-6, 0);
    CHECK(std::abs(eps * zeta_modified(ev, eps) - 1.0) < 1e-11);

    CHECK_THROWS_AS(zeta_modified(ev, C(0, 0)), PoleAt);
    CHECK_THROWS_AS(zeta_modified(ev, 2.0 * kGeneric.omega1() + C(1e-14, 0)), PoleAt);
}

TEST_CASE("wp~: periodicity, evenness, Laurent head, golden value") {
    const SigmaEvaluator<double> ev(kGeneric);
    std::mt19937_64 rng(25);

    for (int i = 0; i < 20; ++i) {
        const C z = rand_cell_point(rng, kGeneric);
        const C w = wp_modified(ev, z);
        CHECK(std::abs(wp_modified(ev, z + 2.0 * kGeneric.omega2()) - w) <= 1e-11 * std::abs(w));
        CHECK(std::abs(wp_modified(ev, z + 2.0 * kGeneric.omega1()) - w) <= 1e-11 * std::abs(w));
        CHECK(std::abs(wp_modified(ev, -z) - w) <= 1e-12 * std::abs(w));
    }

    const C eps(1e-6, 0);
    CHECK(std::abs(eps * eps * wp_modified(ev, eps) - 1.0) < 1e-10);

    CHECK(std::abs(wp_modified(ev, C(0.17, 0.11)) - oracle::kWpGenericAt17) <
          1e-12 * std::abs(oracle::kWpGenericAt17));

    CHECK_THROWS_AS(wp_modified(ev, C(0, 0)), PoleAt);
}

TEST_CASE("derivative chain") {
    std::mt19937_64 rng(26);
    for (const auto& lat : {kSquare, kGeneric}) {
        const SigmaEvaluator<double> ev(lat);
        const double h = 1e-5;
        for (int i = 0; i < 15; ++i) {
            const C z = rand_cell_point(rng, lat, 0.9);
            if (std::abs(sigma_modified(ev, z)) < 1e-3) continue;
            const C fd =
                (std::log(sigma_modified(ev, z + h)) - std::log(sigma_modified(ev, z - h))) /
                (2 * h);
            const C zv = zeta_modified(ev, z);
            CHECK(std::abs(fd - zv) <= 1e-6 * std::max(1.0, std::abs(zv)));
            const C fd2 = (zeta_modified(ev, z + h) - zeta_modified(ev, z - h)) / (2 * h);
            const C wv = wp_modified(ev, z);
            CHECK(std::abs(fd2 + wv) <= 1e-6 * std::max(1.0, std::abs(wv)));
        }
    }
}

TEST_CASE("Laurent tail: coefficient extraction matches gamma_{2k}") {
    const SigmaEvaluator<double> ev(kGeneric);
    const auto& lat = kGeneric;
    // zeta~(z) = 1/z - gamma2 z - gamma4 z^3 - gamma6 z^5 - ...
    auto f = [&](double r) {
        const C z(r, 0.3 * r);
        return (1.0 / z - zeta_modified(ev, z) - lat.gamma2() * z) / (z * z * z);
    };
    const double r0 = 0.05 * std::abs(lat.omega1());
    // f(r) = gamma4 + gamma6 z^2 + ...: two-point Richardson in r^2
    const C g4 = (4.0 * f(r0 / 2) - f(r0)) / 3.0;
    CHECK(std::abs(g4 - lat.gamma4()) < 1e-6 * std::abs(lat.gamma4()));

    // boundedness of the z^7 remainder
    const C z(r0, 0.2 * r0);
    const C rem = zeta_modified(ev, z) - 1.0 / z + lat.gamma2() * z + lat.gamma4() * z * z * z +
                  lat.gamma6() * z * z * z * z * z;
    CHECK(std::abs(rem) < 50.0 * std::pow(std::abs(z), 7));
}

TEST_CASE("symmetric sigma variants") {
    std::mt19937_64 rng(27);
    for (const auto& lat : {kSquare, kGeneric}) {
        const SigmaEvaluator<double> ev(lat);
        for (int i = 1; i <= 3; ++i) {
            const auto idx = half_period_index(i);
            CHECK(sigma_symmetric(ev, idx, C(0, 0)) == C(1, 0));
            CHECK(std::abs(sigma_symmetric(ev, idx, lat.omega(idx))) < 1e-12);
            // zeros on {omega_i + L}
            CHECK(std::abs(sigma_symmetric(ev, idx, lat.omega(idx) + lat.vector({1, -2}))) < 1e-9);

            for (int rep = 0; rep < 6; ++rep) {
                const C z = rand_cell_point(rng, lat);
                const C a = sigma_symmetric(ev, idx, z);
                CHECK(std::abs(sigma_symmetric(ev, idx, -z) - a) <= 1e-12 * std::abs(a));

                // even-translation law, M = 2L: factor exp((pi M*/A)(z + M/2))
                const C m = 2.0 * lat.vector({1, 0});
                const C expo = (kPi * std::conj(m) / lat.area()) * (z + 0.5 * m);
                LogComplex<double> rhs = sigma_symmetric_log(ev, idx, z);
                rhs.log_abs += expo.real();
                rhs.arg += expo.imag();
                CHECK(log_ratio_residual(sigma_symmetric_log(ev, idx, z + m), rhs) < 1e-10);
            }
        }
    }
}

TEST_CASE("Eisenstein completion") {
    const SigmaEvaluator<double> ev(kGeneric);
    for (int i = 1; i <= 3; ++i)
        CHECK(std::abs(eisenstein_completion(ev, kGeneric.omega(half_period_index(i)))) < 1e-12);

    std::mt19937_64 rng(28);
    for (int i = 0; i < 20; ++i) {
        const C z = rand_cell_point(rng, kGeneric);
        const C c = eisenstein_completion(ev, z);
        CHECK(std::abs(eisenstein_completion(ev, z + 2.0 * kGeneric.omega1()) - c) <=
              1e-11 * std::max(1.0, std::abs(c)));
        CHECK(std::abs(eisenstein_completion(ev, z + 2.0 * kGeneric.omega2()) - c) <=
              1e-11 * std::max(1.0, std::abs(c)));
    }

    // residue 1 at the origin along a small circle
    for (double th = 0.1; th < 6.2; th += 1.1) {
        const C z = 1e-6 * C(std::cos(th), std::sin(th));
        CHECK(std::abs(z * eisenstein_completion(ev, z) - 1.0) < 1e-10);
    }
}

TEST_CASE("quasiperiodic Z function") {
    const SigmaEvaluator<double> ev(kGeneric);
    std::mt19937_64 rng(29);
    for (int i = 0; i < 20; ++i) {
        const C z = rand_cell_point(rng, kGeneric);
        const double m = std::abs(z_quasi(ev, z));
        CHECK(std::abs(std::abs(z_quasi(ev, z + 2.0 * kGeneric.omega2())) - m) <= 1e-11 * m);
        CHECK(std::abs(std::abs(z_quasi(ev, z + 2.0 * kGeneric.omega1())) - m) <= 1e-11 * m);
    }

    const C eps(1e-6, 0);
    CHECK(std::abs(z_quasi(ev, eps) / eps - 1.0) < 1e-10);

    // Z(L + d)/d -> xi(L): odd vector gives -1
    const C l = 2.0 * kGeneric.omega1();
    CHECK(std::abs(z_quasi(ev, l + eps) / eps + 1.0) < 1e-9);
    const C l2 = 2.0 * kGeneric.vector({1, 1}); // even vector: xi = +1
    CHECK(std::abs(z_quasi(ev, l2 + eps) / eps - 1.0) < 1e-8);
}

TEST_CASE("defining lattice sum cross-check") {
    const SigmaEvaluator<double> evs(kSquare);
    const C z(0.25, 0);
    const C full = zeta_modified(evs, z) + kSquare.gamma2() * z;
    const C o100 = zeta_direct_sum(kSquare, z, 100);
    const C o200 = zeta_direct_sum(kSquare, z, 200);
    const C o400 = zeta_direct_sum(kSquare, z, 400);
    // truncation error shrinks like cutoff^-2 (tail ~ |z|^3 sum |L|^-4)
    CHECK(std::abs(o200 - full) < std::abs(o100 - full));
    CHECK(std::abs(o400 - full) < std::abs(o200 - full));
    CHECK(std::abs(o200 - full) < 3e-7);
    CHECK(std::abs(o400 - full) < 8e-8);

    // termwise odd, bit-exact
    CHECK(zeta_direct_sum(kSquare, -z, 150) == -zeta_direct_sum(kSquare, z, 150));

    const SigmaEvaluator<double> evg(kGeneric);
    const C zg(0.21, 0.13);
    const C fullg = zeta_modified(evg, zg) + kGeneric.gamma2() * zg;
    CHECK(std::abs(zeta_direct_sum(kGeneric, zg, 400) - fullg) < 1e-7);
}

TEST_CASE("modular invariance of the function family") {
    std::mt19937_64 rng(30);
    for (int rep = 0; rep < 5; ++rep) {
        const auto lat = oracle::random_lattice(rng, 0.5, 2.0);
        const auto w = oracle::random_unimodular_word(rng);
        const auto lat2 = modular_transform(lat, w[0], w[1], w[2], w[3]);
        const SigmaEvaluator<double> ev1(lat);
        const SigmaEvaluator<double> ev2(lat2);
        for (int i = 0; i < 40; ++i) {
            const C z = rand_cell_point(rng, lat);
            CHECK(log_ratio_residual(sigma_modified_log(ev1, z), sigma_modified_log(ev2, z)) <
                  1e-10);
            const C za = zeta_modified(ev1, z);
            CHECK(std::abs(za - zeta_modified(ev2, z)) <= 1e-10 * std::max(1.0, std::abs(za)));
            const C wa = wp_modified(ev1, z);
            CHECK(std::abs(wa - wp_modified(ev2, z)) <= 1e-10 * std::max(1.0, std::abs(wa)));
        }
    }

    // the square lattice with swapped (opposite-orientation) basis
    const SigmaEvaluator<double> a(kSquare);
    const SigmaEvaluator<double> b(lattice_from_basis(C(0, 0.5), C(0.5, 0)));
    const C z(0.13, 0.21);
    CHECK(std::abs(sigma_modified(a, z) - sigma_modified(b, z)) < 1e-12);
}
