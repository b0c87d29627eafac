#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace sigma_lattice::detail {

// std::uniform_real_distribution is implementation-defined; this mapping is not.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

inline std::complex<double> uniform_in_cell(std::mt19937_64& rng,
                                            std::complex<double> p1,
                                            std::complex<double> p2,
                                            double shrink = 1.0) {
    const double a = uniform(rng, -0.5, 0.5) * shrink;
    const double b = uniform(rng, -0.5, 0.5) * shrink;
    return a * p1 + b * p2;
}

} // namespace sigma_lattice::detail
