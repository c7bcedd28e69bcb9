#pragma once

#include <cmath>
#include <random>

namespace ferdisc {

/// Uniform double in [0, 1) from the raw generator output. Used instead of
/// std::uniform_real_distribution so that seeded runs are reproducible across
/// standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on uniform01.
inline double gauss(std::mt19937_64& rng) {
    double u = 0.0;
    while (u == 0.0) u = uniform01(rng);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
}

} // namespace ferdisc
