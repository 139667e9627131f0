#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nlgs/grid.hpp"
#include "nlgs/solver.hpp"

namespace testutil {

/// sqrt of a unit-mass Gaussian density with exponent alpha, centred at c.
inline nlgs::Field gaussian_field(const nlgs::Grid3& g, double alpha, double mu = 1.0, nlgs::Point3 c = {0, 0, 0}) {
    const double norm = std::sqrt(mu) * std::pow(alpha / M_PI, 0.75);
    return nlgs::Field::from_function(g, [&](double x, double y, double z) {
        const double dx = x - c[0], dy = y - c[1], dz = z - c[2];
        return norm * std::exp(-0.5 * alpha * (dx * dx + dy * dy + dz * dz));
    });
}

/// Random smooth nonnegative field with mass in [0.5, 2].
inline nlgs::Field random_field(const nlgs::Grid3& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int band = 2 + static_cast<int>(rng() % 3);
    const double width = g.box_length() * (0.08 + 0.1 * unit(rng));
    nlgs::Point3 c{(unit(rng) - 0.5) * 2.0, (unit(rng) - 0.5) * 2.0, (unit(rng) - 0.5) * 2.0};
    nlgs::Field u = nlgs::random_band_limited_field(g, rng(), band, width, c);
    const double m = 0.5 + 1.5 * unit(rng);
    return std::sqrt(m / nlgs::mass(u)) * u;
}

inline double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace testutil
