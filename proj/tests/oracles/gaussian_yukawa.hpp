#pragma once

// Self-energies of the Gaussian density rho(x) = mu (alpha/pi)^{3/2} e^{-alpha |x|^2}.
// rho * rho is again Gaussian with exponent alpha/2, so
//   D_c = mu^2 4 pi int_0^inf r e^{-c r} (alpha/(2 pi))^{3/2} e^{-alpha r^2 / 2} dr.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

inline double gaussian_yukawa_energy(double alpha, double c, double mu = 1.0) {
    const double pref = 4.0 * std::numbers::pi * std::pow(alpha / (2.0 * std::numbers::pi), 1.5);
    auto f = [&](double r) { return r * std::exp(-c * r - 0.5 * alpha * r * r); };
    const double upper = 40.0 / std::sqrt(alpha);
    const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 15, 1e-14);
    return mu * mu * pref * q;
}

/// Same integral by tanh-sinh on [0, inf), as a cross-check.
inline double gaussian_yukawa_energy_tanh_sinh(double alpha, double c, double mu = 1.0) {
    const double pref = 4.0 * std::numbers::pi * std::pow(alpha / (2.0 * std::numbers::pi), 1.5);
    auto f = [&](double r) { return r * std::exp(-c * r - 0.5 * alpha * r * r); };
    boost::math::quadrature::tanh_sinh<double> ts;
    return mu * mu * pref * ts.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

/// Closed form of the c = 0 case.
inline double gaussian_coulomb_energy(double alpha, double mu = 1.0) { return mu * mu * std::sqrt(2.0 * alpha / std::numbers::pi); }

/// A(u) for u^2 = rho: (3 alpha / 2) mu.
inline double gaussian_kinetic(double alpha, double mu = 1.0) { return 1.5 * alpha * mu; }

/// int |u|^p for u = sqrt(rho): mu^{p/2} (alpha/pi)^{3p/4} (pi / (alpha p / 2))^{3/2}.
inline double gaussian_lp_power(double alpha, double p, double mu = 1.0) {
    return std::pow(mu, 0.5 * p) * std::pow(alpha / std::numbers::pi, 0.75 * p) *
           std::pow(std::numbers::pi / (0.5 * alpha * p), 1.5);
}

}  // namespace oracle
