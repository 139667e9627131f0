#pragma once

#include <stdexcept>

#include "nlgs/kernel.hpp"

namespace nlgs {

class InvalidCouplings : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Physical constants in user-chosen base units.
struct PhysicalParams {
    double m = 1.0;
    double hbar = 1.0;
    double G = 1.0;
    double omega_tilde = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// a = 1/sqrt(-4(alpha + 3 beta)), b = 1/sqrt(2 alpha); a vanishing
/// denominator gives Infinite. Requires alpha >= 0 and alpha + 3 beta <= 0.
KernelParams graviton_masses(double alpha, double beta);

struct Dimensionless {
    double omega = 0.0;
    /// u = field_scale * v.
    double field_scale = 0.0;
};

/// omega = 2 m omega_tilde / hbar^2 and field scale sqrt(2 G m^3) / hbar.
Dimensionless to_dimensionless(const PhysicalParams& p);

/// Inverse of to_dimensionless for the frequency: hbar^2 omega / (2 m).
double physical_frequency(double omega, double m, double hbar);
/// v = u / field_scale.
double physical_field(double u, double m, double hbar, double G);

}  // namespace nlgs
