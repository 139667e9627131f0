#include "nlgs/physics.hpp"

#include <cmath>

#include "nlgs/io.hpp"

namespace nlgs {

namespace {

void require_positive(double m, double hbar) {
    if (!(m > 0.0) || !std::isfinite(m)) throw InvalidCouplings("mass must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidCouplings("hbar must be positive");
}

void require_positive(double m, double hbar, double G) {
    require_positive(m, hbar);
    if (!(G > 0.0) || !std::isfinite(G)) throw InvalidCouplings("G must be positive");
}

}  // namespace

KernelParams graviton_masses(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InvalidCouplings("couplings must be finite");
    if (alpha < 0.0) throw InvalidCouplings("alpha must be nonnegative, got " + format_double(alpha));
    const double s = alpha + 3.0 * beta;
    if (s > 0.0) throw InvalidCouplings("alpha + 3 beta must be nonpositive, got " + format_double(s));
    const ScreeningMass a = s == 0.0 ? ScreeningMass::infinite() : ScreeningMass::finite(1.0 / std::sqrt(-4.0 * s));
    const ScreeningMass b = alpha == 0.0 ? ScreeningMass::infinite() : ScreeningMass::finite(1.0 / std::sqrt(2.0 * alpha));
    return {a, b};
}

Dimensionless to_dimensionless(const PhysicalParams& p) {
    require_positive(p.m, p.hbar, p.G);
    if (!std::isfinite(p.omega_tilde)) throw InvalidCouplings("frequency must be finite");
    return {2.0 * p.m * p.omega_tilde / (p.hbar * p.hbar), std::sqrt(2.0 * p.G * p.m * p.m * p.m) / p.hbar};
}

double physical_frequency(double omega, double m, double hbar) {
    require_positive(m, hbar);
    return hbar * hbar * omega / (2.0 * m);
}

double physical_field(double u, double m, double hbar, double G) {
    require_positive(m, hbar, G);
    return u * hbar / std::sqrt(2.0 * G * m * m * m);
}

}  // namespace nlgs
