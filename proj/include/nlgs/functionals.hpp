#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "nlgs/grid.hpp"
#include "nlgs/kernel.hpp"
#include "nlgs/potentials.hpp"

namespace nlgs {

class RescaleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EnergyBreakdown {
    double kinetic = 0.0;   // A/2
    double potential = 0.0; // V(u)/2
    double nonlocal = 0.0;  // K(u)/4
    double total = 0.0;
    double d0 = 0.0;
    double da = 0.0;
    double db = 0.0;
    bool resolved = true;
};

/// Nonlocal pieces share one padded transform of u^2.
struct NonlocalParts {
    double d0 = 0.0, da = 0.0, db = 0.0;
    /// ((4 db - da) - 3 d0) / 3, exactly zero for a = b = 0.
    double k = 0.0;
};

/// Fraction of spectral power above which a field counts as unresolved.
inline constexpr double kResolutionThreshold = 0.01;

bool is_resolved(const Field& u);

double d_c(const Field& u, const ScreeningMass& c, std::optional<double> truncation = std::nullopt);
double k_ab(const Field& u, const KernelParams& p, std::optional<double> truncation = std::nullopt);
NonlocalParts nonlocal_parts(const Field& u, const KernelParams& p, std::optional<double> truncation = std::nullopt);

/// (K * u^2) on the grid.
Field nonlocal_potential(const Field& u, const KernelParams& p, std::optional<double> truncation = std::nullopt);

EnergyBreakdown energy(const Field& u, const KernelParams& p, const std::optional<PotentialSpec>& v,
                       std::optional<double> truncation = std::nullopt);
/// Same, with V already sampled on u's grid (nullptr for no potential).
EnergyBreakdown energy_sampled(const Field& u, const KernelParams& p, const Field* sampled_v,
                               std::optional<double> truncation = std::nullopt);

/// x -> theta^3 u(theta^2 x) by trigonometric interpolation.
Field rescale(const Field& u, double theta);

/// (A + V + K) / mu.
double nehari_omega(const Field& u, const KernelParams& p, const std::optional<PotentialSpec>& v,
                    std::optional<double> truncation = std::nullopt);

/// L^2 gradient of the energy: -Lap u + V u + (K * u^2) u.
Field energy_gradient(const Field& u, const KernelParams& p, const Field* sampled_v,
                      std::optional<double> truncation = std::nullopt);

}  // namespace nlgs
