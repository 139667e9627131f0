#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlgs/grid.hpp"

namespace nlgs {

class InvalidPotential : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Point3 = std::array<double, 3>;

/// q / |x - center|^alpha with 0 < alpha < 2.
struct PowerTerm {
    double q = 0.0;
    double alpha = 1.0;
    Point3 center{0.0, 0.0, 0.0};
};

/// amplitude * exp(-|x - center|^2 / (2 width^2)); its sup norm is |amplitude|.
struct BoundedBump {
    double amplitude = 0.0;
    double width = 4.0;
    Point3 center{0.0, 0.0, 0.0};
};

struct PotentialSpec {
    std::vector<PowerTerm> terms;
    std::optional<BoundedBump> bounded;

    /// Throws InvalidPotential on alpha outside (0, 2), nonfinite values or nonpositive width.
    void validate() const;
    bool is_trivial() const;
    /// V <= 0 everywhere.
    bool is_nonpositive() const;
    double bounded_sup_norm() const;
    /// The bounded part alone.
    PotentialSpec bounded_only() const;
    /// The singular terms alone.
    PotentialSpec singular_only() const;
    std::string describe() const;
};

PotentialSpec coulomb_potential(double q, Point3 center = {0.0, 0.0, 0.0});

/// Pointwise samples; each singular term uses max(|x - x0|, h/2).
Field sample_potential(const PotentialSpec& spec, const Grid3& g);

/// h^3 sum V u^2.
double potential_energy(const Field& u, const Field& sampled_v);
double potential_energy(const Field& u, const PotentialSpec& spec);

/// Whether V vanishes at infinity in the measure sense: every power term does
/// (alpha > 0) and the Gaussian bump does. Always true for a valid spec.
bool vanishes_at_infinity(const PotentialSpec& spec);

/// Discrete ||V||_{L^{3/2}} of the sampled singular part.
double l32_norm(const Field& v);

/// (1/2) ||u||_{L^6}^2 ||V2||_{L^{3/2}} + (1/2) ||V3||_inf mu.
double perturbation_bound(const Field& u, const Field& v2, double v3_sup, double mu);

}  // namespace nlgs
