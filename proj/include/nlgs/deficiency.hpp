#pragma once

#include <optional>

#include "nlgs/potentials.hpp"
#include "nlgs/solver.hpp"

namespace nlgs {

struct DeficiencyReport {
    double e_v = 0.0;
    double e_0 = 0.0;
    bool deficient = false;
    /// Ten times the solver gradient tolerance.
    double margin = 0.0;
    /// A solve failed to converge; deficient is then false.
    bool inconclusive = false;
    /// e_0 is the known value 0 (b = 0, no ground state) instead of a solve.
    bool e0_analytic = false;
    /// The run with the potential, best of the matched starts.
    std::optional<GroundStateResult> with_potential;
    std::optional<GroundStateResult> without_potential;

    double gap() const { return e_0 - e_v; }
};

/// Solves with and without V from the same initial fields and compares.
DeficiencyReport check_deficiency(const PotentialSpec& spec, const KernelParams& p, double mu, const SolverConfig& cfg);

}  // namespace nlgs
