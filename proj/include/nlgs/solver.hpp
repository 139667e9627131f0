#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlgs/functionals.hpp"
#include "nlgs/grid.hpp"
#include "nlgs/kernel.hpp"
#include "nlgs/potentials.hpp"

namespace nlgs {

class SolverConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SolverConfig {
    double mu = 1.0;
    double tau = 0.1;
    double tau_max = 10.0;
    double tol_grad = 1e-8;
    double tol_energy = 1e-15;
    int stall_window = 50;
    int max_iters = 5000;
    int n_starts = 4;
    std::uint64_t seed = 0;
    int grid_n = 64;
    double box = 20.0;
    /// Kernel truncation radius; box diagonal when unset.
    std::optional<double> truncation;
    /// Keep per-iteration records of the best start.
    bool record_log = false;

    void validate() const;
    Grid3 grid() const { return Grid3(grid_n, box); }
};

struct IterationRecord {
    int iter = 0;
    double energy = 0.0;
    double residual = 0.0;
    double tau = 0.0;
    double second_moment = 0.0;
    bool accepted = true;
};

enum class SolverStatus { Converged, NotConverged, InfimumNotAttained };
std::string to_string(SolverStatus s);

struct StartSummary {
    std::string label;
    double energy = 0.0;
    double omega = 0.0;
    double residual = 0.0;
    int iters = 0;
    bool converged = false;
    SolverStatus status = SolverStatus::NotConverged;
};

struct GroundStateResult {
    explicit GroundStateResult(Field field) : u(std::move(field)) {}

    Field u;
    EnergyBreakdown breakdown;
    double omega = 0.0;
    bool converged = false;
    SolverStatus status = SolverStatus::NotConverged;
    int iters = 0;
    double residual = 0.0;
    int start_index = 0;
    std::vector<StartSummary> starts;
    std::vector<IterationRecord> log;
    /// Radial second moment about the initial peak, one entry per accepted step.
    std::vector<double> second_moments;
};

/// |inverse transform of Gaussian coefficients on |m_i| <= band| times a
/// Gaussian envelope of the given width.
Field random_band_limited_field(const Grid3& g, std::uint64_t seed, int band, double envelope_width, Point3 center = {0.0, 0.0, 0.0});

/// The initial fields used by minimize, in start order.
std::vector<std::pair<std::string, Field>> initial_guesses(const SolverConfig& cfg, const std::optional<PotentialSpec>& v);

/// Best-of-starts normalized gradient flow on the mass sphere.
GroundStateResult minimize(const KernelParams& p, const std::optional<PotentialSpec>& v, const SolverConfig& cfg);

/// Single run from a given field (rescaled to mass cfg.mu).
GroundStateResult minimize_from(const KernelParams& p, const std::optional<PotentialSpec>& v, const SolverConfig& cfg,
                                const Field& start, const std::string& label = "warm");

/// ||H u - omega u||_{L^2} with H u = -Lap u + V u + (K * u^2) u.
double residual(const Field& u, const KernelParams& p, const std::optional<PotentialSpec>& v, double omega,
                std::optional<double> truncation = std::nullopt);

struct CurvePoint {
    double mu = 0.0;
    double energy = 0.0;
    double omega = 0.0;
    bool converged = false;
    GroundStateResult result;
};

/// Warm-started sweep over ascending masses.
std::vector<CurvePoint> energy_curve(const KernelParams& p, const std::optional<PotentialSpec>& v,
                                     const std::vector<double>& mu_list, const SolverConfig& cfg);

/// Runs f(i) for i in [0, count), concurrently when hardware allows.
void parallel_for(int count, const std::function<void(int)>& f);

}  // namespace nlgs
