#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlgs/deficiency.hpp"
#include "nlgs/kernel.hpp"
#include "nlgs/potentials.hpp"
#include "nlgs/solver.hpp"

namespace nlgs {

class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AsymptoticTarget { ZeroZero, InfInf, ZeroInf };
std::string to_string(AsymptoticTarget t);
AsymptoticTarget parse_asymptotic_target(const std::string& text);

/// The exact limit kernel: (0,0), (inf,inf) or (0,inf).
KernelParams limit_kernel(AsymptoticTarget t);

/// Step n = 0..steps-1: (2^-n, 2^-n), (2^n, 2^n) or (2^-n, 2^n).
std::vector<KernelParams> default_sequence(AsymptoticTarget t, int steps);

/// sqrt(A(u - v) + mass(u - v)).
double h1_distance(const Field& u, const Field& v);

struct AsymptoticStep {
    KernelParams params = KernelParams::make(0.0, 0.0);
    double energy = 0.0;
    double omega = 0.0;
    double h1_distance = 0.0;
    /// |E_n - E_limit|.
    double energy_gap = 0.0;
    /// (4 b_n + a_n) mu^2 / 12 for the (0,0) target, unset otherwise.
    std::optional<double> gap_bound;
    bool converged = false;
    SolverStatus status = SolverStatus::NotConverged;
    int iters = 0;
    double residual = 0.0;
};

struct AsymptoticRun {
    AsymptoticTarget target;
    double mu = 0.0;
    std::vector<AsymptoticStep> steps;
    GroundStateResult limit_result;
    std::optional<DeficiencyReport> deficiency;

    /// Distances strictly decrease after the first step.
    bool distances_monotone() const;
};

/// Solves the limit problem, then each sequence problem warm-started from the
/// limit minimizer. With V present, V must be energy-deficient for the limit kernel.
AsymptoticRun run_asymptotic(AsymptoticTarget target, const std::optional<PotentialSpec>& v, double mu,
                             const std::vector<KernelParams>& sequence, const SolverConfig& cfg);
AsymptoticRun run_asymptotic(AsymptoticTarget target, const std::optional<PotentialSpec>& v, double mu, int steps,
                             const SolverConfig& cfg);

/// Columns: step,a,b,energy,omega,h1_distance,energy_gap,gap_bound,converged,iters,residual.
std::string asymptotic_csv(const AsymptoticRun& run);

struct InequalityRecord {
    int sample = 0;
    double c = 0.0;
    double mass = 0.0;
    double d0 = 0.0;
    double dc = 0.0;
    /// 4 pi / c^2 ||u||_4^4.
    double l4_bound = 0.0;
    /// c mass^2.
    double difference_bound = 0.0;
};

struct InequalityReport {
    int samples = 0;
    std::uint64_t seed = 0;
    std::vector<double> cs;
    std::vector<InequalityRecord> records;

    int l4_violations = 0;
    double l4_max_ratio = 0.0;
    int difference_violations = 0;
    double difference_max_ratio = 0.0;
    /// d_c increasing in c anywhere along 0 < cs < inf.
    int monotone_violations = 0;

    /// Lower-bound shape (1 - eps)/2 A - C1 mu - C2 A^{1/2} mu^{3/2} <= E with
    /// eps = 1/2, for the Choquard kernel with V = -1/|x|; fitted constants.
    double shape_c1 = 0.0;
    double shape_c2 = 0.0;
    bool shape_fitted = false;

    bool passed() const;
};

/// Random band-limited fields on g (32^3 points, box 20 by default).
InequalityReport inequality_suite(int sample_count, std::uint64_t seed, const std::vector<double>& cs = {0.5, 1.0, 4.0},
                                  std::optional<Grid3> grid = std::nullopt);

/// Columns: sample,c,mass,d0,dc,l4_bound,difference_bound.
std::string inequality_csv(const InequalityReport& rep);

struct AtlasRow {
    KernelParams params;
    KernelClass cls;
    /// Finite a and b only; the zero kernel gets value and slope 0.
    std::optional<KernelGeometryReport> geometry;
};

std::vector<AtlasRow> atlas_sweep(const std::vector<ScreeningMass>& a_grid, const std::vector<ScreeningMass>& b_grid);

/// Columns: a,b,regime,sign,monotonicity,gradient_energy_finite,value_at_zero,
/// slope_at_zero,critical_points,sign_change_radius (blank when undefined;
/// critical points separated by ';').
std::string atlas_csv(const std::vector<AtlasRow>& rows);

struct SubadditivityCheck {
    double mu = 0.0;
    double rho = 0.0;
    double e_mu = 0.0;
    double e_rho = 0.0;
    double e_rest = 0.0;
    /// E(rho) or E(mu - rho) read off a log-linear interpolation of E/mu.
    bool interpolated = false;
    bool holds = false;
};

struct CurveChecks {
    /// Each consecutive drop of E/mu exceeds min_drop.
    bool ratio_decreasing = true;
    double smallest_drop = 0.0;
    std::vector<SubadditivityCheck> subadditivity;
    bool all_converged = true;

    bool passed() const;
};

/// Monotonicity of E/mu and E(mu) < E(rho) + E(mu - rho) for rho = mu/3, mu/2
/// wherever both pieces lie inside the sampled mass range.
CurveChecks check_energy_curve(const std::vector<CurvePoint>& curve, double min_drop);

struct RescalingCheck {
    double theta = 1.0;
    double mass_rel = 0.0;
    /// |A(u_theta) / (theta^4 A(u)) - 1|.
    double kinetic_rel = 0.0;
    /// |K_{a,b}(u_theta) / (theta^2 K_{a/theta^2, b/theta^2}(u)) - 1| per kernel.
    std::vector<std::pair<KernelParams, double>> kernel_rel;
};

std::vector<RescalingCheck> rescaling_checks(const Field& u, const std::vector<double>& thetas,
                                             const std::vector<KernelParams>& kernels);

}  // namespace nlgs
