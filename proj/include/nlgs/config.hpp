#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlgs/kernel.hpp"
#include "nlgs/potentials.hpp"
#include "nlgs/solver.hpp"

namespace nlgs {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Subcommand { Solve, Sweep, Atlas, Verify };
std::string to_string(Subcommand s);
Subcommand parse_subcommand(const std::string& text);

struct RunConfig {
    Subcommand subcommand = Subcommand::Solve;
    KernelParams kernel{ScreeningMass::infinite(), ScreeningMass::infinite()};
    /// (alpha, beta) when the kernel came from the couplings.
    std::optional<std::pair<double, double>> couplings;
    std::optional<PotentialSpec> potential;
    /// Also carries mu, grid_n, box and seed.
    SolverConfig solver;
    std::vector<double> mu_list{0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<ScreeningMass> a_grid;
    std::vector<ScreeningMass> b_grid;
    int verify_samples = 100;
    std::string output_dir = "nlgs-out";

    /// Every resolved setting except output_dir, one per line in fixed order.
    std::string canonical() const;
    /// 16 hex digits of the FNV-1a hash of canonical().
    std::string hash() const;
};

/// Command-line values; each set field overrides the file.
struct ConfigOverrides {
    std::optional<std::string> a, b;
    std::optional<double> alpha, beta;
    std::optional<double> mu;
    std::optional<int> grid_n;
    std::optional<double> box;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::vector<double>> mu_list;
};

/// The valid fully qualified keys, in documentation order.
const std::vector<std::string>& valid_config_keys();

RunConfig parse_config_text(const std::string& text, Subcommand sub, const ConfigOverrides& flags = {});

/// Reads the file when given; NLGS_OUTPUT_DIR overrides output_dir, flags
/// override both.
RunConfig parse_config(const std::optional<std::string>& path, Subcommand sub, const ConfigOverrides& flags = {});

/// 0 when every assertion passed, 1 on non-convergence or a failed assertion,
/// 2 on a configuration error. Progress goes to log.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace nlgs
