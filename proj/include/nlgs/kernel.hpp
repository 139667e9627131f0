#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlgs {

/// Raised when an argument lies outside the domain of a kernel routine.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Screening mass c in [0, inf]. Infinity is a distinct state and is never
/// stored as a large float; e^{-c r} is 1 for c = 0 and 0 for c = inf.
class ScreeningMass {
public:
    static ScreeningMass finite(double c);
    static ScreeningMass infinite() { return ScreeningMass(0.0, true); }

    bool is_infinite() const { return infinite_; }
    bool is_zero() const { return !infinite_ && value_ == 0.0; }
    /// Throws DomainError when infinite.
    double value() const;

    /// e^{-c r} with the limit conventions.
    double decay(double r) const;
    /// e^{-c r} - 1, accurate for small c r.
    double decay_minus_one(double r) const;

    /// c / s for a positive scale s (infinity stays infinity).
    ScreeningMass scaled(double s) const;

    std::string to_string() const;

    friend bool operator==(const ScreeningMass&, const ScreeningMass&) = default;

private:
    ScreeningMass(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

/// The pair (a, b) indexing K_{a,b}(x) = ((4/3) e^{-b|x|} - (1/3) e^{-a|x|} - 1) / |x|.
struct KernelParams {
    ScreeningMass a;
    ScreeningMass b;

    static KernelParams make(double a, double b);
    std::string to_string() const;

    friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// Parses "inf", "infinity" or a nonnegative decimal.
ScreeningMass parse_screening_mass(const std::string& text);

enum class KernelSign { IdenticallyZero, Negative, Positive, SignChanging };
enum class Monotonicity { NotApplicable, StrictlyIncreasing, StrictlyDecreasing, NotMonotonous };

/// The eight qualitative regimes of K_{a,b}, in table order.
enum class KernelRegime {
    Zero,                 // a = b = 0
    NegativeInfiniteB,    // 0 <= a <= 2b = inf
    NegativeFinite,       // 0 <= a <= 2b < inf
    NegativeNonMonotone,  // 0 < 2b < a <= 4b < inf
    SignChangingFinite,   // 0 < 4b < a < inf
    SignChangingInfiniteA,// 0 < 4b < a = inf
    PositiveFinite,       // 0 = 4b < a < inf
    PositiveInfiniteA,    // 0 = 4b < a = inf
};

struct KernelClass {
    KernelRegime regime;
    KernelSign sign;
    Monotonicity monotonicity;
    bool gradient_energy_finite;
};

std::string to_string(KernelRegime r);
std::string to_string(KernelSign s);
std::string to_string(Monotonicity m);

/// k_{a,b}(r) for r > 0.
double eval_kernel(const KernelParams& p, double r);

/// d/dr k_{a,b}(r) for r > 0.
double kernel_derivative(const KernelParams& p, double r);

/// Fourier transform of e^{-c|x|}/|x| restricted to the ball |x| <= cutoff.
/// Zero for c = inf.
double yukawa_block_multiplier(const ScreeningMass& c, double k, double cutoff);

/// Fourier transform of K_{a,b} 1_{|x| <= cutoff}: weights (4/3, -1/3, -1)
/// on the blocks at (b, a, 0).
double kernel_multiplier(const KernelParams& p, double k, double cutoff);

KernelClass classify_kernel(const KernelParams& p);

struct KernelGeometryReport {
    /// Radii where k'_{a,b} vanishes.
    std::vector<double> critical_points;
    /// Radii where f(r) = 3 r^2 k'_{a,b}(r) is stationary. For 0 < b < a these
    /// sit at log(a^2 / (4 b^2)) / (a - b); for 0 < a < b at log(4b^2/a^2)/(b-a).
    std::vector<double> auxiliary_critical_points;
    double value_at_zero;
    double slope_at_zero;
    std::optional<double> sign_change_radius;
};

/// Root-finding based geometry of k_{a,b}; a and b finite, not both zero.
KernelGeometryReport analyze_geometry(const KernelParams& p, double tol = 1e-10);

}  // namespace nlgs
