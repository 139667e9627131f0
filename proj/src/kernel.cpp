#include "nlgs/kernel.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

namespace nlgs {

namespace {

constexpr double kPi = std::numbers::pi;

// 1 - (1 + x) e^{-x}, with a series near zero where the direct form cancels.
double one_minus_poly_exp(double x) {
    if (x < 0.1) {
        double term = x * x / 2.0;
        double sum = 0.0;
        for (int n = 2; n < 24; ++n) {
            sum += term;
            // terms are (-1)^n x^n (n-1)/n!
            term *= -x * n / ((n + 1.0) * (n - 1.0));
        }
        return sum;
    }
    return -std::expm1(-x) - x * std::exp(-x);
}

// 1 - sin(x)/x
double one_minus_sinc(double x) {
    double ax = std::fabs(x);
    if (ax < 1e-2) {
        double x2 = x * x;
        return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    }
    return 1.0 - std::sin(x) / x;
}

// (e^{-c r} - 1) for one screening block
double block_numerator(const ScreeningMass& c, double r) { return c.decay_minus_one(r); }

// 1 - (1 + c r) e^{-c r}; the per-block piece of r N'(r) - N(r)
double block_slope_piece(const ScreeningMass& c, double r) {
    if (c.is_infinite()) return 1.0;
    if (c.is_zero()) return 0.0;
    return one_minus_poly_exp(c.value() * r);
}

bool is_zero_kernel(const KernelParams& p) { return p.a.is_zero() && p.b.is_zero(); }

double aux_slope(const KernelParams& p, double r) {
    // d/dr of 3 r^2 k'(r) is r (4b^2 e^{-br} - a^2 e^{-ar}); compared in logs
    // so the sign survives where both exponentials underflow
    if (p.a.is_zero()) return 1.0;
    if (p.b.is_zero()) return -1.0;
    const double a = p.a.value(), b = p.b.value();
    return (std::log(4.0 * b * b) - b * r) - (std::log(a * a) - a * r);
}

template <class F>
std::vector<double> bracketed_roots(F f, double lo, double hi, int samples, double tol) {
    std::vector<double> roots;
    double log_lo = std::log(lo);
    double step = (std::log(hi) - log_lo) / (samples - 1);
    double x0 = lo;
    double f0 = f(x0);
    for (int i = 1; i < samples; ++i) {
        double x1 = std::exp(log_lo + step * i);
        double f1 = f(x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
            double l = x0, h = x1, fl = f0;
            while (h - l > tol) {
                double m = 0.5 * (l + h);
                double fm = f(m);
                if (fm == 0.0) {
                    l = h = m;
                    break;
                }
                if ((fm < 0.0) == (fl < 0.0)) {
                    l = m;
                    fl = fm;
                } else {
                    h = m;
                }
            }
            roots.push_back(0.5 * (l + h));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

}  // namespace

ScreeningMass ScreeningMass::finite(double c) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw DomainError("screening mass must be a finite nonnegative number, got " + std::to_string(c));
    return ScreeningMass(c, false);
}

double ScreeningMass::value() const {
    if (infinite_) throw DomainError("screening mass is infinite");
    return value_;
}

double ScreeningMass::decay(double r) const {
    if (infinite_) return 0.0;
    if (value_ == 0.0) return 1.0;
    return std::exp(-value_ * r);
}

double ScreeningMass::decay_minus_one(double r) const {
    if (infinite_) return -1.0;
    if (value_ == 0.0) return 0.0;
    return std::expm1(-value_ * r);
}

ScreeningMass ScreeningMass::scaled(double s) const {
    if (!(s > 0.0)) throw DomainError("scale must be positive");
    if (infinite_) return *this;
    return finite(value_ / s);
}

std::string ScreeningMass::to_string() const {
    if (infinite_) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
}

KernelParams KernelParams::make(double a, double b) {
    auto mk = [](double c) { return std::isinf(c) && c > 0 ? ScreeningMass::infinite() : ScreeningMass::finite(c); };
    return KernelParams{mk(a), mk(b)};
}

std::string KernelParams::to_string() const { return "(a=" + a.to_string() + ", b=" + b.to_string() + ")"; }

ScreeningMass parse_screening_mass(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") return ScreeningMass::infinite();
    if (t.empty()) throw DomainError("empty screening mass");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || std::isnan(v))
        throw DomainError("cannot parse screening mass '" + text + "'");
    return ScreeningMass::finite(v);
}

std::string to_string(KernelRegime r) {
    switch (r) {
        case KernelRegime::Zero: return "a=b=0";
        case KernelRegime::NegativeInfiniteB: return "0<=a<=2b=inf";
        case KernelRegime::NegativeFinite: return "0<=a<=2b<inf";
        case KernelRegime::NegativeNonMonotone: return "0<2b<a<=4b<inf";
        case KernelRegime::SignChangingFinite: return "0<4b<a<inf";
        case KernelRegime::SignChangingInfiniteA: return "0<4b<a=inf";
        case KernelRegime::PositiveFinite: return "0=4b<a<inf";
        case KernelRegime::PositiveInfiniteA: return "0=4b<a=inf";
    }
    return "?";
}

std::string to_string(KernelSign s) {
    switch (s) {
        case KernelSign::IdenticallyZero: return "IdenticallyZero";
        case KernelSign::Negative: return "Negative";
        case KernelSign::Positive: return "Positive";
        case KernelSign::SignChanging: return "SignChanging";
    }
    return "?";
}

std::string to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::NotApplicable: return "NotApplicable";
        case Monotonicity::StrictlyIncreasing: return "StrictlyIncreasing";
        case Monotonicity::StrictlyDecreasing: return "StrictlyDecreasing";
        case Monotonicity::NotMonotonous: return "NotMonotonous";
    }
    return "?";
}

double eval_kernel(const KernelParams& p, double r) {
    if (!(r > 0.0)) throw DomainError("kernel radius must be positive");
    const bool ai = p.a.is_infinite(), bi = p.b.is_infinite();
    if (is_zero_kernel(p)) return 0.0;
    if (ai && bi) return -1.0 / r;
    if (bi && p.a.is_zero()) return -4.0 / (3.0 * r);
    if (bi) return -(1.0 + p.a.decay(r) / 3.0) / r;
    if (ai && p.b.is_zero()) return 1.0 / (3.0 * r);
    if (ai) return ((4.0 / 3.0) * p.b.decay(r) - 1.0) / r;
    return ((4.0 / 3.0) * block_numerator(p.b, r) - (1.0 / 3.0) * block_numerator(p.a, r)) / r;
}

double kernel_derivative(const KernelParams& p, double r) {
    if (!(r > 0.0)) throw DomainError("kernel radius must be positive");
    if (is_zero_kernel(p)) return 0.0;
    double f = 4.0 * block_slope_piece(p.b, r) - block_slope_piece(p.a, r);
    return f / (3.0 * r * r);
}

double yukawa_block_multiplier(const ScreeningMass& c, double k, double cutoff) {
    if (!(cutoff > 0.0)) throw DomainError("truncation radius must be positive");
    if (c.is_infinite()) return 0.0;
    const double kL = k * cutoff;
    const double s = std::sin(0.5 * kL);
    const double one_minus_cos = 2.0 * s * s;
    if (c.is_zero()) {
        if (k == 0.0) return 2.0 * kPi * cutoff * cutoff;
        return 4.0 * kPi * one_minus_cos / (k * k);
    }
    const double cv = c.value();
    const double cL = cv * cutoff;
    if (k == 0.0) return 4.0 * kPi * one_minus_poly_exp(cL) / (cv * cv);
    // 1 - e^{-cL}(cos kL + cL sinc kL), split into nonnegative pieces
    const double e = std::exp(-cL);
    const double bracket = one_minus_poly_exp(cL) + e * (one_minus_cos + cL * one_minus_sinc(kL));
    return 4.0 * kPi * bracket / (cv * cv + k * k);
}

double kernel_multiplier(const KernelParams& p, double k, double cutoff) {
    if (!(cutoff > 0.0)) throw DomainError("truncation radius must be positive");
    if (is_zero_kernel(p)) return 0.0;
    const double gb = yukawa_block_multiplier(p.b, k, cutoff);
    const double ga = yukawa_block_multiplier(p.a, k, cutoff);
    const double g0 = yukawa_block_multiplier(ScreeningMass::finite(0.0), k, cutoff);
    return ((4.0 * gb - ga) - 3.0 * g0) / 3.0;
}

KernelClass classify_kernel(const KernelParams& p) {
    using R = KernelRegime;
    using S = KernelSign;
    using M = Monotonicity;
    if (is_zero_kernel(p)) return {R::Zero, S::IdenticallyZero, M::NotApplicable, true};
    if (p.b.is_infinite()) return {R::NegativeInfiniteB, S::Negative, M::StrictlyIncreasing, false};
    if (p.b.is_zero()) {
        if (p.a.is_infinite()) return {R::PositiveInfiniteA, S::Positive, M::StrictlyDecreasing, false};
        return {R::PositiveFinite, S::Positive, M::StrictlyDecreasing, true};
    }
    if (p.a.is_infinite()) return {R::SignChangingInfiniteA, S::SignChanging, M::NotMonotonous, false};
    const double a = p.a.value(), b = p.b.value();
    if (a <= 2.0 * b) return {R::NegativeFinite, S::Negative, M::StrictlyIncreasing, true};
    if (a <= 4.0 * b) return {R::NegativeNonMonotone, S::Negative, M::NotMonotonous, true};
    return {R::SignChangingFinite, S::SignChanging, M::NotMonotonous, true};
}

KernelGeometryReport analyze_geometry(const KernelParams& p, double tol) {
    if (p.a.is_infinite() || p.b.is_infinite()) throw DomainError("analyze_geometry needs finite a and b");
    if (is_zero_kernel(p)) throw DomainError("degenerate kernel: a = b = 0");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const double a = p.a.value(), b = p.b.value();

    double min_nonzero = std::numeric_limits<double>::infinity();
    if (a > 0.0) min_nonzero = std::min(min_nonzero, a);
    if (b > 0.0) min_nonzero = std::min(min_nonzero, b);
    const double scale = std::max(1.0, 1.0 / min_nonzero);
    const double lo = 1e-6 * scale, hi = 1e3 * scale;
    constexpr int samples = 10000;

    // 3 r^2 k'(r) has the sign of k' and no 1/r^2 blow-up
    auto f = [&](double r) { return 4.0 * block_slope_piece(p.b, r) - block_slope_piece(p.a, r); };
    auto g = [&](double r) { return aux_slope(p, r); };
    auto k = [&](double r) { return eval_kernel(p, r); };

    KernelGeometryReport rep;
    rep.critical_points = bracketed_roots(f, lo, hi, samples, tol);
    rep.auxiliary_critical_points = bracketed_roots(g, lo, hi, samples, tol);
    rep.value_at_zero = (a - 4.0 * b) / 3.0;
    rep.slope_at_zero = (4.0 * b * b - a * a) / 6.0;
    if (b > 0.0 && 4.0 * b < a) {
        auto z = bracketed_roots(k, lo, hi, samples, tol);
        if (!z.empty()) rep.sign_change_radius = z.front();
    }
    return rep;
}

}  // namespace nlgs
