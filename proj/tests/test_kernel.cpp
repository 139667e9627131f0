#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlgs/kernel.hpp"
#include "oracles/kernel_quadrature.hpp"

using namespace nlgs;

namespace {

const double kInf = INFINITY;

double oracle_c(const ScreeningMass& c) { return c.is_infinite() ? -1.0 : c.value(); }

}  // namespace

TEST(ScreeningMass, InfinityIsTagged) {
    const auto c = ScreeningMass::infinite();
    EXPECT_TRUE(c.is_infinite());
    EXPECT_THROW(c.value(), DomainError);
    EXPECT_EQ(c.decay(0.5), 0.0);
    EXPECT_EQ(ScreeningMass::finite(0.0).decay(123.0), 1.0);
    EXPECT_THROW(ScreeningMass::finite(-1.0), DomainError);
    EXPECT_THROW(ScreeningMass::finite(NAN), DomainError);
    EXPECT_TRUE(KernelParams::make(kInf, 1.0).a.is_infinite());
}

TEST(ScreeningMass, Parse) {
    EXPECT_TRUE(parse_screening_mass("inf").is_infinite());
    EXPECT_TRUE(parse_screening_mass(" Infinity ").is_infinite());
    EXPECT_EQ(parse_screening_mass("2.5").value(), 2.5);
    EXPECT_THROW(parse_screening_mass("-1"), DomainError);
    EXPECT_THROW(parse_screening_mass("abc"), DomainError);
}

TEST(EvalKernel, ZeroKernelVanishes) {
    for (double r : {1e-6, 0.3, 4.0, 100.0}) EXPECT_EQ(eval_kernel(KernelParams::make(0, 0), r), 0.0);
}

TEST(EvalKernel, SingularCasesExact) {
    const double r = 0.7;
    EXPECT_DOUBLE_EQ(eval_kernel(KernelParams::make(kInf, kInf), r), -1.0 / r);
    EXPECT_DOUBLE_EQ(eval_kernel(KernelParams::make(0, kInf), r), -4.0 / (3.0 * r));
    EXPECT_DOUBLE_EQ(eval_kernel(KernelParams::make(kInf, 0), r), 1.0 / (3.0 * r));
    EXPECT_DOUBLE_EQ(eval_kernel(KernelParams::make(2.0, kInf), r), (-std::exp(-2.0 * r) / 3.0 - 1.0) / r);
    EXPECT_DOUBLE_EQ(eval_kernel(KernelParams::make(kInf, 2.0), r), (4.0 * std::exp(-2.0 * r) / 3.0 - 1.0) / r);
}

TEST(EvalKernel, MatchesLongDoubleOracle) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double a = u(rng) < 0.1 ? kInf : 6.0 * u(rng), b = u(rng) < 0.1 ? kInf : 6.0 * u(rng);
        const double r = std::pow(10.0, -4.0 + 6.0 * u(rng));
        const KernelParams p = KernelParams::make(a, b);
        const double want = oracle::kernel(oracle_c(p.a), oracle_c(p.b), r);
        EXPECT_NEAR(eval_kernel(p, r), want, 1e-12 * std::max(1.0, std::fabs(want))) << p.to_string() << " r=" << r;
    }
    EXPECT_THROW(eval_kernel(KernelParams::make(1, 1), 0.0), DomainError);
}

TEST(KernelDerivative, MatchesCenteredDifferences) {
    for (auto [a, b] : {std::pair{6.0, 1.0}, {1.0, 2.0}, {0.0, 1.0}, {kInf, 1.0}, {1.0, 0.0}, {3.0, kInf}})
        for (double r : {0.05, 0.4, 1.3, 5.0}) {
            const KernelParams p = KernelParams::make(a, b);
            const double h = 1e-5 * r;
            const long double fd = (oracle::kernel_ld(oracle_c(p.a), oracle_c(p.b), r + h) -
                                    oracle::kernel_ld(oracle_c(p.a), oracle_c(p.b), r - h)) / (2.0L * h);
            EXPECT_NEAR(kernel_derivative(p, r), static_cast<double>(fd), 1e-7 * std::max(1.0, std::fabs(static_cast<double>(fd))))
                << p.to_string() << " r=" << r;
        }
}

TEST(KernelMultiplier, MatchesQuadratureOfTruncatedKernel) {
    for (auto [a, b] : {std::pair{1.0, 1.0}, {0.0, 2.0}, {6.0, 1.0}, {kInf, kInf}, {0.0, kInf}, {kInf, 0.5}, {0.0, 0.0}})
        for (double k : {0.0, 0.3, 1.7, 9.0})
            for (double L : {5.0, 30.0}) {
                const KernelParams p = KernelParams::make(a, b);
                const double want = oracle::truncated_transform(oracle_c(p.a), oracle_c(p.b), k, L);
                EXPECT_NEAR(kernel_multiplier(p, k, L), want, 1e-9 * std::max(1.0, std::fabs(want)))
                    << p.to_string() << " k=" << k << " L=" << L;
            }
}

TEST(KernelMultiplier, ZeroFrequencyLimitIsContinuous) {
    const KernelParams p = KernelParams::make(2.0, 0.5);
    EXPECT_NEAR(kernel_multiplier(p, 0.0, 10.0), kernel_multiplier(p, 1e-7, 10.0), 1e-9);
    EXPECT_EQ(yukawa_block_multiplier(ScreeningMass::infinite(), 1.0, 10.0), 0.0);
}

TEST(ClassifyKernel, TableRowsAtRepresentativePoints) {
    struct Row {
        double a, b;
        KernelRegime regime;
        KernelSign sign;
        Monotonicity mono;
    };
    const Row rows[] = {
        {0, 0, KernelRegime::Zero, KernelSign::IdenticallyZero, Monotonicity::NotApplicable},
        {1, kInf, KernelRegime::NegativeInfiniteB, KernelSign::Negative, Monotonicity::StrictlyIncreasing},
        {1, 2, KernelRegime::NegativeFinite, KernelSign::Negative, Monotonicity::StrictlyIncreasing},
        {3, 1, KernelRegime::NegativeNonMonotone, KernelSign::Negative, Monotonicity::NotMonotonous},
        {5, 1, KernelRegime::SignChangingFinite, KernelSign::SignChanging, Monotonicity::NotMonotonous},
        {kInf, 1, KernelRegime::SignChangingInfiniteA, KernelSign::SignChanging, Monotonicity::NotMonotonous},
        {1, 0, KernelRegime::PositiveFinite, KernelSign::Positive, Monotonicity::StrictlyDecreasing},
        {kInf, 0, KernelRegime::PositiveInfiniteA, KernelSign::Positive, Monotonicity::StrictlyDecreasing},
    };
    for (const auto& r : rows) {
        const KernelClass c = classify_kernel(KernelParams::make(r.a, r.b));
        EXPECT_EQ(c.regime, r.regime) << r.a << "," << r.b;
        EXPECT_EQ(c.sign, r.sign) << r.a << "," << r.b;
        EXPECT_EQ(c.monotonicity, r.mono) << r.a << "," << r.b;
        EXPECT_EQ(c.gradient_energy_finite, std::isfinite(r.a) && std::isfinite(r.b)) << r.a << "," << r.b;
    }
}

TEST(ClassifyKernel, BoundariesFollowTheInclusiveRows) {
    EXPECT_EQ(classify_kernel(KernelParams::make(2, 1)).regime, KernelRegime::NegativeFinite);
    EXPECT_EQ(classify_kernel(KernelParams::make(4, 1)).regime, KernelRegime::NegativeNonMonotone);
    EXPECT_EQ(classify_kernel(KernelParams::make(0, 1)).regime, KernelRegime::NegativeFinite);
    EXPECT_EQ(classify_kernel(KernelParams::make(kInf, kInf)).regime, KernelRegime::NegativeInfiniteB);
}

// Sign claims of each regime checked on a radial sample.
TEST(ClassifyKernel, SignMatchesSampledKernel) {
    for (auto [a, b] : {std::pair{1.0, 2.0}, {3.0, 1.0}, {5.0, 1.0}, {kInf, 1.0}, {1.0, 0.0}, {kInf, 0.0}, {0.5, kInf}}) {
        const KernelParams p = KernelParams::make(a, b);
        bool neg = false, pos = false;
        for (int i = 0; i < 4000; ++i) {
            const double r = std::pow(10.0, -3.0 + 5.0 * i / 3999.0);
            const double k = eval_kernel(p, r);
            neg = neg || k < 0;
            pos = pos || k > 0;
        }
        const KernelSign s = classify_kernel(p).sign;
        if (s == KernelSign::Negative) EXPECT_TRUE(neg && !pos) << p.to_string();
        if (s == KernelSign::Positive) EXPECT_TRUE(pos && !neg) << p.to_string();
        if (s == KernelSign::SignChanging) EXPECT_TRUE(pos && neg) << p.to_string();
    }
}

TEST(AnalyzeGeometry, TaylorCoefficientsMatchSmallRLimits) {
    for (auto [a, b] : {std::pair{6.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}, {4.0, 1.0}}) {
        const auto g = analyze_geometry(KernelParams::make(a, b));
        const auto lim = oracle::small_r_limits(a, b);
        EXPECT_NEAR(g.value_at_zero, lim.value, 1e-8);
        EXPECT_NEAR(g.slope_at_zero, lim.slope, 1e-8);
    }
}

TEST(AnalyzeGeometry, CriticalPointsAreZerosOfTheDerivative) {
    const auto g = analyze_geometry(KernelParams::make(6, 1));
    ASSERT_EQ(g.critical_points.size(), 1u);
    EXPECT_NEAR(kernel_derivative(KernelParams::make(6, 1), g.critical_points[0]), 0.0, 1e-10);
    ASSERT_EQ(g.auxiliary_critical_points.size(), 1u);
    EXPECT_NEAR(g.auxiliary_critical_points[0], std::log(9.0) / 5.0, 1e-8);
    ASSERT_TRUE(g.sign_change_radius.has_value());
    EXPECT_NEAR(eval_kernel(KernelParams::make(6, 1), *g.sign_change_radius), 0.0, 1e-9);
}

TEST(AnalyzeGeometry, NondecreasingKernelHasNoCriticalPoint) {
    for (auto [a, b] : {std::pair{1.0, 2.0}, {2.0, 1.0}, {0.0, 1.0}, {0.5, 0.5}}) {
        const auto g = analyze_geometry(KernelParams::make(a, b));
        EXPECT_TRUE(g.critical_points.empty()) << a << "," << b;
    }
}

TEST(AnalyzeGeometry, BoundaryFourBHasZeroValueAtOrigin) {
    EXPECT_EQ(analyze_geometry(KernelParams::make(4, 1)).value_at_zero, 0.0);
    EXPECT_FALSE(analyze_geometry(KernelParams::make(4, 1)).sign_change_radius.has_value());
}

TEST(AnalyzeGeometry, RejectsInfiniteAndZeroKernels) {
    EXPECT_THROW(analyze_geometry(KernelParams::make(kInf, 1)), DomainError);
    EXPECT_THROW(analyze_geometry(KernelParams::make(0, 0)), DomainError);
}
