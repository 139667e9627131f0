#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "nlgs/physics.hpp"

using namespace nlgs;

TEST(GravitonMasses, PureGeneralRelativity) {
    EXPECT_EQ(graviton_masses(0.0, 0.0), KernelParams::make(INFINITY, INFINITY));
}

TEST(GravitonMasses, FiniteCases) {
    const KernelParams p = graviton_masses(0.5, -0.5);
    EXPECT_DOUBLE_EQ(p.a.value(), 0.5);
    EXPECT_DOUBLE_EQ(p.b.value(), 1.0);
    const KernelParams q = graviton_masses(0.5, -1.0 / 6.0);
    EXPECT_TRUE(q.a.is_infinite());
    EXPECT_DOUBLE_EQ(q.b.value(), 1.0);
    const KernelParams r = graviton_masses(0.0, -1.0 / 12.0);
    EXPECT_DOUBLE_EQ(r.a.value(), 1.0);
    EXPECT_TRUE(r.b.is_infinite());
}

TEST(GravitonMasses, RejectsOutsideAdmissibleRegion) {
    EXPECT_THROW(graviton_masses(-0.1, -1.0), InvalidCouplings);
    EXPECT_THROW(graviton_masses(0.5, 0.0), InvalidCouplings);
    EXPECT_THROW(graviton_masses(std::numeric_limits<double>::quiet_NaN(), 0.0), InvalidCouplings);
    EXPECT_THROW(graviton_masses(INFINITY, -INFINITY), InvalidCouplings);
}

TEST(Dimensionless, FrequencyScaling) {
    PhysicalParams p;
    EXPECT_EQ(to_dimensionless(p).omega, 0.0);
    p.omega_tilde = -0.5;
    EXPECT_DOUBLE_EQ(to_dimensionless(p).omega, -1.0);
    p = PhysicalParams{2.0, 3.0, 5.0, 0.7, 0.0, 0.0};
    const Dimensionless d = to_dimensionless(p);
    EXPECT_DOUBLE_EQ(d.omega, 2.0 * 2.0 * 0.7 / 9.0);
    EXPECT_DOUBLE_EQ(d.field_scale, std::sqrt(2.0 * 5.0 * 8.0) / 3.0);
}

TEST(Dimensionless, RoundTrip) {
    for (double m : {0.3, 1.0, 7.0})
        for (double hbar : {0.5, 1.0, 2.0}) {
            const PhysicalParams p{m, hbar, 1.7, -0.37, 0.0, 0.0};
            const Dimensionless d = to_dimensionless(p);
            EXPECT_NEAR(physical_frequency(d.omega, m, hbar), p.omega_tilde, 1e-15);
            EXPECT_NEAR(physical_field(d.field_scale * 0.42, m, hbar, 1.7), 0.42, 1e-15);
        }
}

TEST(Dimensionless, RejectsNonpositiveConstants) {
    PhysicalParams p;
    p.m = 0.0;
    EXPECT_THROW(to_dimensionless(p), InvalidCouplings);
    EXPECT_THROW(physical_frequency(1.0, 1.0, -1.0), InvalidCouplings);
    EXPECT_THROW(physical_field(1.0, 1.0, 1.0, 0.0), InvalidCouplings);
}
