#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nlgs/experiments.hpp"
#include "test_util.hpp"

using namespace nlgs;
using testutil::gaussian_field;

namespace {

CurvePoint point(double mu, double e) { return CurvePoint{mu, e, 0.0, true, GroundStateResult{Field(Grid3(8, 1.0))}}; }

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST(Asymptotic, TargetsAndSequences) {
    EXPECT_EQ(parse_asymptotic_target(to_string(AsymptoticTarget::ZeroInf)), AsymptoticTarget::ZeroInf);
    EXPECT_ANY_THROW(parse_asymptotic_target("sideways"));
    EXPECT_EQ(limit_kernel(AsymptoticTarget::ZeroZero), KernelParams::make(0, 0));
    EXPECT_EQ(limit_kernel(AsymptoticTarget::InfInf), KernelParams::make(INFINITY, INFINITY));
    EXPECT_EQ(limit_kernel(AsymptoticTarget::ZeroInf), KernelParams::make(0, INFINITY));

    const auto zz = default_sequence(AsymptoticTarget::ZeroZero, 4);
    ASSERT_EQ(zz.size(), 4u);
    EXPECT_EQ(zz[3], KernelParams::make(0.125, 0.125));
    EXPECT_EQ(default_sequence(AsymptoticTarget::InfInf, 3)[2], KernelParams::make(4, 4));
    EXPECT_EQ(default_sequence(AsymptoticTarget::ZeroInf, 3)[2], KernelParams::make(0.25, 4));
}

TEST(Asymptotic, H1Distance) {
    const Grid3 g(16, 10.0);
    const Field u = gaussian_field(g, 1.0), v = gaussian_field(g, 1.3);
    EXPECT_EQ(h1_distance(u, u), 0.0);
    const Field d = u - v;
    EXPECT_NEAR(h1_distance(u, v), std::sqrt(dirichlet_energy(d) + mass(d)), 1e-14);
    EXPECT_DOUBLE_EQ(h1_distance(u, v), h1_distance(v, u));
}

TEST(Asymptotic, ChoquardLimitApproachedFromScreenedKernels) {
    SolverConfig c;
    c.grid_n = 48;
    c.box = 48.0;
    c.n_starts = 1;
    c.tol_grad = 1e-7;
    const AsymptoticRun run = run_asymptotic(AsymptoticTarget::InfInf, std::nullopt, 2.0, 3, c);
    ASSERT_EQ(run.steps.size(), 3u);
    EXPECT_TRUE(run.limit_result.converged);
    EXPECT_FALSE(run.deficiency.has_value());
    EXPECT_TRUE(run.distances_monotone());
    for (const auto& s : run.steps) {
        EXPECT_TRUE(s.converged);
        EXPECT_FALSE(s.gap_bound.has_value());
        EXPECT_GT(s.energy, run.limit_result.breakdown.total);
    }
    const std::string csv = asymptotic_csv(run);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,a,b,energy,omega,h1_distance,energy_gap,gap_bound,converged,iters,residual");
    EXPECT_EQ(count_lines(csv), 4);
}

TEST(Asymptotic, RepulsiveBumpViolatesHypothesis) {
    SolverConfig c;
    c.grid_n = 16;
    c.box = 16.0;
    c.n_starts = 1;
    c.tol_grad = 1e-7;
    PotentialSpec v;
    v.bounded = BoundedBump{0.5, 2.0, {0, 0, 0}};
    EXPECT_THROW(run_asymptotic(AsymptoticTarget::ZeroZero, v, 1.0, 2, c), HypothesisViolation);
}

TEST(Inequalities, SmallSuitePasses) {
    const InequalityReport r = inequality_suite(6, 11);
    EXPECT_EQ(r.records.size(), 18u);
    EXPECT_EQ(r.l4_violations, 0);
    EXPECT_EQ(r.difference_violations, 0);
    EXPECT_EQ(r.monotone_violations, 0);
    EXPECT_LE(r.l4_max_ratio, 1.0);
    EXPECT_LE(r.difference_max_ratio, 1.0);
    EXPECT_TRUE(r.shape_fitted);
    EXPECT_TRUE(r.passed());
    for (const auto& rec : r.records) EXPECT_LE(rec.dc, rec.d0);
    const std::string csv = inequality_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "sample,c,mass,d0,dc,l4_bound,difference_bound");
    EXPECT_EQ(count_lines(csv), 19);
}

TEST(Inequalities, SameSeedSameRecords) {
    EXPECT_EQ(inequality_csv(inequality_suite(2, 5)), inequality_csv(inequality_suite(2, 5)));
}

TEST(Atlas, RowsAndCsv) {
    const std::vector<ScreeningMass> a{ScreeningMass::finite(0), ScreeningMass::finite(6), ScreeningMass::infinite()};
    const std::vector<ScreeningMass> b{ScreeningMass::finite(0), ScreeningMass::finite(1)};
    const auto rows = atlas_sweep(a, b);
    ASSERT_EQ(rows.size(), 6u);
    int with_geometry = 0;
    for (const auto& r : rows) with_geometry += r.geometry.has_value();
    EXPECT_EQ(with_geometry, 4);
    const std::string csv = atlas_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "a,b,regime,sign,monotonicity,gradient_energy_finite,value_at_zero,slope_at_zero,critical_points,sign_change_radius");
    EXPECT_EQ(count_lines(csv), 7);
    EXPECT_EQ(csv, atlas_csv(atlas_sweep(a, b)));
}

TEST(CurveChecks, StrictlySubadditiveCurvePasses) {
    std::vector<CurvePoint> curve;
    for (double mu : {1.0, 2.0, 3.0, 4.0, 6.0}) curve.push_back(point(mu, -mu * mu * mu));
    const CurveChecks c = check_energy_curve(curve, 1e-6);
    EXPECT_TRUE(c.ratio_decreasing);
    EXPECT_FALSE(c.subadditivity.empty());
    for (const auto& s : c.subadditivity) EXPECT_TRUE(s.holds);
    EXPECT_TRUE(c.passed());
    EXPECT_DOUBLE_EQ(c.smallest_drop, 4.0 - 1.0);
}

TEST(CurveChecks, LinearCurveFails) {
    std::vector<CurvePoint> curve;
    for (double mu : {1.0, 2.0, 4.0}) curve.push_back(point(mu, -2.0 * mu));
    const CurveChecks c = check_energy_curve(curve, 1e-9);
    EXPECT_FALSE(c.ratio_decreasing);
    EXPECT_FALSE(c.passed());
}

TEST(CurveChecks, NonconvergedPointIsFlagged) {
    std::vector<CurvePoint> curve;
    for (double mu : {1.0, 2.0, 4.0}) curve.push_back(point(mu, -mu * mu * mu));
    curve[1].converged = false;
    EXPECT_FALSE(check_energy_curve(curve, 1e-9).all_converged);
}

TEST(Rescaling, GaussianChecks) {
    const Grid3 g(32, 16.0);
    const Field u = gaussian_field(g, 1.0);
    const auto checks = rescaling_checks(u, {0.9, 1.1}, {KernelParams::make(INFINITY, INFINITY), KernelParams::make(1, 2)});
    ASSERT_EQ(checks.size(), 2u);
    for (const auto& c : checks) {
        EXPECT_LT(c.mass_rel, 1e-10);
        EXPECT_LT(c.kinetic_rel, 1e-8);
        ASSERT_EQ(c.kernel_rel.size(), 2u);
        for (const auto& [p, e] : c.kernel_rel) EXPECT_LT(e, 1e-3) << p.to_string();
    }
}
