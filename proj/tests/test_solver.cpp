#include <gtest/gtest.h>

#include "common.hpp"

using namespace wpme;
using wpme::testing::code_of;

namespace {

constexpr double kBarenblattC = 0.02815;

/// Barenblatt profile for m = 2 on the line: t^{-1/3} (C - x^2 t^{-2/3} / 12)_+.
double barenblatt(double x, double t) {
    const double v = kBarenblattC - x * x * std::pow(t, -2.0 / 3.0) / 12.0;
    return v > 0.0 ? std::pow(t, -1.0 / 3.0) * v : 0.0;
}

struct BarenblattRun {
    double rel_err;
    double mass_drift;
};

BarenblattRun run_barenblatt(SchemeConfig c) {
    const auto d = DensitySpec::power(1.0, 0.0);
    c.mesh = MeshKind::Uniform;
    c.reaction = false;
    const double t0 = 0.1;
    const auto r = solve_regularized(d, 2.0, 3.0, [&](double x) { return barenblatt(x, t0); }, 0.01, c, 1.0 - t0);
    EXPECT_EQ(r.status, SolveStatus::Global);
    const Field& f = r.snapshots.back();
    const double front = std::sqrt(12.0 * kBarenblattC);
    double err = 0.0, peak = barenblatt(0.0, 1.0);
    for (std::size_t i = 0; i < f.x.size(); ++i)
        if (std::abs(f.x[i]) < 0.8 * front) err = std::max(err, std::abs(f.u[i] - barenblatt(f.x[i], 1.0)));
    const double m0 = r.history.front().mass;
    return {err / peak, std::abs(r.history.back().mass - m0) / m0};
}

double bump(double x) {
    const double s = x / 0.3;
    return std::abs(s) < 1.0 ? 0.05 * std::pow(1.0 - s * s, 2) : 0.0;
}

}  // namespace

TEST(Solver, LocalExistenceTime) {
    EXPECT_DOUBLE_EQ(local_existence_time(2.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(local_existence_time(3.0, 2.0), 0.125);
    EXPECT_TRUE(std::isinf(local_existence_time(3.0, 0.0)));
    EXPECT_EQ(code_of([] { local_existence_time(1.0, 1.0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { local_existence_time(2.0, -1.0); }), ErrorCode::InvalidDatum);
}

TEST(Solver, ConfigValidation) {
    SchemeConfig c;
    c.nx = 100;
    EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::InvalidArgument);
    c = SchemeConfig{};
    c.dt_min = 1.0;
    EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::InvalidArgument);
    EXPECT_NEAR(auto_blowup_cap(3.0, 1e-12), 0.1 * std::sqrt(0.05e12), 1e-3);
    EXPECT_EQ(auto_blowup_cap(2.0, 1e-12), 1e8);
}

TEST(Solver, ZeroDatumStaysZero) {
    const auto d = DensitySpec::power(1.0, 3.0);
    SchemeConfig c;
    c.nx = 101;
    const auto r = solve_regularized(d, 2.0, 3.0, [](double) { return 0.0; }, 0.01, c, 1.0);
    EXPECT_EQ(r.status, SolveStatus::Global);
    EXPECT_DOUBLE_EQ(r.t_final, 1.0);
    for (const auto& s : r.snapshots)
        for (double v : s.u) EXPECT_EQ(v, 0.0);
    EXPECT_TRUE(std::isinf(r.diag.local_existence_time));
}

TEST(Solver, RejectsBadDatum) {
    const auto d = DensitySpec::power(1.0, 3.0);
    SchemeConfig c;
    c.nx = 101;
    EXPECT_EQ(code_of([&] { solve_regularized(d, 2.0, 3.0, [](double) { return -1.0; }, 0.01, c, 1.0); }),
              ErrorCode::InvalidDatum);
    EXPECT_EQ(code_of([&] { solve_regularized(d, 2.0, 3.0, bump, 1.5, c, 1.0); }), ErrorCode::InvalidArgument);
}

TEST(Solver, BarenblattOracle) {
    SchemeConfig c;
    c.dt_max = 1e-2;
    const auto run = run_barenblatt(c);
    EXPECT_LE(run.rel_err, 0.01);
    EXPECT_LE(run.mass_drift, 1e-3);
}

TEST(Solver, BarenblattErrorDecreasesWithResolution) {
    SchemeConfig c;
    c.stepper = Stepper::BDF2;
    c.fixed_dt = true;
    c.dt0 = 2e-4;
    double prev = 1.0;
    for (std::size_t nx : {101, 201, 401}) {
        c.nx = nx;
        const double err = run_barenblatt(c).rel_err;
        EXPECT_LT(err, prev) << nx;
        prev = err;
    }
}

TEST(Solver, SteppersAgree) {
    const auto d = DensitySpec::power(1.0, 3.0);
    std::vector<double> finals;
    for (Stepper s : {Stepper::BDF1, Stepper::BDF2, Stepper::Explicit}) {
        SchemeConfig c;
        c.nx = 101;
        c.stepper = s;
        c.dt_max = 1e-3;
        const auto r = solve_regularized(d, 2.0, 3.0, bump, 0.05, c, 0.5);
        ASSERT_EQ(r.status, SolveStatus::Global) << to_string(s);
        finals.push_back(r.snapshots.back().sup());
    }
    EXPECT_NEAR(finals[1], finals[0], 2e-3 * finals[0]);
    EXPECT_NEAR(finals[2], finals[0], 2e-3 * finals[0]);
}

TEST(Solver, NonnegativeSymmetricDirichlet) {
    const auto in = wpme::testing::from_theorem("T2.1", "fast-super");
    SchemeConfig c;
    c.nx = 201;
    c.snapshot_every = 0.25;
    auto u0 = [&](double x) { return 0.5 * eval_barrier(in.spec, in.density, x, 0.0); };
    const auto r = solve_regularized(in.density, 2.0, 3.0, u0, 0.01, c, 2.0);
    ASSERT_EQ(r.status, SolveStatus::Global);
    EXPECT_GE(r.snapshots.size(), 9u);
    for (const auto& s : r.snapshots) {
        EXPECT_EQ(s.u.front(), 0.0);
        EXPECT_EQ(s.u.back(), 0.0);
        const double sup = s.sup();
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            EXPECT_GE(s.u[i], 0.0);
            EXPECT_NEAR(s.u[i], s.u[s.u.size() - 1 - i], 1e-10 * sup);
        }
    }
}

TEST(Solver, PureDiffusionSupNonincreasing) {
    const auto d = DensitySpec::power(1.0, 3.0);
    SchemeConfig c;
    c.nx = 201;
    c.reaction = false;
    const auto r = solve_regularized(d, 2.0, 3.0, bump, 0.01, c, 1.0);
    for (std::size_t k = 1; k < r.history.size(); ++k)
        EXPECT_LE(r.history[k].sup_norm, r.history[k - 1].sup_norm * (1.0 + 1e-12));
}

TEST(Solver, BlowupNotBeforeLocalExistence) {
    const auto in = wpme::testing::from_theorem("T2.2", "fast-sub");
    SchemeConfig c;
    c.nx = 201;
    const auto r =
        solve_regularized(in.density, 2.0, 3.0, [&](double x) { return eval_barrier(in.spec, in.density, x, 0.0); },
                          0.01, c, 5.0);
    ASSERT_EQ(r.status, SolveStatus::BlowUp);
    EXPECT_GE(r.t_lo, r.diag.local_existence_time - r.history.back().dt);
    EXPECT_LE(r.t_lo, r.t_hi);
    EXPECT_GE(r.history.back().sup_norm, 0.0);
    EXPECT_TRUE(no_false_blowup(r));
}

TEST(Solver, WeightedMassOfConstant) {
    const auto d = DensitySpec::power(1.0, 0.0);
    const Mesh mesh = make_mesh(0.5, 101, MeshKind::Uniform);
    const std::vector<double> one(mesh.size(), 1.0);
    EXPECT_NEAR(weighted_mass(mesh, d, one), 1.0, 1e-2);
}

TEST(MinimalSolution, ZeroDatumHasZeroDifferences) {
    const auto d = DensitySpec::power(1.0, 3.0);
    SchemeConfig c;
    c.nx = 101;
    c.dt0 = 1e-2;
    c.dt_max = 1e-2;
    c.snapshot_every = 0.1;
    const auto ms = minimal_solution(d, 2.0, 3.0, [](double) { return 0.0; }, {0.1, 0.05}, c, 0.5);
    EXPECT_TRUE(ms.report.monotone);
    EXPECT_EQ(ms.report.cauchy_last, 0.0);
}

TEST(MinimalSolution, MonotoneInDeltaForWideDatum) {
    const auto d = DensitySpec::power(1.0, 1.0);
    SchemeConfig c;
    c.nx = 201;
    c.dt0 = 1e-3;
    c.dt_max = 1e-3;
    c.snapshot_every = 0.1;
    auto u0 = [](double x) { return 0.1 * (1.0 - x * x); };
    const auto ms = minimal_solution(d, 2.0, 3.0, u0, {0.2, 0.1, 0.05}, c, 0.5);
    EXPECT_TRUE(ms.report.monotone) << ms.report.worst_violation;
    ASSERT_EQ(ms.report.level_differences.size(), 2u);
    EXPECT_GT(ms.report.level_differences[0], 0.0);
    EXPECT_LT(ms.report.level_differences[1], ms.report.level_differences[0]);
}

TEST(MinimalSolution, RejectsBadSequence) {
    const auto d = DensitySpec::power(1.0, 3.0);
    EXPECT_EQ(code_of([&] { minimal_solution(d, 2.0, 3.0, bump, {0.05, 0.1}, SchemeConfig{}, 1.0); }),
              ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { minimal_solution(d, 2.0, 3.0, bump, {}, SchemeConfig{}, 1.0); }),
              ErrorCode::InvalidArgument);
}

TEST(Ordering, ZeroSolutionBelowSupersolution) {
    const auto in = wpme::testing::from_theorem("T2.1", "fast-super");
    SchemeConfig c;
    c.nx = 101;
    const auto r = solve_regularized(in.density, 2.0, 3.0, [](double) { return 0.0; }, 0.01, c, 1.0);
    const auto o = compare_with_barrier(r, in.spec, in.density);
    EXPECT_TRUE(o.pass);
    EXPECT_GE(o.min_margin, 0.0);
    EXPECT_EQ(o.support_relation, "subset");
}

TEST(Ordering, SolutionAboveSupersolutionFails) {
    const auto in = wpme::testing::from_theorem("T2.4", "critical-super");
    SchemeConfig c;
    c.nx = 101;
    auto u0 = [&](double x) { return 3.0 * eval_barrier(in.spec, in.density, x, 0.0); };
    const auto r = solve_regularized(in.density, 2.0, 3.0, u0, 0.01, c, 0.1);
    const auto o = compare_with_barrier(r, in.spec, in.density);
    EXPECT_FALSE(o.pass);
    EXPECT_LT(o.min_margin, 0.0);
}

TEST(Ordering, CriticalSubNotApplicable) {
    const auto in = wpme::testing::from_theorem("T2.5", "critical-sub");
    SchemeConfig c;
    c.nx = 101;
    const auto r = solve_regularized(in.density, 2.0, 3.0, [](double) { return 0.0; }, 0.01, c, 0.1);
    const auto o = compare_with_barrier(r, in.spec, in.density);
    EXPECT_FALSE(o.applicable);
    EXPECT_FALSE(o.pass);
}

TEST(Ordering, WindowMismatch) {
    const auto in = wpme::testing::from_theorem("T2.2", "fast-sub");
    SolveResult r;
    r.mesh = make_mesh(0.99, 17, MeshKind::Uniform);
    r.snapshots.push_back({r.mesh.x, std::vector<double>(17, 0.0), 2.0 * in.spec.T()});
    EXPECT_EQ(code_of([&] { compare_with_barrier(r, in.spec, in.density); }), ErrorCode::WindowMismatch);
}
