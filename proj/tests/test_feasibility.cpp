#include <gtest/gtest.h>

#include "common.hpp"

using namespace wpme;
using wpme::testing::code_of;

namespace {

void expect_round_trip(const FeasibilityReport& rep, const std::vector<Check>& again) {
    ASSERT_TRUE(rep.feasible) << rep.system;
    ASSERT_EQ(rep.checks.size(), again.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        EXPECT_EQ(rep.checks[i].id, again[i].id);
        EXPECT_NEAR(rep.checks[i].lhs, again[i].lhs, 1e-10 * std::max(1.0, std::abs(again[i].lhs)));
        EXPECT_NEAR(rep.checks[i].rhs, again[i].rhs, 1e-10 * std::max(1.0, std::abs(again[i].rhs)));
        EXPECT_GE(again[i].margin, 0.0) << rep.system << " " << again[i].id;
    }
}

}  // namespace

TEST(Feasibility, PeakCoefficient) {
    EXPECT_DOUBLE_EQ(peak_coefficient(2.0, 2.0), 0.25);
    for (double m = 1.1; m <= 5.0; m += 0.3)
        for (double p = 1.1; p <= 5.0; p += 0.3) EXPECT_GT(peak_coefficient(m, p), 0.0) << m << " " << p;
}

TEST(Feasibility, FastGlobalCanonical) {
    const auto d = DensitySpec::power(1.0, 3.0);
    const ProblemExponents e{2.0, 3.0};
    const auto rep = feasible_fast_global(e, d);
    expect_round_trip(rep, fast_global_checks(e, d, rep.barrier.eps, rep.barrier.C, rep.barrier.a, rep.barrier.T()));
    // omega <= (p-m)/(p-1) (m-1) c1 / (m b^2) = 1/4
    EXPECT_LE(rep.omega, 0.25);
    EXPECT_DOUBLE_EQ(rep.omega, std::pow(rep.barrier.C, 1.0) / rep.barrier.a);
    EXPECT_DOUBLE_EQ(rep.barrier.time.alpha, 0.5);
    EXPECT_DOUBLE_EQ(rep.barrier.time.beta, 0.5);
    EXPECT_EQ(rep.barrier.family, Family::FastSuper);
}

TEST(Feasibility, FastGlobalNarrowCollarHasEmptyWindow) {
    const auto d = DensitySpec::power(1.0, 3.0);
    const auto w = fast_global_window({2.0, 3.0}, d, 0.25);
    EXPECT_DOUBLE_EQ(w.omega_hi, 0.25);
    EXPECT_GT(w.omega_lo, w.omega_hi);
    const auto rep = feasible_fast_global({2.0, 3.0}, d, {0.25});
    EXPECT_FALSE(rep.feasible);
    EXPECT_LE(rep.omega, 0.25 * (1.0 + 1e-12));
}

TEST(Feasibility, FastGlobalScanAndSigns) {
    const auto d = DensitySpec::power(1.0, 3.0);
    for (int sign : {1, -1}) {
        FastGlobalOptions o;
        o.bracket_sign = sign;
        const auto rep = feasible_fast_global({2.0, 3.0}, d, o);
        EXPECT_TRUE(rep.feasible);
        EXPECT_EQ(rep.barrier.bracket_sign, sign);
        EXPECT_FALSE(rep.notes.empty());
    }
}

TEST(Feasibility, FastGlobalShrinkingCKeepsEndpoints) {
    const auto d = DensitySpec::power(1.0, 3.0);
    const ProblemExponents e{2.0, 3.0};
    const auto rep = feasible_fast_global(e, d);
    for (double f : {0.5, 0.25, 0.1}) {
        const double C = f * rep.barrier.C;
        const double a = C / rep.omega;
        const auto ch = fast_global_checks(e, d, rep.barrier.eps, C, a, 1e300);
        for (const auto& c : ch) {
            if (c.id == "collar-endpoint" || c.id == "core-endpoint") {
                EXPECT_GE(c.margin, 0.0) << c.id;
            }
        }
    }
}

TEST(Feasibility, KBoundViolation) {
    const auto d = DensitySpec::power(1.0, 2.1, 1.0, 50.0);
    EXPECT_EQ(code_of([&] { feasible_fast_global({2.0, 3.0}, d); }), ErrorCode::KBoundViolated);
    EXPECT_NO_THROW(feasible_fast_global({2.0, 3.0}, DensitySpec::power(1.0, 2.1, 1.0, 11.0)));
}

TEST(Feasibility, FastGlobalPreconditions) {
    EXPECT_EQ(code_of([] { feasible_fast_global({3.0, 2.0}, DensitySpec::power(1.0, 3.0)); }),
              ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { feasible_fast_global({2.0, 3.0}, DensitySpec::power(1.0, 2.0)); }),
              ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { feasible_fast_global({1.0, 3.0}, DensitySpec::power(1.0, 3.0)); }),
              ErrorCode::InvalidArgument);
}

TEST(Feasibility, FastBlowupAllCases) {
    const auto d = DensitySpec::power(1.0, 3.0);
    EXPECT_DOUBLE_EQ(default_fast_blowup_eps(d), 0.9 / 3.0);
    for (ProblemExponents e : {ProblemExponents{2.0, 3.0}, ProblemExponents{3.0, 2.0}, ProblemExponents{2.0, 2.0}}) {
        const auto rep = feasible_fast_blowup(e, d, 0.25);
        expect_round_trip(rep, fast_blowup_checks(e, d, 0.25, rep.barrier.C, rep.barrier.a));
        EXPECT_EQ(rep.barrier.family, Family::FastSub);
        EXPECT_EQ(rep.barrier.time.kind, TimeKind::Backward);
        EXPECT_DOUBLE_EQ(rep.barrier.time.alpha, 1.0 / (e.p - 1.0));
        EXPECT_DOUBLE_EQ(rep.barrier.time.beta, (e.m - e.p) / (e.p - 1.0));
    }
}

TEST(Feasibility, FastBlowupPltMExceedsThreshold) {
    const auto d = DensitySpec::power(1.0, 3.0);
    const ProblemExponents e{3.0, 2.0};
    const auto rep = feasible_fast_blowup(e, d, 0.25);
    const double thr = fast_blowup_omega_threshold(e, d, 0.25);
    EXPECT_GT(rep.omega, thr);
    EXPECT_DOUBLE_EQ(rep.extra("omega_threshold"), thr);
}

TEST(Feasibility, FastBlowupErrors) {
    const auto d = DensitySpec::power(1.0, 3.0);
    EXPECT_EQ(code_of([&] { feasible_fast_blowup({2.0, 3.0}, d, 0.34); }), ErrorCode::EpsilonTooLarge);
    EXPECT_NO_THROW(feasible_fast_blowup({2.0, 3.0}, d, 0.333));
    EXPECT_EQ(code_of([&] { feasible_fast_blowup({2.0, 3.0}, d, 0.25, BlowupCase::PltM); }),
              ErrorCode::InvalidArgument);
}

TEST(Feasibility, CriticalGlobalCondition) {
    const auto d = DensitySpec::power(1.0, 2.0);
    const ProblemExponents e{2.0, 3.0};
    // delta = 1: 2 omega * 2 >= C^2 + 1/2
    EXPECT_GE(2.0 * 1.0 * 2.0, 0.5 * 0.5 + 0.5);
    const auto rep = feasible_critical_global(e, d);
    const auto& s = rep.barrier;
    expect_round_trip(rep, critical_global_checks(e, d, 1.0, s.C, s.a, s.T(), 5.0));
    EXPECT_GE(4.0 * rep.omega, s.C * s.C + 0.5);
    EXPECT_EQ(s.family, Family::CriticalSuper);
    EXPECT_DOUBLE_EQ(s.time.beta, 0.5);
}

TEST(Feasibility, CriticalBlowupCanonical) {
    const auto d = DensitySpec::power(1.0, 2.0);
    const ProblemExponents e{2.0, 3.0};
    const auto rep = feasible_critical_blowup(e, d, 0.25);
    expect_round_trip(rep, critical_blowup_checks(e, d, 0.25, rep.barrier.C, rep.barrier.a));
    EXPECT_EQ(rep.barrier.family, Family::CriticalSub);
    EXPECT_EQ(code_of([&] { feasible_critical_blowup({3.0, 2.0}, d); }), ErrorCode::InvalidArgument);
}

TEST(Feasibility, SlowCanonical) {
    const auto d = DensitySpec::power(1.0, 1.0);
    EXPECT_DOUBLE_EQ(slow_delta(d), 1.0);
    const ProblemExponents e{2.0, 3.0};
    const auto rep = feasible_slow(e, d);
    EXPECT_DOUBLE_EQ(rep.barrier.d_exp, 0.5);
    const auto& s = rep.barrier;
    expect_round_trip(rep, slow_checks(e, d, 0.5, s.C, s.time.alpha, s.T(), SlowSignMode::Corrected));
    // 0.25 C^2 >= C^3
    EXPECT_LE(s.C, 0.25);
    EXPECT_EQ(s.time.alpha, 0.0);
}

TEST(Feasibility, SlowPltM) {
    const auto d = DensitySpec::power(1.0, 0.5);
    const ProblemExponents e{3.0, 2.0};
    const auto rep = feasible_slow(e, d);
    const auto& s = rep.barrier;
    expect_round_trip(rep, slow_checks(e, d, s.d_exp, s.C, s.time.alpha, s.T(), SlowSignMode::Corrected));
    EXPECT_GT(s.time.alpha, 0.0);
    EXPECT_GT(s.T(), 1.0);
}

TEST(Feasibility, SlowLiteralModeAndErrors) {
    const auto d = DensitySpec::power(1.0, 1.0);
    SlowOptions o;
    o.sign_mode = SlowSignMode::Literal;
    const auto rep = feasible_slow({2.0, 3.0}, d, o);
    EXPECT_FALSE(rep.feasible);
    EXPECT_EQ(code_of([&] { require_feasible(rep); }), ErrorCode::NoFeasiblePoint);
    EXPECT_EQ(code_of([&] { feasible_slow({2.0, 2.0}, d); }), ErrorCode::PeqMUnsupported);
    EXPECT_EQ(code_of([&] {
                  SlowOptions bad;
                  bad.d_exp = 1.0;
                  feasible_slow({2.0, 3.0}, d, bad);
              }),
              ErrorCode::InvalidArgument);
}

TEST(Feasibility, TightestCheck) {
    const auto rep = feasible_fast_global({2.0, 3.0}, DensitySpec::power(1.0, 3.0));
    const Check* t = rep.tightest();
    ASSERT_NE(t, nullptr);
    for (const auto& c : rep.checks) EXPECT_LE(t->margin, c.margin);
}
