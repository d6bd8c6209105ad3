#include <gtest/gtest.h>

#include "common.hpp"

using namespace wpme;
using wpme::testing::code_of;

namespace {

double rel_gap(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST(Profile, FastValues) {
    const ProfileFast f{1.0, 0.25, 1.0};
    EXPECT_DOUBLE_EQ(profile_fast(f, 0.75), 4.0);
    EXPECT_DOUBLE_EQ(profile_fast(f, 0.0), -2.0);
    EXPECT_DOUBLE_EQ(profile_fast_jet(f, 0.75, Side::Outer).dx, 16.0);
    EXPECT_TRUE(std::isinf(profile_fast(f, 1.0)));
    EXPECT_EQ(code_of([&] { profile_fast(f, 1.1); }), ErrorCode::DomainBoundary);
}

TEST(Profile, LogValues) {
    const ProfileCriticalLog g{1.0, 0.25};
    EXPECT_NEAR(profile_critical_log(g, 0.75), std::log(0.25), 1e-15);
    EXPECT_NEAR(profile_critical_log(g, 0.0), 1.5 + std::log(0.25), 1e-15);
    EXPECT_EQ(code_of([&] { profile_critical_log(g, 1.0); }), ErrorCode::DomainBoundary);
}

TEST(Profile, C1GluingAtCollarInterface) {
    for (double b : {0.5, 1.0, 2.0}) {
        for (double eps : {0.1, 0.25}) {
            const ProfileFast f{1.0, eps, b};
            for (double x : {1.0 - eps, -(1.0 - eps)}) {
                const auto in = profile_fast_jet(f, x, Side::Inner);
                const auto out = profile_fast_jet(f, x, Side::Outer);
                EXPECT_LE(rel_gap(in.value, out.value), 1e-12) << b << " " << eps;
                EXPECT_LE(rel_gap(in.dx, out.dx), 1e-12) << b << " " << eps;
            }
        }
    }
    for (double eps : {0.1, 0.25, 0.5}) {
        const ProfileCriticalLog g{1.0, eps};
        for (double x : {1.0 - eps, -(1.0 - eps)}) {
            const auto in = profile_critical_log_jet(g, x, Side::Inner);
            const auto out = profile_critical_log_jet(g, x, Side::Outer);
            EXPECT_LE(rel_gap(in.value, out.value), 1e-12);
            EXPECT_LE(rel_gap(in.dx, out.dx), 1e-12);
        }
    }
}

TEST(Profile, LiteralLogInnerBreaksGluing) {
    const ProfileCriticalLog g{1.0, 0.25, LogInner::Literal};
    const auto in = profile_critical_log_jet(g, 0.75, Side::Inner);
    const auto out = profile_critical_log_jet(g, 0.75, Side::Outer);
    EXPECT_LE(rel_gap(in.value, out.value), 1e-12);
    EXPECT_GT(rel_gap(in.dx, out.dx), 1.0);
}

TEST(TimeFactors, ExponentIdentities) {
    const auto fwd = default_time_factors(Family::FastSuper, 2.0, 3.0, 1.0);
    EXPECT_EQ(fwd.kind, TimeKind::Forward);
    EXPECT_DOUBLE_EQ(fwd.alpha, 0.5);
    EXPECT_DOUBLE_EQ(fwd.beta, 0.5);
    const auto bwd = default_time_factors(Family::FastSub, 3.0, 2.0, 1.0);
    EXPECT_EQ(bwd.kind, TimeKind::Backward);
    EXPECT_DOUBLE_EQ(bwd.alpha, 1.0);
    EXPECT_DOUBLE_EQ(bwd.beta, 1.0);
    EXPECT_DOUBLE_EQ(bwd.zeta(0.5), 2.0);
    EXPECT_DOUBLE_EQ(bwd.eta(0.5), 0.5);
    EXPECT_EQ(code_of([&] { bwd.zeta(1.0); }), ErrorCode::TimeOutOfDomain);
    EXPECT_EQ(bwd.t_max(), 1.0);
    EXPECT_TRUE(std::isinf(fwd.t_max()));
}

TEST(TimeFactors, DerivativesMatchDifferences) {
    for (TimeKind k : {TimeKind::Forward, TimeKind::Backward, TimeKind::Growth}) {
        const TimeFactors f{k, 0.7, 0.3, 2.0};
        const double t = 0.6, h = 1e-5;
        EXPECT_NEAR(f.dzeta(t), (f.zeta(t + h) - f.zeta(t - h)) / (2 * h), 1e-8);
        EXPECT_NEAR(f.deta(t), (f.eta(t + h) - f.eta(t - h)) / (2 * h), 1e-8);
    }
}

TEST(Barrier, ZeroAmplitudeIsZero) {
    for (const auto& in : wpme::testing::family_instances()) {
        BarrierSpec s = in.spec;
        s.C = 0.0;
        for (double x : {-0.99, -0.5, 0.0, 0.3, 0.9}) EXPECT_EQ(eval_barrier(s, in.density, x, 0.1), 0.0) << in.name;
    }
}

TEST(Barrier, SlowHandValue) {
    const auto d = DensitySpec::power(1.0, 1.0);
    BarrierSpec s = make_barrier(Family::SlowSuper, 2.0, 3.0, 1.0, 1.0, 1.0);
    s.d_exp = 0.5;
    s.time = default_time_factors(Family::SlowSuper, 2.0, 3.0, 1.0, 0.0);
    for (double t : {0.0, 1.0, 7.0}) {
        EXPECT_DOUBLE_EQ(eval_barrier(s, d, 0.0, t), 1.0);
        EXPECT_EQ(barrier_derivatives(s, d, 0.3, t).w_t, 0.0);
    }
    EXPECT_DOUBLE_EQ(eval_barrier(s, d, 0.75, 0.0), std::pow(0.25, 0.25));
    EXPECT_EQ(eval_barrier(s, d, 1.0, 0.0), 0.0);
}

TEST(Barrier, FastSubAtUnitBracket) {
    const auto d = DensitySpec::power(1.0, 3.0);
    const BarrierSpec s = make_barrier(Family::FastSub, 2.0, 3.0, 3.0, 5.0, 1.0, 0.25);
    const double x0 = std::sqrt(0.1875);  // inner profile vanishes here
    EXPECT_NEAR(profile_fast({1.0, 0.25, 1.0}, x0), 0.0, 1e-15);
    for (double t : {0.0, 0.5, 0.9}) EXPECT_NEAR(eval_barrier(s, d, x0, t), 3.0 * s.time.zeta(t), 1e-12);
}

TEST(Barrier, SupportIdentityFastSub) {
    const auto d = DensitySpec::power(1.0, 3.0);
    const BarrierSpec s = make_barrier(Family::FastSub, 2.0, 3.0, 3.0, 5.0, 1.0, 0.25);
    for (double t : {0.0, 0.5, 0.9}) {
        const double bound = s.a / s.time.eta(t);
        for (int i = 0; i < 2000; ++i) {
            const double x = -0.9995 + 1.999 * i / 1999.0;
            const bool positive = eval_barrier(s, d, x, t) > 0.0;
            const bool inside = profile_fast({1.0, 0.25, 1.0}, x) < bound;
            EXPECT_EQ(positive, inside) << x << " " << t;
        }
    }
}

TEST(Barrier, Evenness) {
    for (const auto& in : wpme::testing::family_instances()) {
        const double t1 = in.spec.time.kind == TimeKind::Backward ? 0.5 * in.spec.time.T : 3.0;
        for (double t : {0.0, t1})
            for (int i = 0; i <= 200; ++i) {
                const double x = 0.995 * i / 200.0 * in.density.R();
                EXPECT_EQ(eval_barrier(in.spec, in.density, x, t), eval_barrier(in.spec, in.density, -x, t))
                    << in.name;
            }
    }
}

TEST(Barrier, SlowPositiveAndVanishing) {
    const auto in = wpme::testing::from_theorem("T2.6", "slow");
    double prev = kInfinity;
    for (int i = 0; i < 100; ++i) {
        const double x = 0.01 * i;
        const double w = eval_barrier(in.spec, in.density, x, 1.0);
        EXPECT_GT(w, 0.0);
        EXPECT_LT(w, prev);
        prev = w;
    }
    EXPECT_LT(eval_barrier(in.spec, in.density, 1.0 - 1e-12, 1.0), 1e-2 * eval_barrier(in.spec, in.density, 0.0, 1.0));
}

TEST(Barrier, SentinelsByBracketSign) {
    const auto d = DensitySpec::power(1.0, 3.0);
    BarrierSpec s = make_barrier(Family::FastSuper, 2.0, 3.0, 1.0, 1.0, 1.0, 0.25);
    s.bracket_sign = 1;
    EXPECT_EQ(eval_barrier(s, d, 0.999, 0.0), 0.0);
    EXPECT_EQ(eval_barrier(s, d, 1.0, 0.0), 0.0);
    s.bracket_sign = -1;
    EXPECT_TRUE(std::isinf(eval_barrier(s, d, 0.999, 0.0)));
}

TEST(Barrier, ValidationErrors) {
    const auto d = DensitySpec::power(1.0, 3.0);
    EXPECT_EQ(code_of([&] { validate(make_barrier(Family::FastSub, 2.0, 3.0, 1.0, 1.0, 1.0, 0.4), d); }),
              ErrorCode::EpsilonTooLarge);
    EXPECT_NO_THROW(validate(make_barrier(Family::FastSub, 2.0, 3.0, 1.0, 1.0, 1.0, 0.25), d));
    EXPECT_EQ(code_of([&] { validate(make_barrier(Family::CriticalSub, 2.0, 3.0, 1.0, 1.0, 1.0, 0.25), d); }),
              ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { validate(make_barrier(Family::FastSuper, 2.0, 3.0, -1.0, 1.0, 1.0, 0.25), d); }),
              ErrorCode::InvalidArgument);
}

TEST(Barrier, DerivativeErrors) {
    const auto d = DensitySpec::power(1.0, 3.0);
    const BarrierSpec s = make_barrier(Family::FastSub, 2.0, 3.0, 1.0, 5.0, 1.0, 0.25);
    EXPECT_EQ(code_of([&] { barrier_derivatives(s, d, 0.75, 0.0); }), ErrorCode::OnBranchInterface);
    EXPECT_EQ(code_of([&] { barrier_derivatives(s, d, 0.9, 0.0); }), ErrorCode::BracketNonpositive);
    EXPECT_NO_THROW(barrier_derivatives(s, d, 0.75, 0.0, Side::Inner));
    EXPECT_EQ(barrier_derivatives(make_barrier(Family::FastSub, 2.0, 3.0, 1.0, 5.0, 1.0, 0.25), d, 0.0, 0.2).wm_x,
              0.0);
}

// Central differences of eval_barrier, Richardson-extrapolated, against the
// closed forms on random admissible points of every family.
TEST(Barrier, DerivativesMatchFiniteDifferences) {
    for (const auto& in : wpme::testing::family_instances()) {
        const auto& s = in.spec;
        const auto& d = in.density;
        const auto pts = wpme::testing::admissible_points(in, 20, 2e-3, 7);
        ASSERT_EQ(pts.size(), 20u) << in.name;
        for (const auto& pt : pts) {
            auto w = [&](double x, double t) { return eval_barrier(s, d, x, t); };
            auto wm = [&](double x) { return std::pow(w(x, pt.t), s.m); };
            auto d_t = [&](double h) { return (w(pt.x, pt.t + h) - w(pt.x, pt.t - h)) / (2 * h); };
            auto d_x = [&](double h) { return (wm(pt.x + h) - wm(pt.x - h)) / (2 * h); };
            auto d_xx = [&](double h) { return (wm(pt.x + h) - 2 * wm(pt.x) + wm(pt.x - h)) / (h * h); };
            auto rich = [](auto f, double h) { return (4.0 * f(0.5 * h) - f(h)) / 3.0; };
            const auto jet = barrier_derivatives(s, d, pt.x, pt.t);
            const double wt_scale = std::abs(jet.w_t) + std::abs(jet.w);
            const double wm_scale = std::abs(jet.wm_x) + std::abs(jet.wm_xx) + std::pow(jet.w, s.m);
            EXPECT_NEAR(jet.w, w(pt.x, pt.t), 1e-14 * jet.w);
            EXPECT_LE(std::abs(rich(d_t, 2e-3) - jet.w_t) / wt_scale, 1e-6) << in.name << " x=" << pt.x;
            EXPECT_LE(std::abs(rich(d_x, 2e-3) - jet.wm_x) / wm_scale, 1e-6) << in.name << " x=" << pt.x;
            EXPECT_LE(std::abs(rich(d_xx, 2e-3) - jet.wm_xx) / wm_scale, 1e-6) << in.name << " x=" << pt.x;
        }
    }
}
