#pragma once

// Explicit barrier families w(x,t) for the weighted porous medium equation with
// reaction,  rho(x) u_t = (u^m)_xx + rho(x) u^p  on (-R, R).
//
// Bracketed families:   w = C zeta(t) [1 - s(x) eta(t) / a]_+^{sign/(m-1)}
// Slow family:          w = C zeta(t) (R - |x|)^{d/m}
//
// The spatial profile s(x) is one of
//   fast      s(x) = (R-|x|)^{-b} on the collar, a quadratic on the core (C^1 glued)
//   power     s(x) = (R-|x|)^{-delta}            (kink at x = 0)
//   log       s(x) = log(R-|x|) on the collar, a quadratic on the core (C^1 glued)

#include <cmath>
#include <limits>
#include <string>

#include "wpme/density.hpp"
#include "wpme/error.hpp"

namespace wpme {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Family { FastSuper, FastSub, CriticalSuper, CriticalSub, SlowSuper };
enum class Orientation { Super, Sub };
enum class TimeKind { Forward, Backward, Growth };

/// Core branch of the log profile. `Consistent` is ((R-eps)^2 - x^2 + ...), the
/// variant that glues in C^1 to log(R-|x|); `Literal` flips the quadratic.
enum class LogInner { Consistent, Literal };

/// Branch selection on the gluing interface |x| = R - eps.
enum class Side { Auto, Inner, Outer };

inline std::string to_string(Family f) {
    switch (f) {
    case Family::FastSuper: return "fast-super";
    case Family::FastSub: return "fast-sub";
    case Family::CriticalSuper: return "critical-super";
    case Family::CriticalSub: return "critical-sub";
    case Family::SlowSuper: return "slow-super";
    }
    return "?";
}

inline std::string to_string(Orientation o) { return o == Orientation::Super ? "super" : "sub"; }

inline std::string to_string(TimeKind k) {
    switch (k) {
    case TimeKind::Forward: return "forward";
    case TimeKind::Backward: return "backward";
    case TimeKind::Growth: return "growth";
    }
    return "?";
}

inline Orientation orientation_of(Family f) {
    return (f == Family::FastSub || f == Family::CriticalSub) ? Orientation::Sub : Orientation::Super;
}

inline RegimeTag regime_of(Family f) {
    switch (f) {
    case Family::FastSuper:
    case Family::FastSub: return RegimeTag::Fast;
    case Family::CriticalSuper:
    case Family::CriticalSub: return RegimeTag::Critical;
    case Family::SlowSuper: return RegimeTag::Slow;
    }
    return RegimeTag::Slow;
}

/// Families glued from a collar branch and a core branch at |x| = R - eps.
inline bool has_collar_interface(Family f) {
    return f == Family::FastSuper || f == Family::FastSub || f == Family::CriticalSub;
}

/// Families whose profile has a corner at x = 0.
inline bool has_center_kink(Family f) { return f == Family::CriticalSuper || f == Family::SlowSuper; }

// ---------------------------------------------------------------------------
// Profiles

/// Value and x-derivatives of a spatial profile, plus the branch it came from.
struct ProfileJet {
    double value = 0.0;
    double dx = 0.0;
    double dxx = 0.0;
    bool outer = false;
};

struct ProfileFast {
    double R;
    double eps;
    double b;
};

struct ProfileCriticalLog {
    double R;
    double eps;
    LogInner inner = LogInner::Consistent;
};

namespace detail {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline bool pick_outer(double ax, double R, double eps, Side side) {
    switch (side) {
    case Side::Inner: return false;
    case Side::Outer: return true;
    case Side::Auto: break;
    }
    return ax > R - eps;
}

}  // namespace detail

inline ProfileJet profile_fast_jet(const ProfileFast& prof, double x, Side side = Side::Auto) {
    const double ax = std::abs(x);
    const double R = prof.R, eps = prof.eps, b = prof.b;
    ProfileJet jet;
    jet.outer = detail::pick_outer(ax, R, eps, side);
    if (jet.outer) {
        const double r = R - ax;
        if (r <= 0.0) {
            jet.value = kInfinity;
            jet.dx = detail::sgn(x) * kInfinity;
            jet.dxx = kInfinity;
            return jet;
        }
        jet.value = std::pow(r, -b);
        jet.dx = detail::sgn(x) * b * std::pow(r, -b - 1.0);
        jet.dxx = b * (b + 1.0) * std::pow(r, -b - 2.0);
    } else {
        const double scale = 2.0 * std::pow(eps, b + 1.0);
        jet.value = (2.0 * eps - b * (R - eps) + b * x * x / (R - eps)) / scale;
        jet.dx = 2.0 * b * x / ((R - eps) * scale);
        jet.dxx = 2.0 * b / ((R - eps) * scale);
    }
    return jet;
}

/// Fast-regime profile; +infinity at |x| = R.
inline double profile_fast(const ProfileFast& prof, double x) {
    require(std::abs(x) <= prof.R, ErrorCode::DomainBoundary, "profile_fast needs |x| <= R");
    return profile_fast_jet(prof, x).value;
}

inline ProfileJet profile_critical_log_jet(const ProfileCriticalLog& prof, double x, Side side = Side::Auto) {
    const double ax = std::abs(x);
    const double R = prof.R, eps = prof.eps;
    require(ax < R, ErrorCode::DomainBoundary, "log profile is singular at |x| = R");
    ProfileJet jet;
    jet.outer = detail::pick_outer(ax, R, eps, side);
    if (jet.outer) {
        const double r = R - ax;
        jet.value = std::log(r);
        jet.dx = -detail::sgn(x) / r;
        jet.dxx = -1.0 / (r * r);
    } else {
        const double k = 2.0 * eps * (R - eps);
        const double quad = prof.inner == LogInner::Consistent ? (R - eps) * (R - eps) - x * x
                                                               : x * x - (R - eps) * (R - eps);
        const double s = prof.inner == LogInner::Consistent ? -1.0 : 1.0;
        jet.value = (quad + std::log(eps) * k) / k;
        jet.dx = s * 2.0 * x / k;
        jet.dxx = s * 2.0 / k;
    }
    return jet;
}

inline double profile_critical_log(const ProfileCriticalLog& prof, double x) {
    return profile_critical_log_jet(prof, x).value;
}

// ---------------------------------------------------------------------------
// Time factors

/// Forward:  zeta = (T+t)^{-alpha}, eta = (T+t)^{-beta},  t >= 0.
/// Backward: zeta = (T-t)^{-alpha}, eta = (T-t)^{beta},   0 <= t < T.
/// Growth:   zeta = (T+t)^{alpha},  eta = 1.
struct TimeFactors {
    TimeKind kind = TimeKind::Forward;
    double alpha = 0.0;
    double beta = 0.0;
    double T = 1.0;

    double base(double t) const {
        const double s = kind == TimeKind::Backward ? T - t : T + t;
        require(s > 0.0, ErrorCode::TimeOutOfDomain,
                "t=" + std::to_string(t) + " outside the time-factor domain (T=" + std::to_string(T) + ")");
        return s;
    }

    double zeta(double t) const {
        const double s = base(t);
        return kind == TimeKind::Growth ? std::pow(s, alpha) : std::pow(s, -alpha);
    }

    double dzeta(double t) const {
        const double s = base(t);
        switch (kind) {
        case TimeKind::Forward: return -alpha * std::pow(s, -alpha - 1.0);
        case TimeKind::Backward: return alpha * std::pow(s, -alpha - 1.0);
        case TimeKind::Growth: return alpha * std::pow(s, alpha - 1.0);
        }
        return 0.0;
    }

    double eta(double t) const {
        const double s = base(t);
        switch (kind) {
        case TimeKind::Forward: return std::pow(s, -beta);
        case TimeKind::Backward: return std::pow(s, beta);
        case TimeKind::Growth: return 1.0;
        }
        return 1.0;
    }

    double deta(double t) const {
        const double s = base(t);
        switch (kind) {
        case TimeKind::Forward: return -beta * std::pow(s, -beta - 1.0);
        case TimeKind::Backward: return -beta * std::pow(s, beta - 1.0);
        case TimeKind::Growth: return 0.0;
        }
        return 0.0;
    }

    /// Upper end of the admissible time window.
    double t_max() const { return kind == TimeKind::Backward ? T : kInfinity; }
};

// ---------------------------------------------------------------------------
// Barrier specification

struct BarrierSpec {
    Family family = Family::FastSuper;
    double C = 1.0;
    double a = 1.0;
    double m = 2.0;
    double p = 2.0;
    double eps = 0.0;        // collar width, glued families
    double delta_exp = 1.0;  // power profile exponent, critical super
    double d_exp = 0.5;      // slow family exponent
    int bracket_sign = 1;    // +1 or -1 multiplying 1/(m-1)
    LogInner log_inner = LogInner::Consistent;
    TimeFactors time;

    Orientation orientation() const { return orientation_of(family); }
    RegimeTag regime() const { return regime_of(family); }
    double T() const { return time.T; }
    double exponent() const { return double(bracket_sign) / (m - 1.0); }
};

/// Time factors the barrier families are built with: forward decay for the
/// global-existence supersolutions, backward concentration for the blow-up
/// subsolutions, and (T+t)^alpha growth for the slow family.
inline TimeFactors default_time_factors(Family family, double m, double p, double T, double slow_alpha = 0.0) {
    const double alpha = 1.0 / (p - 1.0);
    switch (family) {
    case Family::FastSuper:
    case Family::CriticalSuper: return {TimeKind::Forward, alpha, (p - m) / (p - 1.0), T};
    case Family::FastSub:
    case Family::CriticalSub: return {TimeKind::Backward, alpha, (m - p) / (p - 1.0), T};
    case Family::SlowSuper: return {TimeKind::Growth, slow_alpha, 0.0, T};
    }
    return {};
}

inline int default_bracket_sign(Family family) { return family == Family::FastSuper ? -1 : 1; }

inline BarrierSpec make_barrier(Family family, double m, double p, double C, double a, double T,
                                double eps = 0.0) {
    BarrierSpec spec;
    spec.family = family;
    spec.m = m;
    spec.p = p;
    spec.C = C;
    spec.a = a;
    spec.eps = eps;
    spec.bracket_sign = default_bracket_sign(family);
    spec.time = default_time_factors(family, m, p, T);
    return spec;
}

inline void validate(const BarrierSpec& spec, const DensitySpec& density) {
    require(spec.m > 1.0 && spec.p > 1.0, ErrorCode::InvalidArgument, "barrier needs m > 1 and p > 1");
    require(spec.C >= 0.0 && std::isfinite(spec.C), ErrorCode::InvalidArgument, "barrier needs C >= 0");
    require(spec.time.T > 0.0, ErrorCode::InvalidArgument, "barrier needs T > 0");
    require(spec.bracket_sign == 1 || spec.bracket_sign == -1, ErrorCode::InvalidArgument,
            "bracket sign must be +1 or -1");
    const double R = density.R();
    const RegimeTag want = density.regime().tag;
    require(spec.regime() == want, ErrorCode::InvalidArgument,
            to_string(spec.family) + " barrier does not match the " + to_string(want) + " density");
    if (spec.family != Family::SlowSuper)
        require(spec.a > 0.0, ErrorCode::InvalidArgument, "barrier needs a > 0");
    if (has_collar_interface(spec.family))
        require(spec.eps > 0.0 && spec.eps < R, ErrorCode::InvalidArgument, "collar width needs 0 < eps < R");
    if (spec.family == Family::FastSub) {
        const double b = density.q() - 2.0;
        require(spec.eps < b * R / (b + 2.0), ErrorCode::EpsilonTooLarge,
                "fast subsolution needs eps < bR/(b+2)");
    }
    if (spec.family == Family::CriticalSuper)
        require(spec.delta_exp > 0.0, ErrorCode::InvalidArgument, "power profile needs delta > 0");
    if (spec.family == Family::SlowSuper) {
        const double dmax = std::min(2.0 - density.q(), 1.0);
        require(spec.d_exp > 0.0 && spec.d_exp < dmax, ErrorCode::InvalidArgument,
                "slow family needs 0 < d < min{2-q, 1}");
    }
}

/// Spatial profile of a bracketed family, with derivatives in x.
inline ProfileJet barrier_profile(const BarrierSpec& spec, const DensitySpec& density, double x,
                                  Side side = Side::Auto) {
    const double R = density.R();
    switch (spec.family) {
    case Family::FastSuper:
    case Family::FastSub:
        return profile_fast_jet({R, spec.eps, density.q() - 2.0}, x, side);
    case Family::CriticalSub:
        return profile_critical_log_jet({R, spec.eps, spec.log_inner}, x, side);
    case Family::CriticalSuper: {
        const double r = R - std::abs(x);
        const double dl = spec.delta_exp;
        ProfileJet jet;
        jet.outer = true;
        if (r <= 0.0) {
            jet.value = kInfinity;
            return jet;
        }
        jet.value = std::pow(r, -dl);
        jet.dx = detail::sgn(x) * dl * std::pow(r, -dl - 1.0);
        jet.dxx = dl * (dl + 1.0) * std::pow(r, -dl - 2.0);
        return jet;
    }
    case Family::SlowSuper: break;
    }
    throw Error(ErrorCode::InvalidArgument, "slow family has no bracket profile");
}

/// 1 - s(x) eta(t) / a for bracketed families.
inline double barrier_bracket(const BarrierSpec& spec, const DensitySpec& density, double x, double t,
                              Side side = Side::Auto) {
    const double s = barrier_profile(spec, density, x, side).value;
    const double eta = spec.time.eta(t);
    if (std::isinf(s)) return s > 0 ? -kInfinity : kInfinity;
    return 1.0 - s * eta / spec.a;
}

/// Barrier value; +infinity is the sentinel for "no constraint" when the
/// negative bracket exponent meets a vanishing bracket.
inline double eval_barrier(const BarrierSpec& spec, const DensitySpec& density, double x, double t) {
    const double R = density.R();
    const double ax = std::abs(x);
    require(ax <= R, ErrorCode::DomainBoundary, "barrier evaluated outside [-R, R]");
    const double zeta = spec.time.zeta(t);
    if (spec.family == Family::SlowSuper) {
        if (spec.C == 0.0) return 0.0;
        return spec.C * zeta * std::pow(R - ax, spec.d_exp / spec.m);
    }
    double bracket;
    if (ax == R) {
        // fast and power profiles diverge to +inf, the log profile to -inf
        bracket = spec.family == Family::CriticalSub ? kInfinity : -kInfinity;
    } else {
        bracket = barrier_bracket(spec, density, x, t);
    }
    if (spec.C == 0.0) return 0.0;
    if (bracket <= 0.0) return spec.bracket_sign > 0 ? 0.0 : kInfinity;
    if (std::isinf(bracket)) return spec.bracket_sign > 0 ? kInfinity : 0.0;
    return spec.C * zeta * std::pow(bracket, spec.exponent());
}

/// Closed-form derivatives of w on one smooth branch.
struct BarrierJet {
    double w = 0.0;
    double w_t = 0.0;
    double wm_x = 0.0;   // (w^m)_x
    double wm_xx = 0.0;  // (w^m)_xx
    double bracket = 1.0;
    bool outer = false;
};

/// Derivatives from one differentiation of C zeta B^k with B = 1 - s eta / a,
/// shared by all bracketed families and both bracket signs:
///   w_t     = C zeta' B^k - C zeta k B^{k-1} s eta' / a
///   (w^m)_x = -C^m zeta^m (mk) B^{mk-1} s_x eta / a
///   (w^m)_xx = C^m zeta^m (mk) [ (mk-1) B^{mk-2} (s_x eta/a)^2 - B^{mk-1} s_xx eta / a ]
inline BarrierJet barrier_derivatives(const BarrierSpec& spec, const DensitySpec& density, double x, double t,
                                      Side side = Side::Auto) {
    const double R = density.R();
    const double ax = std::abs(x);
    require(ax < R, ErrorCode::DomainBoundary, "derivatives need |x| < R");
    if (side == Side::Auto) {
        if (has_collar_interface(spec.family))
            require(ax != R - spec.eps, ErrorCode::OnBranchInterface,
                    "x sits on the gluing interface; pass an explicit side");
        if (has_center_kink(spec.family))
            require(x != 0.0, ErrorCode::OnBranchInterface, "profile has a corner at x = 0");
    }
    const double m = spec.m;
    const double C = spec.C;
    const double zeta = spec.time.zeta(t);
    const double dzeta = spec.time.dzeta(t);
    const double Cm_zm = std::pow(C, m) * std::pow(zeta, m);
    BarrierJet jet;

    if (spec.family == Family::SlowSuper) {
        const double d = spec.d_exp;
        const double r = R - ax;
        jet.w = C * zeta * std::pow(r, d / m);
        jet.w_t = C * dzeta * std::pow(r, d / m);
        jet.wm_x = -detail::sgn(x) * Cm_zm * d * std::pow(r, d - 1.0);
        jet.wm_xx = Cm_zm * d * (d - 1.0) * std::pow(r, d - 2.0);
        jet.bracket = 1.0;
        jet.outer = ax > R - spec.eps;
        return jet;
    }

    const ProfileJet prof = barrier_profile(spec, density, x, side);
    const double eta = spec.time.eta(t);
    const double deta = spec.time.deta(t);
    const double a = spec.a;
    const double B = 1.0 - prof.value * eta / a;
    jet.bracket = B;
    jet.outer = prof.outer;
    require(B > 0.0, ErrorCode::BracketNonpositive, "bracket is nonpositive at x=" + std::to_string(x));
    const double k = spec.exponent();
    const double mk = m * k;
    const double g = prof.dx * eta / a;
    jet.w = C * zeta * std::pow(B, k);
    jet.w_t = C * dzeta * std::pow(B, k) - C * zeta * k * std::pow(B, k - 1.0) * prof.value * deta / a;
    jet.wm_x = -Cm_zm * mk * std::pow(B, mk - 1.0) * g;
    jet.wm_xx = Cm_zm * mk *
                ((mk - 1.0) * std::pow(B, mk - 2.0) * g * g - std::pow(B, mk - 1.0) * prof.dxx * eta / a);
    return jet;
}

}  // namespace wpme
