#pragma once

// Constructive parameter search for the barrier families. Each system is a
// list of scalar inequalities in (C, a, T, omega = C^{m-1}/a); the search moves
// omega into its admissible window and then rescales C, a, T geometrically,
// and the report carries every inequality with its left side, right side and
// signed slack.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wpme/barrier.hpp"
#include "wpme/density.hpp"
#include "wpme/error.hpp"

namespace wpme {

struct ProblemExponents {
    double m = 2.0;
    double p = 2.0;
};

inline void validate(const ProblemExponents& e) {
    require(std::isfinite(e.m) && std::isfinite(e.p), ErrorCode::InvalidArgument, "exponents must be finite");
    require(e.m > 1.0 && e.p > 1.0, ErrorCode::InvalidArgument, "need m > 1 and p > 1");
}

/// One inequality. `margin >= 0` means satisfied.
struct Check {
    std::string id;
    std::string relation;  // ">=" or "<="
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;

    static Check ge(std::string id, double lhs, double rhs) { return {std::move(id), ">=", lhs, rhs, lhs - rhs}; }
    static Check le(std::string id, double lhs, double rhs) { return {std::move(id), "<=", lhs, rhs, rhs - lhs}; }
    bool ok() const { return margin >= 0.0 && std::isfinite(margin); }
};

enum class BlowupCase { PgtM, PltM, PeqM };
enum class SlowSignMode { Corrected, Literal };

inline std::string to_string(BlowupCase c) {
    switch (c) {
    case BlowupCase::PgtM: return "p>m";
    case BlowupCase::PltM: return "p<m";
    case BlowupCase::PeqM: return "p=m";
    }
    return "?";
}

inline std::string to_string(SlowSignMode s) { return s == SlowSignMode::Corrected ? "corrected" : "literal"; }

inline BlowupCase blowup_case_of(double m, double p) {
    if (p > m) return BlowupCase::PgtM;
    if (p < m) return BlowupCase::PltM;
    return BlowupCase::PeqM;
}

struct FeasibilityReport {
    std::string system;
    BarrierSpec barrier;
    double omega = 0.0;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> extras;  // window bounds, collar bounds, ...
    std::vector<std::string> notes;
    bool feasible = false;

    double extra(const std::string& key, double fallback = std::nan("")) const {
        for (const auto& kv : extras)
            if (kv.first == key) return kv.second;
        return fallback;
    }

    const Check* find(const std::string& id) const {
        for (const auto& c : checks)
            if (c.id == id) return &c;
        return nullptr;
    }

    /// The tightest inequality (smallest margin), nullptr if there are none.
    const Check* tightest() const {
        const Check* best = nullptr;
        for (const auto& c : checks)
            if (!best || c.margin < best->margin) best = &c;
        return best;
    }

    void finalize() {
        feasible = !checks.empty();
        for (const auto& c : checks) feasible = feasible && c.ok();
    }

    /// Chosen parameters as name/value pairs, family-specific ones only when used.
    std::vector<std::pair<std::string, double>> params() const {
        std::vector<std::pair<std::string, double>> out{{"C", barrier.C}};
        if (barrier.family != Family::SlowSuper) {
            out.emplace_back("a", barrier.a);
            out.emplace_back("omega", omega);
        }
        out.emplace_back("T", barrier.time.T);
        out.emplace_back("alpha", barrier.time.alpha);
        out.emplace_back("beta", barrier.time.beta);
        if (has_collar_interface(barrier.family)) out.emplace_back("eps", barrier.eps);
        if (barrier.family == Family::CriticalSuper) out.emplace_back("delta_exp", barrier.delta_exp);
        if (barrier.family == Family::SlowSuper) out.emplace_back("d_exp", barrier.d_exp);
        return out;
    }
};

inline const FeasibilityReport& require_feasible(const FeasibilityReport& r) {
    if (!r.feasible) {
        const Check* t = r.tightest();
        throw Error(ErrorCode::NoFeasiblePoint,
                    r.system + ": no feasible point" + (t ? " (tightest: " + t->id + ")" : std::string()));
    }
    return r;
}

/// K(m,p) = theta^{(m-1)/(p-1)} - theta^{(p+m-2)/(p-1)} with theta = (m-1)/(p+m-2).
inline double peak_coefficient(double m, double p) {
    const double theta = (m - 1.0) / (p + m - 2.0);
    const double K = std::pow(theta, (m - 1.0) / (p - 1.0)) - std::pow(theta, (p + m - 2.0) / (p - 1.0));
    require(K > 0.0, ErrorCode::InvalidArgument, "peak coefficient K must be positive");
    return K;
}

namespace detail {

inline constexpr int kMaxStages = 200;

inline bool all_ok(const std::vector<Check>& checks, std::initializer_list<const char*> ids) {
    for (const char* id : ids) {
        bool found = false;
        for (const auto& c : checks) {
            if (c.id == id) {
                found = true;
                if (!(c.margin > 0.0)) return false;
            }
        }
        if (!found) return false;
    }
    return true;
}

inline double omega_of(double C, double a, double m) { return std::pow(C, m - 1.0) / a; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Fast decay, global existence (p > m)

struct FastGlobalWindow {
    double eps;
    double omega_lo;
    double omega_hi;
};

/// Admissible omega interval for a collar width: the collar-gradient bound gives
/// the upper end, the two endpoint conditions in the C -> 0, T -> inf limit
/// give the lower end.
inline FastGlobalWindow fast_global_window(const ProblemExponents& e, const DensitySpec& density, double eps) {
    const double m = e.m, p = e.p;
    const double b = density.q() - 2.0;
    const double R = density.R();
    const double c1 = density.c1(), c2 = density.c2();
    const auto rho = uniform_bounds(density, eps);
    const double beta = (p - m) / (p - 1.0);
    const double z1 = m * b / (m - 1.0) * ((b * m / (m - 1.0) + 1.0) / c2 - b / (c1 * (m - 1.0)));
    const double z2 = m * b * std::pow(eps, -b - 1.0) / ((m - 1.0) * rho.hi * (R - eps));
    FastGlobalWindow w;
    w.eps = eps;
    w.omega_hi = beta * (m - 1.0) * c1 / (m * b * b);
    w.omega_lo = std::max(1.0 / ((p - 1.0) * z1), 1.0 / ((p - 1.0) * z2));
    return w;
}

inline std::vector<Check> fast_global_checks(const ProblemExponents& e, const DensitySpec& density, double eps,
                                             double C, double a, double T) {
    const double m = e.m, p = e.p;
    const double b = density.q() - 2.0;
    const double R = density.R();
    const double c1 = density.c1(), c2 = density.c2();
    const auto rho = uniform_bounds(density, eps);
    const double beta = (p - m) / (p - 1.0);
    const double w = detail::omega_of(C, a, m);
    const double Tb = std::pow(T, beta);
    const double rhs_react = std::pow(C, p - 1.0) + 1.0 / (p - 1.0);
    std::vector<Check> out;
    out.push_back(Check::le("kbound", c2 / c1, m + (m - 1.0) / b));
    out.push_back(Check::ge(
        "eta-bound", Tb,
        std::pow(eps, -b) / a * std::max(1.0, rho.hi / rho.lo * b / (m - 1.0) * (R - eps) / eps)));
    out.push_back(Check::ge("collar-gradient", beta, w * m / (m - 1.0) * b * b / c1));
    out.push_back(Check::ge("collar-endpoint",
                            w * m / (m - 1.0) * b * ((b * m / (m - 1.0) + 1.0) / c2 - b / (c1 * (m - 1.0))),
                            rhs_react));
    out.push_back(Check::ge("core-gradient", beta * Tb,
                            w * m / (m - 1.0) * b * b / rho.lo * std::pow(eps, -2.0 * b - 2.0) / a));
    out.push_back(Check::ge("core-endpoint",
                            w * m / (m - 1.0) * b * std::pow(eps, -b - 1.0) *
                                (1.0 / (rho.hi * (R - eps)) -
                                 b * std::pow(eps, -b - 1.0) / (a * rho.lo * (m - 1.0)) / Tb),
                            rhs_react));
    return out;
}

struct FastGlobalOptions {
    std::optional<double> eps;   // collar width; scanned when absent
    double eps_scan_step = 0.05; // in units of R
    int bracket_sign = 1;
};

inline FeasibilityReport feasible_fast_global(const ProblemExponents& e, const DensitySpec& density,
                                              const FastGlobalOptions& opt = {}) {
    validate(e);
    const double m = e.m, p = e.p;
    require(density.regime().tag == RegimeTag::Fast, ErrorCode::InvalidArgument, "fast system needs q > 2");
    require(p > m, ErrorCode::InvalidArgument, "fast global system needs p > m");
    const double b = density.q() - 2.0;
    const double R = density.R();
    require(density.c2() / density.c1() < m + (m - 1.0) / b, ErrorCode::KBoundViolated,
            "c2/c1 = " + std::to_string(density.c2() / density.c1()) + " violates c2/c1 < m + (m-1)/b");

    FeasibilityReport rep;
    rep.system = "fast-global";

    FastGlobalWindow win{};
    if (opt.eps) {
        require(*opt.eps > 0.0 && *opt.eps < R, ErrorCode::InvalidArgument, "collar width needs 0 < eps < R");
        win = fast_global_window(e, density, *opt.eps);
    } else {
        bool have = false;
        double best_ratio = 0.0;
        for (int k = 1; k * opt.eps_scan_step < 1.0 - 1e-12; ++k) {
            const auto cand = fast_global_window(e, density, k * opt.eps_scan_step * R);
            const double ratio = cand.omega_hi / cand.omega_lo;
            if (!have || ratio > best_ratio) {
                win = cand;
                best_ratio = ratio;
                have = true;
            }
        }
        rep.notes.push_back("collar width chosen by scan over eps/R in steps of " +
                            std::to_string(opt.eps_scan_step) + " (widest omega window)");
    }
    const double eps = win.eps;
    rep.extras = {{"omega_lo", win.omega_lo}, {"omega_hi", win.omega_hi}};

    const double omega = win.omega_hi > win.omega_lo ? 0.5 * (win.omega_lo + win.omega_hi) : win.omega_hi;
    double C = 1.0;
    double T = 1.0;
    auto a_of = [&](double c) { return std::pow(c, m - 1.0) / omega; };
    // shrink C until both endpoint conditions hold in the T -> inf limit
    for (int s = 0; s < detail::kMaxStages; ++s) {
        auto ch = fast_global_checks(e, density, eps, C, a_of(C), 1e300);
        if (detail::all_ok(ch, {"collar-endpoint", "core-endpoint"})) break;
        C *= 0.5;
    }
    for (int s = 0; s < detail::kMaxStages; ++s) {
        auto ch = fast_global_checks(e, density, eps, C, a_of(C), T);
        if (detail::all_ok(ch, {"eta-bound", "core-gradient", "core-endpoint"})) break;
        T *= 2.0;
    }
    rep.barrier = make_barrier(Family::FastSuper, m, p, C, a_of(C), T, eps);
    rep.barrier.bracket_sign = opt.bracket_sign;
    rep.omega = detail::omega_of(C, rep.barrier.a, m);
    rep.checks = fast_global_checks(e, density, eps, C, rep.barrier.a, T);
    const auto rho = uniform_bounds(density, eps);
    rep.extras.emplace_back("rho1", rho.lo);
    rep.extras.emplace_back("rho2", rho.hi);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Fast decay, blow-up (all p, m)

struct BlowupCoefficients {
    double sigma;   // collar
    double lambda;  // collar
    double sigma0;  // core
    double lambda0; // core
};

/// Reduced coefficients of the concave bracket polynomial for the fast
/// subsolution with zeta = (T-t)^{-1/(p-1)}, eta = (T-t)^{(m-p)/(p-1)}.
inline BlowupCoefficients fast_blowup_coefficients(const ProblemExponents& e, const DensitySpec& density, double eps,
                                                   double omega) {
    const double m = e.m, p = e.p;
    const double b = density.q() - 2.0;
    const double R = density.R();
    const double c1 = density.c1(), c2 = density.c2();
    const auto rho = uniform_bounds(density, eps);
    const double core = std::pow(eps, -b - 1.0) / (R - eps);
    const double base_l = (p - m) / ((m - 1.0) * (p - 1.0));
    BlowupCoefficients k;
    k.sigma = 1.0 / (m - 1.0) + omega * m / (m - 1.0) * b / c1 * (b * m / (m - 1.0) + 1.0);
    k.lambda = base_l + omega * m / ((m - 1.0) * (m - 1.0)) * b * b / c2;
    k.sigma0 = 1.0 / (m - 1.0) + omega * m * (m + 1.0) / ((m - 1.0) * (m - 1.0)) * b / rho.lo * core;
    k.lambda0 = base_l + omega * m / ((m - 1.0) * (m - 1.0)) * 2.0 * b / rho.hi * core;
    return k;
}

/// Omega threshold for p < m, above which both lambda coefficients are positive.
inline double fast_blowup_omega_threshold(const ProblemExponents& e, const DensitySpec& density, double eps) {
    const double m = e.m, p = e.p;
    const double b = density.q() - 2.0;
    const double R = density.R();
    const auto rho = uniform_bounds(density, eps);
    return (m - p) * (m - 1.0) / (b * (p - 1.0) * m) *
           std::max(density.c2() / b, (R - eps) * rho.hi / (2.0 * std::pow(eps, -b - 1.0)));
}

inline std::vector<Check> fast_blowup_checks(const ProblemExponents& e, const DensitySpec& density, double eps,
                                             double C, double a) {
    const double m = e.m, p = e.p;
    const double b = density.q() - 2.0;
    const double R = density.R();
    const double w = detail::omega_of(C, a, m);
    const double K = peak_coefficient(m, p);
    const double ex = (p + m - 2.0) / (p - 1.0);
    const auto k = fast_blowup_coefficients(e, density, eps, w);
    const double Cm1 = std::pow(C, m - 1.0);
    const double react = (p + m - 2.0) * std::pow(C, p - 1.0);
    std::vector<Check> out;
    out.push_back(Check::le("collar-width", eps, b * R / (b + 2.0)));
    out.push_back(Check::le("collar-peak", K * std::pow(k.sigma, ex), k.lambda * Cm1));
    out.push_back(Check::le("collar-vertex", (m - 1.0) * k.sigma, react));
    out.push_back(Check::le("core-peak", K * std::pow(k.sigma0, ex), k.lambda0 * Cm1));
    out.push_back(Check::le("core-vertex", (m - 1.0) * k.sigma0, react));
    if (p < m) out.push_back(Check::ge("omega-threshold", w, fast_blowup_omega_threshold(e, density, eps)));
    return out;
}

inline double default_fast_blowup_eps(const DensitySpec& density) {
    const double b = density.q() - 2.0;
    return 0.9 * b * density.R() / (b + 2.0);
}

inline FeasibilityReport feasible_fast_blowup(const ProblemExponents& e, const DensitySpec& density,
                                              std::optional<double> eps_opt = std::nullopt,
                                              std::optional<BlowupCase> case_opt = std::nullopt) {
    validate(e);
    const double m = e.m, p = e.p;
    require(density.regime().tag == RegimeTag::Fast, ErrorCode::InvalidArgument, "fast system needs q > 2");
    const double b = density.q() - 2.0;
    const double R = density.R();
    const double eps = eps_opt ? *eps_opt : default_fast_blowup_eps(density);
    require(eps > 0.0, ErrorCode::InvalidArgument, "collar width must be positive");
    require(eps < b * R / (b + 2.0), ErrorCode::EpsilonTooLarge,
            "eps=" + std::to_string(eps) + " must be below bR/(b+2)=" + std::to_string(b * R / (b + 2.0)));
    const BlowupCase bc = blowup_case_of(m, p);
    if (case_opt)
        require(*case_opt == bc, ErrorCode::InvalidArgument,
                "case " + to_string(*case_opt) + " inconsistent with m=" + std::to_string(m) +
                    ", p=" + std::to_string(p));

    FeasibilityReport rep;
    rep.system = "fast-blowup(" + to_string(bc) + ")";
    const double T = 1.0;
    double C = 1.0, a = 1.0, omega = 1.0;
    auto ok = [&](double c, double aa) {
        const auto ch = fast_blowup_checks(e, density, eps, c, aa);
        for (const auto& x : ch)
            if (!(x.margin > 0.0)) return false;
        return true;
    };
    if (bc == BlowupCase::PgtM) {
        // fixed omega, grow C
        for (int s = 0; s < detail::kMaxStages && !ok(C, std::pow(C, m - 1.0) / omega); ++s) C *= 2.0;
        a = std::pow(C, m - 1.0) / omega;
    } else {
        if (bc == BlowupCase::PltM) {
            const double thr = fast_blowup_omega_threshold(e, density, eps);
            omega = 2.0 * thr;
            rep.extras.emplace_back("omega_threshold", thr);
        }
        // fixed omega, grow a (C follows)
        auto C_of = [&](double aa) { return std::pow(aa * omega, 1.0 / (m - 1.0)); };
        for (int s = 0; s < detail::kMaxStages && !ok(C_of(a), a); ++s) a *= 2.0;
        C = C_of(a);
    }
    rep.barrier = make_barrier(Family::FastSub, m, p, C, a, T, eps);
    rep.omega = detail::omega_of(C, a, m);
    rep.checks = fast_blowup_checks(e, density, eps, C, a);
    const auto rho = uniform_bounds(density, eps);
    rep.extras.emplace_back("rho1", rho.lo);
    rep.extras.emplace_back("rho2", rho.hi);
    rep.extras.emplace_back("K", peak_coefficient(m, p));
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Critical decay, global existence (p > m)

struct CriticalGlobalOptions {
    double delta_exp = 1.0;
    double horizon = 5.0;   // time span over which the front-gradient bound is enforced
    double support_margin = 1.5;
};

inline std::vector<Check> critical_global_checks(const ProblemExponents& e, const DensitySpec& density,
                                                 double delta, double C, double a, double T, double horizon) {
    const double m = e.m, p = e.p;
    const double R = density.R();
    const double c2 = density.c2();
    const double k1 = global_sandwich(density).lo;
    const double beta = (p - m) / (p - 1.0);
    const double w = detail::omega_of(C, a, m);
    std::vector<Check> out;
    out.push_back(Check::ge("eta-nonincreasing", beta, 0.0));
    out.push_back(Check::ge("endpoint", w * delta * (delta + 1.0) / c2 * m / (m - 1.0) * std::pow(R, -delta),
                            std::pow(C, p - 1.0) + 1.0 / (p - 1.0)));
    out.push_back(Check::ge("front-gradient", beta,
                            std::pow(C, m - 1.0) * std::pow(T + horizon, beta) * m * delta * delta /
                                ((m - 1.0) * k1)));
    out.push_back(Check::ge("support", a * std::pow(T, beta), std::pow(R, -delta)));
    return out;
}

inline FeasibilityReport feasible_critical_global(const ProblemExponents& e, const DensitySpec& density,
                                                  const CriticalGlobalOptions& opt = {}) {
    validate(e);
    const double m = e.m, p = e.p;
    require(density.regime().tag == RegimeTag::Critical, ErrorCode::InvalidArgument,
            "critical system needs q = 2");
    require(p > m, ErrorCode::InvalidArgument, "critical global system needs p > m");
    require(opt.delta_exp > 0.0, ErrorCode::InvalidArgument, "delta must be positive");
    require(opt.horizon >= 0.0, ErrorCode::InvalidArgument, "horizon must be nonnegative");
    const double delta = opt.delta_exp;
    const double R = density.R();
    const double c2 = density.c2();
    const double k1 = global_sandwich(density).lo;
    const double beta = (p - m) / (p - 1.0);
    const double kappa = opt.support_margin;

    FeasibilityReport rep;
    rep.system = "critical-global";
    const double lo = c2 * (m - 1.0) * std::pow(R, delta) / ((p - 1.0) * m * delta * (delta + 1.0));
    const double hi = beta * (m - 1.0) * k1 * std::pow(R, delta) / (m * delta * delta * kappa);
    rep.extras = {{"omega_lo", lo}, {"omega_hi", hi}, {"horizon", opt.horizon}};
    const double omega = hi > lo ? 0.5 * (lo + hi) : hi;
    if (!(hi > lo)) rep.notes.push_back("omega window is empty; search continues at its upper end");

    double C = 1.0;
    auto a_of = [&](double c) { return std::pow(c, m - 1.0) / omega; };
    auto T_of = [&](double aa) { return std::pow(kappa * std::pow(R, -delta) / aa, 1.0 / beta) * (1.0 + 1e-9); };
    for (int s = 0; s < detail::kMaxStages; ++s) {
        const double a = a_of(C);
        const auto ch = critical_global_checks(e, density, delta, C, a, T_of(a), opt.horizon);
        bool all = true;
        for (const auto& x : ch) all = all && x.margin > 0.0;
        if (all) break;
        C *= 0.5;
    }
    const double a = a_of(C);
    const double T = T_of(a);
    rep.barrier = make_barrier(Family::CriticalSuper, m, p, C, a, T);
    rep.barrier.delta_exp = delta;
    rep.omega = detail::omega_of(C, a, m);
    rep.checks = critical_global_checks(e, density, delta, C, a, T, opt.horizon);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Critical decay, blow-up (p > m)

inline std::vector<Check> critical_blowup_checks(const ProblemExponents& e, const DensitySpec& density, double eps,
                                                 double C, double a) {
    const double m = e.m, p = e.p;
    const double R = density.R();
    const double c2 = density.c2();
    const auto rho = uniform_bounds(density, eps);
    const double w = detail::omega_of(C, a, m);
    const double K = peak_coefficient(m, p);
    const double ex = (p + m - 2.0) / (p - 1.0);
    const double sigma = (1.0 - w * m / c2) / (m - 1.0);
    const double sigma0 = (1.0 - w * m / (rho.hi * eps * (R - eps))) / (m - 1.0);
    const double lambda = (p - m) / ((m - 1.0) * (p - 1.0));
    const double Cm1 = std::pow(C, m - 1.0);
    const double react = (p + m - 2.0) * std::pow(C, p - 1.0);
    std::vector<Check> out;
    out.push_back(Check::ge("collar-sigma-positive", sigma, 0.0));
    out.push_back(Check::ge("core-sigma-positive", sigma0, 0.0));
    out.push_back(Check::le("vertex", (m - 1.0) * std::max(sigma, sigma0), react));
    out.push_back(Check::le("peak", K * std::pow(std::max(sigma, sigma0), ex), lambda * Cm1));
    return out;
}

inline FeasibilityReport feasible_critical_blowup(const ProblemExponents& e, const DensitySpec& density,
                                                  std::optional<double> eps_opt = std::nullopt) {
    validate(e);
    const double m = e.m, p = e.p;
    require(density.regime().tag == RegimeTag::Critical, ErrorCode::InvalidArgument,
            "critical system needs q = 2");
    require(p > m, ErrorCode::InvalidArgument, "critical blow-up system needs p > m");
    const double R = density.R();
    const double eps = eps_opt ? *eps_opt : 0.25 * R;
    require(eps > 0.0 && eps < R, ErrorCode::InvalidArgument, "collar width needs 0 < eps < R");
    const auto rho = uniform_bounds(density, eps);

    FeasibilityReport rep;
    rep.system = "critical-blowup";
    const double omega1 = std::min(density.c2() / m, rho.hi * eps * (R - eps) / m);
    const double omega = 0.5 * omega1;
    rep.extras = {{"omega_hi", omega1}, {"rho2", rho.hi}, {"K", peak_coefficient(m, p)}};
    double C = 1.0;
    auto a_of = [&](double c) { return std::pow(c, m - 1.0) / omega; };
    for (int s = 0; s < detail::kMaxStages; ++s) {
        const auto ch = critical_blowup_checks(e, density, eps, C, a_of(C));
        bool all = true;
        for (const auto& x : ch) all = all && x.margin > 0.0;
        if (all) break;
        C *= 2.0;
    }
    rep.barrier = make_barrier(Family::CriticalSub, m, p, C, a_of(C), 1.0, eps);
    rep.omega = detail::omega_of(C, rep.barrier.a, m);
    rep.checks = critical_blowup_checks(e, density, eps, C, rep.barrier.a);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Slow decay, global existence (p != m)

/// Lower bound of (R-|x|)^{d-2}/rho used by the slow system.
inline double slow_delta(const DensitySpec& density) {
    const double R = density.R();
    return std::min(1.0 / density.c2(), std::pow(R, 1.0 - density.q()) / density.c2());
}

inline std::vector<Check> slow_checks(const ProblemExponents& e, const DensitySpec& density, double d, double C,
                                      double alpha, double T, SlowSignMode mode) {
    const double m = e.m, p = e.p;
    const double R = density.R();
    const double dd = mode == SlowSignMode::Corrected ? d * (1.0 - d) : d * (d - 1.0);
    const double ds = slow_delta(density);
    std::vector<Check> out;
    out.push_back(Check::ge("d-positive", d, 0.0));
    out.push_back(Check::le("d-bound", d, std::min(2.0 - density.q(), 1.0)));
    if (p < m) {
        out.push_back(Check::ge("alpha-positive", alpha, 0.0));
        out.push_back(Check::ge("T-above-one", T, 1.0));
        out.push_back(Check::ge("diffusion-dominates", dd * ds * std::pow(C, m) * std::pow(T, alpha * (m - p)),
                                std::pow(R, p * d / m) * std::pow(C, p)));
    } else {
        out.push_back(Check::le("alpha-zero", std::abs(alpha), 0.0));
        out.push_back(Check::ge("diffusion-dominates", dd * ds * std::pow(C, m), std::pow(R, p * d / m) * std::pow(C, p)));
    }
    return out;
}

struct SlowOptions {
    SlowSignMode sign_mode = SlowSignMode::Corrected;
    std::optional<double> d_exp;
};

inline FeasibilityReport feasible_slow(const ProblemExponents& e, const DensitySpec& density,
                                       const SlowOptions& opt = {}) {
    validate(e);
    const double m = e.m, p = e.p;
    require(density.regime().tag == RegimeTag::Slow, ErrorCode::InvalidArgument, "slow system needs q < 2");
    require(p != m, ErrorCode::PeqMUnsupported, "slow-regime system excludes p = m");
    const double dmax = std::min(2.0 - density.q(), 1.0);
    const double d = opt.d_exp ? *opt.d_exp : 0.5 * dmax;
    require(d > 0.0 && d < dmax, ErrorCode::InvalidArgument, "d must satisfy 0 < d < min{2-q, 1}");

    FeasibilityReport rep;
    rep.system = "slow(" + to_string(opt.sign_mode) + ")";
    rep.extras = {{"delta_s", slow_delta(density)}};
    const double alpha = p < m ? 1.0 : 0.0;
    const double T = p < m ? 2.0 : 1.0;
    double C = 1.0;
    auto margin = [&](double c) {
        return slow_checks(e, density, d, c, alpha, T, opt.sign_mode).back().margin;
    };
    const double dd = opt.sign_mode == SlowSignMode::Corrected ? d * (1.0 - d) : d * (d - 1.0);
    if (dd > 0.0) {
        for (int s = 0; s < detail::kMaxStages && !(margin(C) > 0.0); ++s) C = p > m ? 0.5 * C : 2.0 * C;
    } else {
        rep.notes.push_back("diffusion coefficient is nonpositive; no amplitude can satisfy the system");
    }
    rep.barrier = make_barrier(Family::SlowSuper, m, p, C, 1.0, T);
    rep.barrier.time = default_time_factors(Family::SlowSuper, m, p, T, alpha);
    rep.barrier.d_exp = d;
    rep.omega = 0.0;
    rep.checks = slow_checks(e, density, d, C, alpha, T, opt.sign_mode);
    rep.finalize();
    return rep;
}

}  // namespace wpme
