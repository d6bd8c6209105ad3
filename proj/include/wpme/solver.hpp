#pragma once

// Method-of-lines solver for the regularized Dirichlet problem
//   u_t = (u^m)_xx / rho + u^p   on (-R+delta, R-delta),  u = 0 at the ends,
// with implicit backward-difference stepping, Newton on the tridiagonal system,
// adaptive time steps and blow-up detection.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wpme/barrier.hpp"
#include "wpme/density.hpp"
#include "wpme/error.hpp"
#include "wpme/mesh.hpp"

namespace wpme {

enum class Stepper { BDF1, BDF2, Explicit };
enum class SolveStatus { Global, BlowUp, NumericalFailure };

inline std::string to_string(Stepper s) {
    switch (s) {
    case Stepper::BDF1: return "bdf1";
    case Stepper::BDF2: return "bdf2";
    case Stepper::Explicit: return "explicit";
    }
    return "?";
}

inline std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Global: return "global";
    case SolveStatus::BlowUp: return "blowup";
    case SolveStatus::NumericalFailure: return "numerical-failure";
    }
    return "?";
}

struct SchemeConfig {
    std::size_t nx = 801;  // nodes including both boundary nodes (odd)
    Stepper stepper = Stepper::BDF1;
    MeshKind mesh = MeshKind::Graded;
    double stretch = 1.05;
    double floor_ratio = 0.05;
    double dt0 = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 0.05;
    double newton_tol = 1e-10;
    int newton_max_iters = 25;
    double M_cap = 0.0;  // blow-up threshold; <= 0 selects the automatic value
    double max_rel_change = 0.1;
    double dt_growth = 1.2;
    bool fixed_dt = false;
    bool reaction = true;
    bool implicit_reaction = false;  // default: reaction lagged, diffusion implicit
    double eps_reg = 0.0;
    double snapshot_every = 0.0;  // 0: only the initial and final states
    double snapshot_growth = 2.0; // also store a state each time the sup norm grows by this factor; 0 disables
    std::size_t max_steps = 5'000'000;
};

inline void validate(const SchemeConfig& c) {
    require(c.nx >= 17 && c.nx % 2 == 1, ErrorCode::InvalidArgument, "nx must be odd and >= 17");
    require(c.dt_min > 0.0 && c.dt_min < c.dt0 && c.dt0 <= c.dt_max, ErrorCode::InvalidArgument,
            "need 0 < dt_min < dt0 <= dt_max");
    require(c.newton_tol > 0.0 && c.newton_max_iters >= 1, ErrorCode::InvalidArgument, "invalid Newton settings");
    require(c.max_rel_change > 0.0 && c.dt_growth >= 1.0, ErrorCode::InvalidArgument, "invalid step control");
    require(c.eps_reg >= 0.0 && c.snapshot_every >= 0.0 && c.snapshot_growth >= 0.0, ErrorCode::InvalidArgument, "invalid scheme options");
}

/// Threshold a blow-up must exceed. The step controller keeps dt ~ 0.1/((p-1) u^{p-1}),
/// so dt reaches dt_min only once u is of order (0.1/((p-1) dt_min))^{1/(p-1)};
/// the automatic cap sits a decade below that, and never above 1e8.
inline double auto_blowup_cap(double p, double dt_min) {
    return std::min(1e8, 0.1 * std::pow(0.1 / ((p - 1.0) * dt_min), 1.0 / (p - 1.0)));
}

inline double effective_cap(const SchemeConfig& c, double p) {
    return c.M_cap > 0.0 ? c.M_cap : auto_blowup_cap(p, c.dt_min);
}

/// tau = 1 / ((p-1) ||u0||^{p-1}); +infinity for the zero datum.
inline double local_existence_time(double p, double sup_u0) {
    require(p > 1.0, ErrorCode::InvalidArgument, "p must exceed 1");
    require(sup_u0 >= 0.0 && std::isfinite(sup_u0), ErrorCode::InvalidDatum, "datum must be bounded");
    if (sup_u0 == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / ((p - 1.0) * std::pow(sup_u0, p - 1.0));
}

struct Field {
    std::vector<double> x;
    std::vector<double> u;
    double t = 0.0;

    double sup() const {
        double s = 0.0;
        for (double v : u) s = std::max(s, v);
        return s;
    }
};

inline double local_existence_time(double p, const Field& u0) { return local_existence_time(p, u0.sup()); }

struct HistoryRow {
    double t, sup_norm, mass, dt;
};

struct SolveDiagnostics {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t newton_iters = 0;
    int max_newton_iters = 0;
    double dt_smallest = std::numeric_limits<double>::infinity();
    double M_cap = 0.0;
    double local_existence_time = 0.0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Global;
    double t_final = 0.0;
    double t_lo = 0.0;  // blow-up bracket
    double t_hi = 0.0;
    std::string message;
    double delta = 0.0;
    Mesh mesh;
    std::vector<HistoryRow> history;
    std::vector<Field> snapshots;
    SolveDiagnostics diag;
};

namespace detail {

/// Solves a tridiagonal system in place: lower l, diagonal d, upper u, rhs b.
inline void thomas(std::vector<double>& l, std::vector<double>& d, std::vector<double>& u, std::vector<double>& b) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = l[i] / d[i - 1];
        d[i] -= w * u[i - 1];
        b[i] -= w * b[i - 1];
    }
    b[n - 1] /= d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) b[i] = (b[i] - u[i] * b[i + 1]) / d[i];
}

inline double sup_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

/// Discrete operator on a fixed mesh: f(u)_i = D2(u^m)_i / rho_i + u_i^p, where
/// the reaction enters f only when it is treated implicitly.
class Operator {
public:
    Operator(const Mesh& mesh, const DensitySpec& density, double m, double p, bool reaction, bool implicit_reaction,
             double eps_reg)
        : m_(m), p_(p), reaction_(reaction && implicit_reaction), source_on_(reaction), eps_reg_(eps_reg) {
        const std::size_t n = mesh.size();
        lo_.assign(n, 0.0);
        di_.assign(n, 0.0);
        up_.assign(n, 0.0);
        rho_.assign(n, 1.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = mesh.h(i - 1), hr = mesh.h(i);
            const double c = 2.0 / (hl + hr);
            lo_[i] = c / hl;
            up_[i] = c / hr;
            di_[i] = -(lo_[i] + up_[i]);
            rho_[i] = density(mesh.x[i]);
        }
    }

    double power_m(double u) const { return std::pow(std::max(u, 0.0) + eps_reg_, m_); }
    double dpower_m(double u) const { return m_ * std::pow(std::max(u, 0.0) + eps_reg_, m_ - 1.0); }

    void apply(const std::vector<double>& u, std::vector<double>& out) const {
        const std::size_t n = u.size();
        out.assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double diff = lo_[i] * power_m(u[i - 1]) + di_[i] * power_m(u[i]) + up_[i] * power_m(u[i + 1]);
            out[i] = diff / rho_[i] + (reaction_ ? std::pow(std::max(u[i], 0.0), p_) : 0.0);
        }
    }

    /// Jacobian rows of f for interior nodes (index shifted by one).
    void jacobian(const std::vector<double>& u, std::vector<double>& jl, std::vector<double>& jd,
                  std::vector<double>& ju) const {
        const std::size_t n = u.size();
        jl.assign(n - 2, 0.0);
        jd.assign(n - 2, 0.0);
        ju.assign(n - 2, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t k = i - 1;
            jl[k] = i > 1 ? lo_[i] * dpower_m(u[i - 1]) / rho_[i] : 0.0;
            ju[k] = i + 2 < n ? up_[i] * dpower_m(u[i + 1]) / rho_[i] : 0.0;
            jd[k] = di_[i] * dpower_m(u[i]) / rho_[i] +
                    (reaction_ ? p_ * std::pow(std::max(u[i], 0.0), p_ - 1.0) : 0.0);
        }
    }

    /// Largest stable explicit step for the current state (diffusion part only).
    double explicit_limit(const std::vector<double>& u) const {
        double lim = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < u.size(); ++i) {
            const double k = -di_[i] * dpower_m(u[i]) / rho_[i];
            if (k > 0.0) lim = std::min(lim, 0.9 / k);
        }
        return lim;
    }

    /// Reaction term when it is lagged, 0 otherwise.
    double source(double u) const { return source_on_ && !reaction_ ? std::pow(std::max(u, 0.0), p_) : 0.0; }

    double rho(std::size_t i) const { return rho_[i]; }

private:
    double m_, p_;
    bool reaction_;
    bool source_on_;
    double eps_reg_;
    std::vector<double> lo_, di_, up_, rho_;
};

inline double weighted_mass(const Mesh& mesh, const Operator& op, const std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) s += op.rho(i) * mesh.dual(i) * u[i];
    return s;
}

}  // namespace detail

/// Weighted mass sum_i rho_i w_i u_i with dual-cell weights w_i.
inline double weighted_mass(const Mesh& mesh, const DensitySpec& density, const std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) s += density(mesh.x[i]) * mesh.dual(i) * u[i];
    return s;
}

/// Solves on a prescribed mesh whose end nodes carry the Dirichlet condition.
inline SolveResult solve_on_mesh(const DensitySpec& density, double m, double p, const Mesh& mesh,
                                 const std::vector<double>& u0_nodes, const SchemeConfig& cfg, double t_end) {
    validate(cfg);
    require(m > 1.0 && p > 1.0, ErrorCode::InvalidArgument, "need m > 1 and p > 1");
    require(t_end > 0.0 && std::isfinite(t_end), ErrorCode::InvalidArgument, "t_end must be positive");
    require(u0_nodes.size() == mesh.size(), ErrorCode::InvalidDatum, "datum size does not match the mesh");
    require(mesh.x.front() > -density.R() && mesh.x.back() < density.R(), ErrorCode::InvalidArgument,
            "mesh must lie inside (-R, R)");
    const std::size_t n = mesh.size();
    std::vector<double> u = u0_nodes;
    for (double v : u) require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidDatum, "datum must be finite and >= 0");
    u.front() = 0.0;
    u.back() = 0.0;

    const detail::Operator op(mesh, density, m, p, cfg.reaction, cfg.implicit_reaction, cfg.eps_reg);
    SolveResult res;
    res.mesh = mesh;
    res.delta = density.R() - mesh.x.back();
    res.diag.M_cap = effective_cap(cfg, p);
    res.diag.local_existence_time = local_existence_time(p, detail::sup_abs(u));

    std::vector<double> snap_times;
    if (cfg.snapshot_every > 0.0)
        for (double s = cfg.snapshot_every; s < t_end * (1.0 - 1e-12); s += cfg.snapshot_every) snap_times.push_back(s);
    snap_times.push_back(t_end);
    std::size_t next_snap = 0;

    double t = 0.0;
    double dt = std::min(cfg.dt0, t_end);
    double dt_prev = 0.0;
    std::vector<double> u_prev;  // for BDF2
    res.snapshots.push_back({mesh.x, u, 0.0});
    double last_snap_sup = detail::sup_abs(u);
    res.history.push_back({0.0, detail::sup_abs(u), detail::weighted_mass(mesh, op, u), 0.0});

    std::vector<double> f, trial, rhs0, jl, jd, ju, b;
    const double cap = res.diag.M_cap;

    auto fail = [&](SolveStatus st, double t_fail, const std::string& msg) {
        res.status = st;
        res.t_final = t;
        res.t_lo = t;
        res.t_hi = t_fail;
        res.message = msg;
        res.snapshots.push_back({mesh.x, u, t});
        return res;
    };

    while (true) {
        if (res.diag.steps >= cfg.max_steps) return fail(SolveStatus::NumericalFailure, t, "step budget exhausted");
        const double target = snap_times[next_snap];
        bool landing = false;
        double h = dt;
        if (cfg.stepper == Stepper::Explicit) h = std::min(h, op.explicit_limit(u));
        if (t + h >= target * (1.0 - 1e-13)) {
            h = target - t;
            landing = true;
        }

        // one step attempt
        bool converged = false;
        int iters = 0;
        const bool bdf2 = cfg.stepper == Stepper::BDF2 && !u_prev.empty() && dt_prev > 0.0;
        double gamma = 1.0;
        if (cfg.stepper == Stepper::Explicit) {
            op.apply(u, f);
            trial.assign(n, 0.0);
            for (std::size_t i = 1; i + 1 < n; ++i) trial[i] = std::max(0.0, u[i] + h * (f[i] + op.source(u[i])));
            converged = true;
        } else {
            rhs0 = u;
            if (bdf2) {
                const double r = h / dt_prev;
                const double c0 = (1.0 + r) * (1.0 + r) / (1.0 + 2.0 * r);
                const double c1 = r * r / (1.0 + 2.0 * r);
                gamma = (1.0 + r) / (1.0 + 2.0 * r);
                for (std::size_t i = 0; i < n; ++i)
                    rhs0[i] = c0 * u[i] - c1 * u_prev[i] +
                              gamma * h * ((1.0 + r) * op.source(u[i]) - r * op.source(u_prev[i]));
            } else {
                for (std::size_t i = 0; i < n; ++i) rhs0[i] += h * op.source(u[i]);
            }
            trial = u;
            for (iters = 1; iters <= cfg.newton_max_iters; ++iters) {
                op.apply(trial, f);
                op.jacobian(trial, jl, jd, ju);
                b.assign(n - 2, 0.0);
                for (std::size_t i = 1; i + 1 < n; ++i) {
                    const std::size_t k = i - 1;
                    b[k] = -(trial[i] - rhs0[i] - gamma * h * f[i]);
                    jl[k] = -gamma * h * jl[k];
                    ju[k] = -gamma * h * ju[k];
                    jd[k] = 1.0 - gamma * h * jd[k];
                }
                detail::thomas(jl, jd, ju, b);
                double step = 0.0;
                for (std::size_t i = 1; i + 1 < n; ++i) {
                    const double nv = std::max(0.0, trial[i] + b[i - 1]);
                    step = std::max(step, std::abs(nv - trial[i]));
                    trial[i] = nv;
                }
                const double scale = detail::sup_abs(trial);
                if (!std::isfinite(step) || !std::isfinite(scale)) break;
                if (step <= cfg.newton_tol * scale || step == 0.0) {
                    converged = true;
                    break;
                }
            }
            iters = std::min(iters, cfg.newton_max_iters);
        }
        res.diag.newton_iters += std::size_t(iters);
        res.diag.max_newton_iters = std::max(res.diag.max_newton_iters, iters);

        double change = 0.0;
        if (converged) {
            for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(trial[i] - u[i]));
        }
        const double base = detail::sup_abs(u);
        const double rel = base > 0.0 ? change / base : (change > 0.0 ? 0.0 : 0.0);
        const bool accept = converged && std::isfinite(change) && (cfg.fixed_dt || rel <= cfg.max_rel_change);

        if (!accept) {
            ++res.diag.rejected;
            dt = 0.5 * h;
            if (dt < cfg.dt_min) {
                const double sup = detail::sup_abs(u);
                if (sup >= cap)
                    return fail(SolveStatus::BlowUp, t + h, "sup norm beyond cap with step collapse");
                return fail(SolveStatus::NumericalFailure, t + h,
                            converged ? "step collapse without norm growth" : "Newton divergence");
            }
            continue;
        }

        u_prev = u;
        dt_prev = h;
        u = std::move(trial);
        trial.clear();
        t = landing ? target : t + h;
        ++res.diag.steps;
        res.diag.dt_smallest = std::min(res.diag.dt_smallest, h);
        const double sup = detail::sup_abs(u);
        res.history.push_back({t, sup, detail::weighted_mass(mesh, op, u), h});
        if (!std::isfinite(sup)) return fail(SolveStatus::NumericalFailure, t, "non-finite state");

        if (!cfg.fixed_dt) {
            const bool easy = iters <= 4 && rel <= 0.5 * cfg.max_rel_change;
            // a landing step may have been shortened; resume from the controller's dt
            const double basis = landing ? std::max(h, dt) : h;
            dt = easy ? std::min(basis * cfg.dt_growth, cfg.dt_max) : std::min(basis, cfg.dt_max);
        }
        if (cfg.snapshot_growth > 1.0 && !landing && sup > cfg.snapshot_growth * last_snap_sup) {
            res.snapshots.push_back({mesh.x, u, t});
            last_snap_sup = sup;
        }
        if (landing) {
            res.snapshots.push_back({mesh.x, u, t});
            last_snap_sup = std::max(last_snap_sup, sup);
            if (++next_snap == snap_times.size()) break;
        }
    }
    res.status = SolveStatus::Global;
    res.t_final = t;
    res.t_lo = res.t_hi = t;
    res.message = "reached t_end";
    return res;
}

/// Samples the datum on the nodes of a mesh; the end nodes are set to zero.
inline std::vector<double> sample_datum(const Mesh& mesh, const std::function<double(double)>& u0) {
    std::vector<double> out(mesh.size(), 0.0);
    for (std::size_t i = 1; i + 1 < mesh.size(); ++i) out[i] = u0(mesh.x[i]);
    return out;
}

inline Mesh regularized_mesh(const DensitySpec& density, double delta, const SchemeConfig& cfg) {
    require(delta > 0.0 && delta < density.R(), ErrorCode::InvalidArgument, "need 0 < delta < R");
    return make_mesh(density.R() - delta, cfg.nx, cfg.mesh, cfg.stretch, cfg.floor_ratio);
}

inline SolveResult solve_regularized(const DensitySpec& density, double m, double p,
                                     const std::function<double(double)>& u0, double delta, const SchemeConfig& cfg,
                                     double t_end) {
    validate(cfg);
    const Mesh mesh = regularized_mesh(density, delta, cfg);
    return solve_on_mesh(density, m, p, mesh, sample_datum(mesh, u0), cfg, t_end);
}

// ---------------------------------------------------------------------------
// delta-continuation toward the minimal solution

struct MonotonicityReport {
    std::vector<double> deltas;
    std::vector<SolveStatus> statuses;
    bool monotone = true;
    double worst_violation = 0.0;  // largest u_k - u_{k+1} on shared nodes
    double worst_x = 0.0, worst_t = 0.0;
    std::vector<double> level_differences;  // sup |u_{k+1} - u_k| over shared nodes and snapshots
    double cauchy_last = 0.0;
    double tol = 1e-6;
};

struct MinimalSolution {
    SolveResult finest;
    MonotonicityReport report;
};

/// Solves on nested intervals I_delta for a decreasing delta sequence. All
/// levels share the interior nodes of the finest mesh (the coarser domains are
/// truncations of it, closed by a boundary node at +-(R - delta)) and use a
/// fixed step schedule, so level-to-level differences are pointwise on common
/// nodes at common times.
inline MinimalSolution minimal_solution(const DensitySpec& density, double m, double p,
                                        const std::function<double(double)>& u0, const std::vector<double>& deltas,
                                        SchemeConfig cfg, double t_end, double tol = 1e-6) {
    require(!deltas.empty(), ErrorCode::InvalidArgument, "delta sequence is empty");
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        require(deltas[k] > 0.0 && deltas[k] < density.R(), ErrorCode::InvalidArgument, "need 0 < delta < R");
        if (k > 0)
            require(deltas[k] < deltas[k - 1], ErrorCode::InvalidArgument, "delta sequence must be strictly decreasing");
    }
    cfg.fixed_dt = true;
    const Mesh fine = regularized_mesh(density, deltas.back(), cfg);
    MinimalSolution out;
    out.report.deltas = deltas;
    out.report.tol = tol;
    std::vector<SolveResult> levels;
    for (double d : deltas) {
        const double L = density.R() - d;
        Mesh mesh;
        mesh.kind = fine.kind;
        mesh.x.push_back(-L);
        for (double x : fine.x)
            if (std::abs(x) < L * (1.0 - 1e-12)) mesh.x.push_back(x);
        mesh.x.push_back(L);
        levels.push_back(solve_on_mesh(density, m, p, mesh, sample_datum(mesh, u0), cfg, t_end));
        out.report.statuses.push_back(levels.back().status);
    }
    auto value_at = [](const Field& f, double x) {
        auto it = std::lower_bound(f.x.begin(), f.x.end(), x);
        if (it != f.x.end() && *it == x) return f.u[std::size_t(it - f.x.begin())];
        return std::numeric_limits<double>::quiet_NaN();
    };
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        const auto& a = levels[k];
        const auto& b = levels[k + 1];
        double diff = 0.0;
        const std::size_t ns = std::min(a.snapshots.size(), b.snapshots.size());
        for (std::size_t s = 0; s < ns; ++s) {
            const Field& fa = a.snapshots[s];
            const Field& fb = b.snapshots[s];
            if (fa.t != fb.t) continue;
            for (std::size_t i = 1; i + 1 < fa.x.size(); ++i) {
                const double vb = value_at(fb, fa.x[i]);
                if (std::isnan(vb)) continue;
                diff = std::max(diff, std::abs(vb - fa.u[i]));
                const double viol = fa.u[i] - vb;
                if (viol > out.report.worst_violation) {
                    out.report.worst_violation = viol;
                    out.report.worst_x = fa.x[i];
                    out.report.worst_t = fa.t;
                }
            }
        }
        out.report.level_differences.push_back(diff);
    }
    out.report.monotone = out.report.worst_violation <= tol;
    out.report.cauchy_last = out.report.level_differences.empty() ? 0.0 : out.report.level_differences.back();
    out.finest = std::move(levels.back());
    return out;
}

// ---------------------------------------------------------------------------
// Ordering against a barrier

struct OrderingReport {
    Orientation orientation = Orientation::Super;
    bool applicable = true;
    bool ordering_pass = true;
    bool support_pass = true;
    bool pass = true;
    double min_margin = std::numeric_limits<double>::infinity();
    double arg_x = 0.0, arg_t = 0.0;
    double tolerance = 0.0;
    std::size_t snapshots_checked = 0;
    std::string support_relation;  // "subset", "superset" or "none"
    std::vector<std::string> notes;
};

/// Pointwise ordering of the stored snapshots against a barrier (u <= w for a
/// supersolution, u >= w for a subsolution) with the per-snapshot grid tolerance
/// h_max * sup|u(t)|, plus the support relation of the family. `tolerance`
/// reports the largest tolerance used.
inline OrderingReport compare_with_barrier(const SolveResult& result, const BarrierSpec& spec,
                                           const DensitySpec& density, double tol_override = -1.0) {
    OrderingReport rep;
    rep.orientation = spec.orientation();
    const bool super = rep.orientation == Orientation::Super;
    double sup_u = 0.0;
    for (const auto& s : result.snapshots)
        if (s.t < spec.time.t_max() && !(result.status == SolveStatus::BlowUp && s.t > result.t_lo))
            sup_u = std::max(sup_u, s.sup());
    rep.tolerance = tol_override >= 0.0 ? tol_override : result.mesh.h_max() * sup_u;

    if (!super && spec.family == Family::CriticalSub) {
        rep.applicable = false;
        rep.support_relation = "none";
        rep.notes.push_back("log-profile subsolution is unbounded at the boundary; pointwise ordering on I_delta "
                            "does not follow from the comparison principle");
    }
    if (spec.family == Family::FastSub) rep.support_relation = "superset";
    else if (spec.family == Family::CriticalSuper || (spec.family == Family::FastSuper && spec.bracket_sign > 0))
        rep.support_relation = "subset";
    else if (rep.support_relation.empty()) rep.support_relation = "none";

    for (const auto& snap : result.snapshots) {
        if (!(snap.t < spec.time.t_max())) continue;
        if (result.status == SolveStatus::BlowUp && snap.t > result.t_lo) continue;
        ++rep.snapshots_checked;
        if (!rep.applicable) continue;
        const double thr = tol_override >= 0.0 ? tol_override : result.mesh.h_max() * snap.sup();
        std::vector<double> w(snap.x.size());
        for (std::size_t i = 0; i < snap.x.size(); ++i) w[i] = eval_barrier(spec, density, snap.x[i], snap.t);
        for (std::size_t i = 1; i + 1 < snap.x.size(); ++i) {
            if (std::isinf(w[i])) continue;
            const double margin = super ? w[i] - snap.u[i] : snap.u[i] - w[i];
            if (margin < rep.min_margin) {
                rep.min_margin = margin;
                rep.arg_x = snap.x[i];
                rep.arg_t = snap.t;
            }
            if (margin < -thr) rep.ordering_pass = false;
            // support relations, with one node of slack for the discrete front
            const double w_nb = std::max({w[i - 1], w[i], w[i + 1]});
            const double u_nb = std::max({snap.u[i - 1], snap.u[i], snap.u[i + 1]});
            if (rep.support_relation == "subset" && snap.u[i] > thr && !(w_nb > 0.0)) rep.support_pass = false;
            if (rep.support_relation == "superset" && w[i] > thr && !(u_nb > 0.0)) rep.support_pass = false;
        }
    }
    if (rep.snapshots_checked == 0)
        throw Error(ErrorCode::WindowMismatch, "no stored snapshot lies in the barrier's time window");
    if (!rep.applicable) {
        rep.ordering_pass = rep.support_pass = rep.pass = false;
        rep.min_margin = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    rep.pass = rep.ordering_pass && rep.support_pass;
    return rep;
}

}  // namespace wpme
