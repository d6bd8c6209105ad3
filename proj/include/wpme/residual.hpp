#pragma once

// Pointwise residual N[w] = w_t - (w^m)_xx / rho - w^p of a barrier, its
// finite-difference twin, grid sign verification over bracket regions, and the
// pasting conditions at branch interfaces.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wpme/barrier.hpp"
#include "wpme/density.hpp"
#include "wpme/error.hpp"

namespace wpme {

struct ResidualTerms {
    double w_t = 0.0;
    double diffusion = 0.0;  // (w^m)_xx / rho
    double reaction = 0.0;   // w^p
    double residual() const { return w_t - diffusion - reaction; }
    double scale() const { return std::abs(w_t) + std::abs(diffusion) + std::abs(reaction); }
};

inline ResidualTerms residual_terms(const BarrierSpec& spec, const DensitySpec& density, double x, double t,
                                    Side side = Side::Auto) {
    ResidualTerms r;
    if (spec.C == 0.0) return r;
    const BarrierJet jet = barrier_derivatives(spec, density, x, t, side);
    r.w_t = jet.w_t;
    r.diffusion = jet.wm_xx / density(x);
    r.reaction = std::pow(jet.w, spec.p);
    return r;
}

inline double analytic_residual(const BarrierSpec& spec, const DensitySpec& density, double x, double t,
                                Side side = Side::Auto) {
    return residual_terms(spec, density, x, t, side).residual();
}

/// |w_t| + |(w^m)_xx/rho| + |w^p|, the scale the sign tolerance is relative to.
inline double term_scale(const BarrierSpec& spec, const DensitySpec& density, double x, double t) {
    return residual_terms(spec, density, x, t).scale();
}

namespace detail {

/// Index of the smooth piece containing x: pieces are split at the collar
/// interfaces and at the center kink.
inline int smooth_piece(const BarrierSpec& spec, double R, double x) {
    int piece = 0;
    if (has_collar_interface(spec.family)) {
        const double s = R - spec.eps;
        piece = x < -s ? -2 : (x > s ? 2 : 0);
        if (x == s || x == -s) return 99;
    }
    if (has_center_kink(spec.family)) {
        if (x == 0.0) return 99;
        piece += x < 0.0 ? -1 : 1;
    }
    return piece;
}

}  // namespace detail

/// Central-difference estimate of N[w]: three-point second difference of w^m
/// in x and a centered first difference in t. The stencil [x-2h, x+2h] must sit
/// inside one smooth piece with a positive bracket.
inline double fd_residual(const BarrierSpec& spec, const DensitySpec& density, double x, double t, double h,
                          double dt) {
    require(h > 0.0 && dt > 0.0, ErrorCode::InvalidArgument, "fd steps must be positive");
    const double R = density.R();
    require(std::abs(x) + 2.0 * h < R, ErrorCode::StencilCrossesInterface, "stencil leaves (-R, R)");
    const int piece = detail::smooth_piece(spec, R, x);
    require(piece != 99 && detail::smooth_piece(spec, R, x - 2.0 * h) == piece &&
                detail::smooth_piece(spec, R, x + 2.0 * h) == piece,
            ErrorCode::StencilCrossesInterface, "stencil crosses a branch interface at x=" + std::to_string(x));
    require(t + dt < spec.time.t_max(), ErrorCode::TimeOutOfDomain, "time stencil leaves the domain");
    if (spec.C == 0.0) return 0.0;
    if (spec.family != Family::SlowSuper) {
        for (double xs : {x - 2.0 * h, x, x + 2.0 * h})
            for (double ts : {t - dt, t, t + dt})
                require(barrier_bracket(spec, density, xs, ts) > 0.0, ErrorCode::StencilCrossesInterface,
                        "stencil touches the bracket zero set");
    }
    auto w = [&](double xx, double tt) { return eval_barrier(spec, density, xx, tt); };
    auto wm = [&](double xx) { return std::pow(w(xx, t), spec.m); };
    const double w_t = (w(x, t + dt) - w(x, t - dt)) / (2.0 * dt);
    const double wm_xx = (wm(x + h) - 2.0 * wm(x) + wm(x - h)) / (h * h);
    return w_t - wm_xx / density(x) - std::pow(w(x, t), spec.p);
}

// ---------------------------------------------------------------------------
// Sign verification

enum class RegionTag { A, S1, S2, SlowInterior, Support };

inline std::string to_string(RegionTag r) {
    switch (r) {
    case RegionTag::A: return "A";
    case RegionTag::S1: return "S1";
    case RegionTag::S2: return "S2";
    case RegionTag::SlowInterior: return "SlowInterior";
    case RegionTag::Support: return "Support";
    }
    return "?";
}

/// Union of regions over the time window [t0, t1].
///   A, S1   collar points with 0 < bracket < 1 (A: every x != 0 for the power profile)
///   S2      core points with 0 < bracket < 1
///   SlowInterior  every interior point (slow family)
///   Support every point with a positive bracket
struct RegionSpec {
    std::vector<RegionTag> tags;
    double t0 = 0.0;
    double t1 = 1.0;
};

/// Default time window: [0, 5] for forward and growth factors, [0, 0.999 T]
/// for backward factors.
inline RegionSpec default_region(const BarrierSpec& spec, std::vector<RegionTag> tags) {
    RegionSpec r;
    r.tags = std::move(tags);
    r.t0 = 0.0;
    r.t1 = spec.time.kind == TimeKind::Backward ? 0.999 * spec.time.T : 5.0;
    return r;
}

struct SignSample {
    double x, t, residual, normalized, bracket;
};

struct SignReport {
    Orientation orientation = Orientation::Super;
    int bracket_sign = 1;
    std::vector<RegionTag> regions;
    double t0 = 0.0, t1 = 0.0;
    std::size_t nx = 0, nt = 0;
    std::size_t n_points = 0;
    double tol = 1e-8;
    double extreme_normalized = 0.0;  // min for Super, max for Sub
    double extreme_residual = 0.0;
    double arg_x = 0.0, arg_t = 0.0;
    bool pass = false;
    std::vector<std::string> notes;
    std::vector<SignSample> samples;  // filled when requested
};

namespace detail {

inline bool in_region(const BarrierSpec& spec, const DensitySpec& density, RegionTag tag, double x, double bracket) {
    const double R = density.R();
    const bool collar = has_collar_interface(spec.family) && std::abs(x) > R - spec.eps;
    switch (tag) {
    case RegionTag::SlowInterior: return spec.family == Family::SlowSuper;
    case RegionTag::Support: return spec.family == Family::SlowSuper || bracket > 0.0;
    case RegionTag::A:
        if (spec.family == Family::CriticalSuper) return bracket > 0.0 && bracket < 1.0;
        return collar && bracket > 0.0 && bracket < 1.0;
    case RegionTag::S1: return collar && bracket > 0.0 && bracket < 1.0;
    case RegionTag::S2:
        return has_collar_interface(spec.family) && !collar && bracket > 0.0 && bracket < 1.0;
    }
    return false;
}

}  // namespace detail

/// Samples the regions on a cell-centred nx x nt grid over (-R, R) x [t0, t1]
/// and checks the residual sign relative to the local term scale. Points on an
/// interface or the center kink are skipped; they are covered by check_interface.
inline SignReport verify_sign(const BarrierSpec& spec, const DensitySpec& density, const RegionSpec& region,
                              std::size_t nx, std::size_t nt, double tol_rel = 1e-8, bool keep_samples = false) {
    require(nx >= 2 && nt >= 1, ErrorCode::InvalidArgument, "grid too small");
    require(!region.tags.empty(), ErrorCode::InvalidArgument, "no region selected");
    require(region.t1 >= region.t0 && region.t1 < spec.time.t_max(), ErrorCode::TimeOutOfDomain,
            "time window outside the barrier's domain");
    const double R = density.R();
    SignReport rep;
    rep.orientation = spec.orientation();
    rep.bracket_sign = spec.bracket_sign;
    rep.regions = region.tags;
    rep.t0 = region.t0;
    rep.t1 = region.t1;
    rep.nx = nx;
    rep.nt = nt;
    rep.tol = tol_rel;
    const bool super = rep.orientation == Orientation::Super;
    rep.extreme_normalized = super ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    const double hx = 2.0 * R / double(nx);
    const double ht = (region.t1 - region.t0) / double(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        const double t = region.t0 + (double(j) + 0.5) * ht;
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = -R + (double(i) + 0.5) * hx;
            if (detail::smooth_piece(spec, R, x) == 99) continue;
            const double bracket = spec.family == Family::SlowSuper ? 1.0 : barrier_bracket(spec, density, x, t);
            bool member = false;
            for (auto tag : region.tags) member = member || detail::in_region(spec, density, tag, x, bracket);
            if (!member) continue;
            const ResidualTerms terms = residual_terms(spec, density, x, t);
            const double res = terms.residual();
            const double scale = terms.scale();
            const double nrm = scale > 0.0 ? res / scale : 0.0;
            ++rep.n_points;
            if (keep_samples) rep.samples.push_back({x, t, res, nrm, bracket});
            const bool better = super ? nrm < rep.extreme_normalized : nrm > rep.extreme_normalized;
            if (better) {
                rep.extreme_normalized = nrm;
                rep.extreme_residual = res;
                rep.arg_x = x;
                rep.arg_t = t;
            }
        }
    }
    if (rep.n_points == 0) {
        std::string names;
        for (auto tag : region.tags) names += (names.empty() ? "" : "+") + to_string(tag);
        throw Error(ErrorCode::EmptyRegion, "region " + names + " has no sample points for " + to_string(spec.family));
    }
    rep.pass = super ? rep.extreme_normalized >= -tol_rel : rep.extreme_normalized <= tol_rel;
    return rep;
}

/// Verification of the fast supersolution under both bracket sign conventions.
struct SignAdjudication {
    SignReport plus;
    SignReport minus;
    int default_sign = -1;
    std::string passing;  // "+1", "-1", "both" or "none"
    bool discrepancy = false;  // default convention fails while the other passes
};

inline SignAdjudication adjudicate_bracket_sign(const BarrierSpec& spec, const DensitySpec& density,
                                                const RegionSpec& region, std::size_t nx, std::size_t nt,
                                                double tol_rel = 1e-8) {
    SignAdjudication out;
    BarrierSpec s = spec;
    s.bracket_sign = 1;
    out.plus = verify_sign(s, density, region, nx, nt, tol_rel);
    s.bracket_sign = -1;
    out.minus = verify_sign(s, density, region, nx, nt, tol_rel);
    out.default_sign = default_bracket_sign(spec.family);
    if (out.plus.pass && out.minus.pass) out.passing = "both";
    else if (out.plus.pass) out.passing = "+1";
    else if (out.minus.pass) out.passing = "-1";
    else out.passing = "none";
    const bool def_pass = out.default_sign > 0 ? out.plus.pass : out.minus.pass;
    const bool other_pass = out.default_sign > 0 ? out.minus.pass : out.plus.pass;
    out.discrepancy = !def_pass && other_pass;
    return out;
}

// ---------------------------------------------------------------------------
// Interface (pasting) conditions

struct InterfaceSample {
    std::string where;  // "collar-right", "collar-left", "center"
    double x = 0.0, t = 0.0;
    double value_left = 0.0, value_right = 0.0;
    double flux_left = 0.0, flux_right = 0.0;  // one-sided (w^m)_x
    double value_gap = 0.0;    // relative
    double flux_margin = 0.0;  // relative, >= 0 means the orientation's inequality holds
    double flux_gap = 0.0;     // relative |left - right|
    bool ok = true;
};

struct InterfaceReport {
    Orientation orientation = Orientation::Super;
    std::vector<InterfaceSample> samples;
    double max_value_gap = 0.0;
    double max_flux_gap = 0.0;
    double tol = 1e-10;
    bool pass = true;
};

namespace detail {

struct OneSided {
    double value;
    double flux;
};

inline OneSided one_sided(const BarrierSpec& spec, const DensitySpec& density, double x, double t, Side side,
                          double probe) {
    const double v = eval_barrier(spec, density, x + probe, t);
    if (!(v > 0.0) || std::isinf(v)) return {v, 0.0};
    if (spec.family != Family::SlowSuper && barrier_bracket(spec, density, x + probe, t) <= 0.0) return {v, 0.0};
    const BarrierJet jet = barrier_derivatives(spec, density, x + probe, t, side);
    return {jet.w, jet.wm_x};
}

}  // namespace detail

/// Value continuity and the one-sided flux inequality at every branch
/// interface. For a supersolution the left flux must dominate the right one
/// (a concave corner), for a subsolution the reverse.
inline InterfaceReport check_interface(const BarrierSpec& spec, const DensitySpec& density,
                                       const std::vector<double>& t_samples, double tol_rel = 1e-10) {
    InterfaceReport rep;
    rep.orientation = spec.orientation();
    rep.tol = tol_rel;
    const double R = density.R();
    const bool super = rep.orientation == Orientation::Super;
    struct Site {
        std::string name;
        double x;
        Side left, right;
        double probe;
    };
    std::vector<Site> sites;
    if (has_collar_interface(spec.family)) {
        const double s = R - spec.eps;
        sites.push_back({"collar-left", -s, Side::Outer, Side::Inner, 0.0});
        sites.push_back({"collar-right", s, Side::Inner, Side::Outer, 0.0});
    }
    if (has_center_kink(spec.family)) sites.push_back({"center", 0.0, Side::Outer, Side::Outer, 1e-13 * R});
    for (double t : t_samples) {
        for (const auto& site : sites) {
            InterfaceSample smp;
            smp.where = site.name;
            smp.x = site.x;
            smp.t = t;
            if (spec.C != 0.0) {
                const auto L = detail::one_sided(spec, density, site.x, t, site.left, -site.probe);
                const auto Rr = detail::one_sided(spec, density, site.x, t, site.right, site.probe);
                smp.value_left = L.value;
                smp.value_right = Rr.value;
                smp.flux_left = L.flux;
                smp.flux_right = Rr.flux;
            }
            const double vs = std::max({std::abs(smp.value_left), std::abs(smp.value_right), 1e-300});
            const double fs = std::max({std::abs(smp.flux_left), std::abs(smp.flux_right), 1e-300});
            const bool inf = std::isinf(smp.value_left) || std::isinf(smp.value_right);
            smp.value_gap = inf ? (smp.value_left == smp.value_right ? 0.0 : 1.0)
                                : std::abs(smp.value_left - smp.value_right) / vs;
            const double diff = super ? smp.flux_left - smp.flux_right : smp.flux_right - smp.flux_left;
            smp.flux_margin = inf ? 0.0 : diff / fs;
            smp.flux_gap = inf ? 0.0 : std::abs(smp.flux_left - smp.flux_right) / fs;
            // the center kink uses probes 1e-13 R off the axis, so its value gap is O(1e-13)
            const double vtol = site.probe > 0.0 ? 1e-9 : tol_rel;
            smp.ok = smp.value_gap <= vtol && smp.flux_margin >= -tol_rel;
            rep.max_value_gap = std::max(rep.max_value_gap, smp.value_gap);
            if (site.probe == 0.0) rep.max_flux_gap = std::max(rep.max_flux_gap, smp.flux_gap);
            rep.pass = rep.pass && smp.ok;
            rep.samples.push_back(smp);
        }
    }
    return rep;
}

}  // namespace wpme
