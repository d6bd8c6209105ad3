#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "wpme/wpme.hpp"

namespace wpme::testing {

/// Code of the Error thrown by f; a test failure when nothing is thrown.
inline ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::InvalidArgument;
}

struct Instance {
    std::string name;
    BarrierSpec spec;
    DensitySpec density;
};

inline Instance from_theorem(const std::string& id, std::string name) {
    const CaseConfig cfg = theorem_config(id);
    const DensitySpec density = build_density(cfg.density);
    const FeasibilityReport rep = resolve_barrier(*cfg.barrier, cfg.exponents, density);
    return {std::move(name), rep.barrier, density};
}

/// One representative per barrier family, plus the fast supersolution under
/// the other bracket sign.
inline std::vector<Instance> family_instances() {
    std::vector<Instance> out;
    out.push_back(from_theorem("T2.1", "fast-super+"));
    Instance minus = out.back();
    minus.name = "fast-super-";
    minus.spec.bracket_sign = -1;
    out.push_back(minus);
    out.push_back(from_theorem("T2.2", "fast-sub"));
    out.push_back(from_theorem("T2.4", "critical-super"));
    out.push_back(from_theorem("T2.5", "critical-sub"));
    out.push_back(from_theorem("T2.6", "slow-super"));
    return out;
}

struct Point {
    double x, t;
};

/// Points where the stencil [x - 2h, x + 2h] x [t - h, t + h] stays inside one
/// smooth piece with a comfortably positive bracket.
inline std::vector<Point> admissible_points(const Instance& in, std::size_t n, double h, unsigned seed) {
    std::mt19937_64 rng(seed);
    const double R = in.density.R();
    const double t_hi = in.spec.time.kind == TimeKind::Backward ? 0.8 * in.spec.time.T : 2.0;
    std::uniform_real_distribution<double> ux(-0.9 * R, 0.9 * R), ut(2.0 * h, t_hi);
    const double margin = 5.0 * h;
    std::vector<Point> out;
    for (std::size_t tries = 0; out.size() < n && tries < 200000; ++tries) {
        const double x = ux(rng), t = ut(rng);
        if (std::abs(x) < margin) continue;
        if (has_collar_interface(in.spec.family) && std::abs(std::abs(x) - (R - in.spec.eps)) < margin) continue;
        if (in.spec.family != Family::SlowSuper) {
            bool ok = true;
            for (double xs : {x - margin, x + margin})
                for (double ts : {t - 2.0 * h, t + 2.0 * h}) {
                    const double B = barrier_bracket(in.spec, in.density, xs, ts);
                    ok = ok && B > 0.05;
                }
            if (!ok) continue;
        }
        out.push_back({x, t});
    }
    return out;
}

}  // namespace wpme::testing
