#pragma once

// Variable density rho(x) on (-R, R) with a power-type singularity at the
// endpoints, and the decay-regime classification it induces.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wpme/error.hpp"

namespace wpme {

enum class RegimeTag { Fast, Critical, Slow };

inline std::string to_string(RegimeTag tag) {
    switch (tag) {
    case RegimeTag::Fast: return "fast";
    case RegimeTag::Critical: return "critical";
    case RegimeTag::Slow: return "slow";
    }
    return "?";
}

struct Regime {
    RegimeTag tag = RegimeTag::Slow;
    double b = 0.0;  // q - 2, meaningful for Fast only
    double d = 0.0;  // profile exponent, meaningful for Slow only (set by feasibility)
};

inline Regime classify_regime(double q) {
    require(std::isfinite(q), ErrorCode::InvalidArgument, "q must be finite");
    require(q >= 0.0, ErrorCode::NegativeExponent, "q must be >= 0, got " + std::to_string(q));
    if (q > 2.0) return {RegimeTag::Fast, q - 2.0, 0.0};
    if (q == 2.0) return {RegimeTag::Critical, 0.0, 0.0};
    return {RegimeTag::Slow, 0.0, 0.0};
}

struct DensitySample {
    double x;
    double rho;
};

/// Admissible weight: rho > 0 and continuous on (-R, R), and on the collar
/// R - eps0 < |x| < R it is sandwiched between c1 (R-|x|)^{-q} and c2 (R-|x|)^{-q}.
///
/// The canonical profile is (R-|x|)^{-q} on the whole interval. Tabulated
/// profiles are interpolated linearly and continued beyond the last sample by
/// the power law that matches the last sampled value.
class DensitySpec {
public:
    static DensitySpec power(double R, double q, double c1 = 1.0, double c2 = 1.0, double eps0 = -1.0) {
        DensitySpec spec(R, q, c1, c2, eps0 < 0.0 ? 0.5 * R : eps0);
        require(c1 <= 1.0 && c2 >= 1.0, ErrorCode::DensityRejected,
                "canonical profile (R-|x|)^{-q} needs c1 <= 1 <= c2");
        return spec;
    }

    static DensitySpec table(double R, double q, double c1, double c2, double eps0,
                             std::vector<DensitySample> samples, bool symmetric = true) {
        DensitySpec spec(R, q, c1, c2, eps0);
        require(samples.size() >= 2, ErrorCode::DensityRejected, "table needs at least two samples");
        std::sort(samples.begin(), samples.end(),
                  [](const DensitySample& l, const DensitySample& r) { return l.x < r.x; });
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto& s = samples[i];
            require(std::abs(s.x) < R, ErrorCode::DensityRejected,
                    "table sample outside (-R, R) at x=" + std::to_string(s.x));
            require(std::isfinite(s.rho) && s.rho > 0.0, ErrorCode::DensityRejected,
                    "table density must be positive, x=" + std::to_string(s.x));
            if (i > 0)
                require(s.x > samples[i - 1].x, ErrorCode::DensityRejected, "duplicate table abscissa");
        }
        spec.table_ = std::make_shared<const std::vector<DensitySample>>(std::move(samples));
        spec.symmetric_ = symmetric;
        spec.validate_table();
        return spec;
    }

    /// Two-column CSV `x,rho`; a header line is skipped if it does not parse.
    static DensitySpec table_csv(double R, double q, double c1, double c2, double eps0,
                                 const std::string& path, bool symmetric = true) {
        std::ifstream in(path);
        require(in.good(), ErrorCode::DensityRejected, "cannot open density table " + path);
        std::vector<DensitySample> samples;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            DensitySample s{};
            if (ls >> s.x >> s.rho) samples.push_back(s);
        }
        return table(R, q, c1, c2, eps0, std::move(samples), symmetric);
    }

    double R() const { return R_; }
    double q() const { return q_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    double eps0() const { return eps0_; }
    bool is_power() const { return table_ == nullptr; }
    bool symmetric() const { return symmetric_; }
    Regime regime() const { return classify_regime(q_); }

    double operator()(double x) const {
        const double ax = std::abs(x);
        require(ax < R_, ErrorCode::DomainBoundary,
                "density evaluated at |x| >= R (x=" + std::to_string(x) + ")");
        if (!table_) return q_ == 0.0 ? 1.0 : std::pow(R_ - ax, -q_);
        return interpolate(x);
    }

private:
    DensitySpec(double R, double q, double c1, double c2, double eps0)
        : R_(R), q_(q), c1_(c1), c2_(c2), eps0_(eps0) {
        require(R > 0.0 && std::isfinite(R), ErrorCode::DensityRejected, "R must be positive");
        require(q >= 0.0, ErrorCode::NegativeExponent, "q must be >= 0");
        require(c1 > 0.0 && c1 <= c2 && std::isfinite(c2), ErrorCode::DensityRejected,
                "sandwich constants need 0 < c1 <= c2 < inf");
        require(eps0 > 0.0 && eps0 < R, ErrorCode::DensityRejected, "collar width needs 0 < eps0 < R");
    }

    double interpolate(double x) const {
        const auto& t = *table_;
        if (x <= t.front().x) return tail(t.front(), x);
        if (x >= t.back().x) return tail(t.back(), x);
        auto hi = std::upper_bound(t.begin(), t.end(), x,
                                   [](double v, const DensitySample& s) { return v < s.x; });
        auto lo = hi - 1;
        const double w = (x - lo->x) / (hi->x - lo->x);
        return (1.0 - w) * lo->rho + w * hi->rho;
    }

    double tail(const DensitySample& edge, double x) const {
        const double r_edge = R_ - std::abs(edge.x);
        const double r = R_ - std::abs(x);
        if (r >= r_edge) return edge.rho;  // sample closer to the boundary than x: hold
        return edge.rho * std::pow(r_edge / r, q_);
    }

    void validate_table() const {
        const auto& t = *table_;
        for (const auto& s : t) {
            const double r = R_ - std::abs(s.x);
            if (r < eps0_) {
                const double scaled = s.rho * std::pow(r, q_);
                const double slack = 1e-12 * std::max(1.0, c2_);
                require(scaled >= c1_ - slack && scaled <= c2_ + slack, ErrorCode::DensityRejected,
                        "collar sandwich violated at x=" + std::to_string(s.x));
            }
        }
        if (symmetric_) {
            for (const auto& s : t) {
                if (-s.x >= t.front().x && -s.x <= t.back().x) {
                    const double mirrored = interpolate(-s.x);
                    require(std::abs(mirrored - s.rho) <= 1e-9 * s.rho, ErrorCode::DensityRejected,
                            "table declared symmetric but rho(x) != rho(-x) at x=" + std::to_string(s.x));
                }
            }
        }
    }

    double R_, q_, c1_, c2_, eps0_;
    bool symmetric_ = true;
    std::shared_ptr<const std::vector<DensitySample>> table_;
};

inline double eval_density(const DensitySpec& spec, double x) { return spec(x); }

struct DensityBounds {
    double lo;
    double hi;
};

namespace detail {

template <class F>
DensityBounds sampled_extrema(F&& f, double x0, double x1) {
    DensityBounds prev{0.0, 0.0};
    for (std::size_t n = 1025; n <= (std::size_t{1} << 22); n = 2 * n - 1) {
        DensityBounds cur{f(x0), f(x0)};
        for (std::size_t i = 1; i < n; ++i) {
            const double x = i + 1 == n ? x1 : x0 + (x1 - x0) * double(i) / double(n - 1);
            const double v = f(x);
            cur.lo = std::min(cur.lo, v);
            cur.hi = std::max(cur.hi, v);
        }
        if (n > 1025 && std::abs(cur.lo - prev.lo) <= 1e-6 * prev.lo &&
            std::abs(cur.hi - prev.hi) <= 1e-6 * prev.hi)
            return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace detail

/// rho1 <= rho(x) <= rho2 on the core [-R+eps0, R-eps0], by dense sampling with
/// refinement until both extrema are stable to 1e-6 relative.
inline DensityBounds uniform_bounds(const DensitySpec& spec, double eps0) {
    require(eps0 > 0.0 && eps0 < spec.R(), ErrorCode::InvalidArgument, "uniform_bounds needs 0 < eps0 < R");
    const double edge = spec.R() - eps0;
    if (spec.is_power()) {
        // monotone in |x|: extrema at the centre and at the core edge
        return {spec(0.0), spec(edge)};
    }
    return detail::sampled_extrema([&](double x) { return spec(x); }, -edge, edge);
}

/// Extremes of rho(x) (R-|x|)^q over the whole interval, sampled on a grid that
/// stops a hair short of the endpoints. Equals (1, 1) for the canonical profile.
inline DensityBounds global_sandwich(const DensitySpec& spec) {
    if (spec.is_power()) return {1.0, 1.0};
    const double R = spec.R();
    const double edge = R * (1.0 - 1e-6);
    return detail::sampled_extrema(
        [&](double x) { return spec(x) * std::pow(R - std::abs(x), spec.q()); }, -edge, edge);
}

}  // namespace wpme
