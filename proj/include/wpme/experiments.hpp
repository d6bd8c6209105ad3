#pragma once

// Experiment orchestration: strict JSON case configs, the end-to-end pipeline
// (feasibility, barrier check, solve, ordering), theorem recipes, phase sweeps
// and the JSON/CSV emitters used by the command line tool.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "wpme/barrier.hpp"
#include "wpme/density.hpp"
#include "wpme/error.hpp"
#include "wpme/feasibility.hpp"
#include "wpme/residual.hpp"
#include "wpme/solver.hpp"

namespace wpme {

using json = nlohmann::json;

/// Configuration error carrying the offending field path, e.g. ".exponents.m".
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error(ErrorCode::ConfigInvalid, path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// ---------------------------------------------------------------------------
// Number formatting

/// Finite values as JSON numbers; infinities and NaN as the strings "inf", "-inf", "nan".
inline json jnum(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Strict section reader

namespace config {

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "." : path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    double num(const std::string& key) {
        if (!has(key)) throw ConfigError(at(key), "missing required key");
        return get_num(key);
    }
    std::optional<double> opt_num(const std::string& key) {
        if (!has(key)) {
            seen_.insert(key);
            return std::nullopt;
        }
        return get_num(key);
    }
    double num_or(const std::string& key, double def) { return opt_num(key).value_or(def); }

    std::optional<std::string> opt_str(const std::string& key) {
        seen_.insert(key);
        if (!has(key)) return std::nullopt;
        if (!j_.at(key).is_string()) throw ConfigError(at(key), "expected a string");
        return j_.at(key).get<std::string>();
    }
    std::string str_or(const std::string& key, const std::string& def) { return opt_str(key).value_or(def); }

    bool bool_or(const std::string& key, bool def) {
        seen_.insert(key);
        if (!has(key)) return def;
        if (!j_.at(key).is_boolean()) throw ConfigError(at(key), "expected true or false");
        return j_.at(key).get<bool>();
    }

    std::optional<long long> opt_int(const std::string& key) {
        seen_.insert(key);
        if (!has(key)) return std::nullopt;
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
        return v.get<long long>();
    }

    std::vector<double> nums(const std::string& key) {
        seen_.insert(key);
        if (!has(key)) throw ConfigError(at(key), "missing required key");
        const auto& v = j_.at(key);
        if (!v.is_array() || v.empty()) throw ConfigError(at(key), "expected a nonempty array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::optional<Reader> opt_sub(const std::string& key) {
        seen_.insert(key);
        if (!has(key)) return std::nullopt;
        return Reader(j_.at(key), at(key));
    }
    Reader sub(const std::string& key) {
        auto r = opt_sub(key);
        if (!r) throw ConfigError(at(key), "missing required section");
        return *r;
    }

    /// Rejects keys that were never read.
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
    }

private:
    double get_num(const std::string& key) {
        seen_.insert(key);
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(at(key), "expected a finite number");
        return d;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace config

// ---------------------------------------------------------------------------
// Case configuration

struct DensityConfig {
    double R = 1.0;
    double q = 0.0;
    double c1 = 1.0;
    double c2 = 1.0;
    std::optional<double> eps0;
    std::string profile = "power";  // "power" or "table:<path>"
};

struct BarrierConfig {
    std::string regime;              // "fast" | "critical" | "slow"; inferred from q when empty
    std::string orientation = "super";
    std::optional<double> C, a, T, eps, delta_exp, d_exp;
    std::optional<int> bracket_sign;
    std::string sign_mode = "corrected";  // slow family only
};

struct DatumConfig {
    std::string kind = "zero";  // zero | scaled-barrier | bump | power-profile
    double scale = 1.0;
    double center = 0.0, width = 0.2, height = 0.01;
    std::optional<double> C, d;
};

struct RunConfig {
    SchemeConfig scheme;
    std::optional<double> delta;  // default 0.01 R
    double t_end = 5.0;
};

struct CaseConfig {
    std::string name = "case";
    DensityConfig density;
    ProblemExponents exponents{2.0, 3.0};
    std::optional<BarrierConfig> barrier;
    DatumConfig datum;
    RunConfig solver;
    std::string out_dir;
};

inline Stepper parse_stepper(const std::string& s, const std::string& path) {
    if (s == "bdf1") return Stepper::BDF1;
    if (s == "bdf2") return Stepper::BDF2;
    if (s == "explicit") return Stepper::Explicit;
    throw ConfigError(path, "unknown stepper '" + s + "' (bdf1 | bdf2 | explicit)");
}

inline MeshKind parse_mesh(const std::string& s, const std::string& path) {
    if (s == "graded") return MeshKind::Graded;
    if (s == "uniform") return MeshKind::Uniform;
    throw ConfigError(path, "unknown mesh '" + s + "' (graded | uniform)");
}

inline RunConfig parse_solver(config::Reader& r) {
    RunConfig rc;
    SchemeConfig& s = rc.scheme;
    if (auto v = r.opt_int("nx")) {
        if (*v < 17 || *v % 2 == 0) throw ConfigError(r.at("nx"), "must be odd and >= 17");
        s.nx = std::size_t(*v);
    }
    if (auto v = r.opt_str("stepper")) s.stepper = parse_stepper(*v, r.at("stepper"));
    if (auto v = r.opt_str("mesh")) s.mesh = parse_mesh(*v, r.at("mesh"));
    s.stretch = r.num_or("stretch", s.stretch);
    s.floor_ratio = r.num_or("floor_ratio", s.floor_ratio);
    s.dt0 = r.num_or("dt0", s.dt0);
    s.dt_min = r.num_or("dt_min", s.dt_min);
    s.dt_max = r.num_or("dt_max", s.dt_max);
    s.newton_tol = r.num_or("newton_tol", s.newton_tol);
    if (auto v = r.opt_int("newton_max_iters")) s.newton_max_iters = int(*v);
    s.M_cap = r.num_or("M_cap", s.M_cap);
    s.max_rel_change = r.num_or("max_rel_change", s.max_rel_change);
    s.dt_growth = r.num_or("dt_growth", s.dt_growth);
    s.fixed_dt = r.bool_or("fixed_dt", s.fixed_dt);
    s.reaction = r.bool_or("reaction", s.reaction);
    s.implicit_reaction = r.bool_or("implicit_reaction", s.implicit_reaction);
    s.eps_reg = r.num_or("eps_reg", s.eps_reg);
    s.snapshot_every = r.num_or("snapshot_every", s.snapshot_every);
    s.snapshot_growth = r.num_or("snapshot_growth", s.snapshot_growth);
    if (auto v = r.opt_int("max_steps")) s.max_steps = std::size_t(std::max(1LL, *v));
    rc.delta = r.opt_num("delta");
    rc.t_end = r.num_or("t_end", rc.t_end);
    r.finish();
    try {
        validate(s);
    } catch (const Error& e) {
        throw ConfigError(r.at("").substr(0, r.at("").size() - 1), e.what());
    }
    if (!(rc.t_end > 0.0)) throw ConfigError(r.at("t_end"), "must be positive");
    if (rc.delta && !(*rc.delta > 0.0)) throw ConfigError(r.at("delta"), "must be positive");
    return rc;
}

inline CaseConfig parse_case(const json& j) {
    config::Reader root(j, "");
    CaseConfig c;
    c.name = root.str_or("name", c.name);
    {
        auto r = root.sub("density");
        c.density.R = r.num_or("R", 1.0);
        c.density.q = r.num("q");
        c.density.c1 = r.num_or("c1", 1.0);
        c.density.c2 = r.num_or("c2", 1.0);
        c.density.eps0 = r.opt_num("eps0");
        c.density.profile = r.str_or("profile", "power");
        if (c.density.profile != "power" && c.density.profile.rfind("table:", 0) != 0)
            throw ConfigError(r.at("profile"), "expected \"power\" or \"table:<path>\"");
        if (!(c.density.R > 0.0)) throw ConfigError(r.at("R"), "must be positive");
        if (!(c.density.q >= 0.0)) throw ConfigError(r.at("q"), "must be nonnegative");
        r.finish();
    }
    {
        auto r = root.sub("exponents");
        c.exponents.m = r.num("m");
        c.exponents.p = r.num("p");
        if (!(c.exponents.m > 1.0)) throw ConfigError(r.at("m"), "must exceed 1");
        if (!(c.exponents.p > 1.0)) throw ConfigError(r.at("p"), "must exceed 1");
        r.finish();
    }
    if (auto r = root.opt_sub("barrier")) {
        BarrierConfig b;
        b.regime = r->str_or("regime", "");
        b.orientation = r->str_or("orientation", "super");
        if (!b.regime.empty() && b.regime != "fast" && b.regime != "critical" && b.regime != "slow")
            throw ConfigError(r->at("regime"), "expected fast | critical | slow");
        if (b.orientation != "super" && b.orientation != "sub")
            throw ConfigError(r->at("orientation"), "expected super | sub");
        b.C = r->opt_num("C");
        b.a = r->opt_num("a");
        b.T = r->opt_num("T");
        b.eps = r->opt_num("eps");
        b.delta_exp = r->opt_num("delta_exp");
        b.d_exp = r->opt_num("d_exp");
        if (auto s = r->opt_int("bracket_sign")) {
            if (*s != 1 && *s != -1) throw ConfigError(r->at("bracket_sign"), "expected 1 or -1");
            b.bracket_sign = int(*s);
        }
        b.sign_mode = r->str_or("sign_mode", "corrected");
        if (b.sign_mode != "corrected" && b.sign_mode != "literal")
            throw ConfigError(r->at("sign_mode"), "expected corrected | literal");
        r->finish();
        c.barrier = b;
    }
    if (auto r = root.opt_sub("datum")) {
        DatumConfig& d = c.datum;
        d.kind = r->str_or("kind", "zero");
        if (d.kind != "zero" && d.kind != "scaled-barrier" && d.kind != "bump" && d.kind != "power-profile")
            throw ConfigError(r->at("kind"), "expected zero | scaled-barrier | bump | power-profile");
        d.scale = r->num_or("scale", d.scale);
        d.center = r->num_or("center", d.center);
        d.width = r->num_or("width", d.width);
        d.height = r->num_or("height", d.height);
        d.C = r->opt_num("C");
        d.d = r->opt_num("d");
        if (d.kind == "scaled-barrier" && !c.barrier)
            throw ConfigError(".barrier", "required by datum kind scaled-barrier");
        if (d.kind == "bump" && !(d.width > 0.0)) throw ConfigError(r->at("width"), "must be positive");
        if (d.scale < 0.0 || d.height < 0.0) throw ConfigError(r->at(d.scale < 0.0 ? "scale" : "height"), "must be >= 0");
        r->finish();
    }
    if (auto r = root.opt_sub("solver")) c.solver = parse_solver(*r);
    if (auto r = root.opt_sub("outputs")) {
        c.out_dir = r->str_or("dir", "");
        r->finish();
    }
    root.finish();
    return c;
}

inline CaseConfig load_case(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(".", "cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(".", std::string("malformed JSON: ") + e.what());
    }
    return parse_case(j);
}

inline json to_json(const CaseConfig& c) {
    json j;
    j["name"] = c.name;
    j["density"] = {{"R", c.density.R}, {"q", c.density.q}, {"c1", c.density.c1}, {"c2", c.density.c2},
                    {"profile", c.density.profile}};
    if (c.density.eps0) j["density"]["eps0"] = *c.density.eps0;
    j["exponents"] = {{"m", c.exponents.m}, {"p", c.exponents.p}};
    if (c.barrier) {
        const auto& b = *c.barrier;
        json jb = {{"orientation", b.orientation}};
        if (!b.regime.empty()) jb["regime"] = b.regime;
        auto put = [&](const char* k, const std::optional<double>& v) {
            if (v) jb[k] = *v;
        };
        put("C", b.C);
        put("a", b.a);
        put("T", b.T);
        put("eps", b.eps);
        put("delta_exp", b.delta_exp);
        put("d_exp", b.d_exp);
        if (b.bracket_sign) jb["bracket_sign"] = *b.bracket_sign;
        if (b.regime == "slow") jb["sign_mode"] = b.sign_mode;
        j["barrier"] = jb;
    }
    json jd = {{"kind", c.datum.kind}};
    if (c.datum.kind == "scaled-barrier") jd["scale"] = c.datum.scale;
    if (c.datum.kind == "bump") {
        jd["center"] = c.datum.center;
        jd["width"] = c.datum.width;
        jd["height"] = c.datum.height;
    }
    if (c.datum.C) jd["C"] = *c.datum.C;
    if (c.datum.d) jd["d"] = *c.datum.d;
    j["datum"] = jd;
    const SchemeConfig& s = c.solver.scheme;
    json js = {{"nx", s.nx},
               {"stepper", to_string(s.stepper)},
               {"mesh", to_string(s.mesh)},
               {"stretch", s.stretch},
               {"floor_ratio", s.floor_ratio},
               {"dt0", s.dt0},
               {"dt_min", s.dt_min},
               {"dt_max", s.dt_max},
               {"newton_tol", s.newton_tol},
               {"newton_max_iters", s.newton_max_iters},
               {"M_cap", s.M_cap},
               {"max_rel_change", s.max_rel_change},
               {"dt_growth", s.dt_growth},
               {"fixed_dt", s.fixed_dt},
               {"reaction", s.reaction},
               {"implicit_reaction", s.implicit_reaction},
               {"eps_reg", s.eps_reg},
               {"snapshot_every", s.snapshot_every},
               {"snapshot_growth", s.snapshot_growth},
               {"max_steps", s.max_steps},
               {"t_end", c.solver.t_end}};
    if (c.solver.delta) js["delta"] = *c.solver.delta;
    j["solver"] = js;
    if (!c.out_dir.empty()) j["outputs"] = {{"dir", c.out_dir}};
    return j;
}

// ---------------------------------------------------------------------------
// Building blocks

inline DensitySpec build_density(const DensityConfig& d) {
    const double eps0 = d.eps0.value_or(0.5 * d.R);
    if (d.profile == "power") return DensitySpec::power(d.R, d.q, d.c1, d.c2, eps0);
    return DensitySpec::table_csv(d.R, d.q, d.c1, d.c2, eps0, d.profile.substr(6));
}

inline Family family_of(const BarrierConfig& b, double q) {
    std::string regime = b.regime;
    if (regime.empty()) {
        const auto tag = classify_regime(q).tag;
        regime = tag == RegimeTag::Fast ? "fast" : (tag == RegimeTag::Critical ? "critical" : "slow");
    }
    const bool super = b.orientation == "super";
    if (regime == "fast") return super ? Family::FastSuper : Family::FastSub;
    if (regime == "critical") return super ? Family::CriticalSuper : Family::CriticalSub;
    if (!super) throw ConfigError(".barrier.orientation", "the slow regime has no subsolution family");
    return Family::SlowSuper;
}

/// Sign-check regions used for each family.
inline std::vector<RegionTag> default_regions(Family f) {
    switch (f) {
    case Family::FastSuper:
    case Family::FastSub: return {RegionTag::S1, RegionTag::S2};
    case Family::CriticalSuper: return {RegionTag::A};
    case Family::CriticalSub: return {RegionTag::Support};
    case Family::SlowSuper: return {RegionTag::SlowInterior};
    }
    return {};
}

namespace detail {

inline void apply_overrides(FeasibilityReport& rep, const ProblemExponents& e, const DensitySpec& density,
                            const BarrierConfig& b, double horizon) {
    if (!b.C && !b.a && !b.T) return;
    BarrierSpec& s = rep.barrier;
    std::string which;
    if (b.C) {
        s.C = *b.C;
        which += "C ";
    }
    if (b.a) {
        s.a = *b.a;
        which += "a ";
    }
    if (b.T) {
        s.time.T = *b.T;
        which += "T ";
    }
    rep.notes.push_back("parameters set by configuration: " + which + "(checks re-evaluated)");
    rep.omega = s.family == Family::SlowSuper ? 0.0 : omega_of(s.C, s.a, s.m);
    switch (s.family) {
    case Family::FastSuper: rep.checks = fast_global_checks(e, density, s.eps, s.C, s.a, s.T()); break;
    case Family::FastSub: rep.checks = fast_blowup_checks(e, density, s.eps, s.C, s.a); break;
    case Family::CriticalSuper:
        rep.checks = critical_global_checks(e, density, s.delta_exp, s.C, s.a, s.T(), horizon);
        break;
    case Family::CriticalSub: rep.checks = critical_blowup_checks(e, density, s.eps, s.C, s.a); break;
    case Family::SlowSuper: {
        const auto mode = rep.system.find("literal") != std::string::npos ? SlowSignMode::Literal
                                                                          : SlowSignMode::Corrected;
        rep.checks = slow_checks(e, density, s.d_exp, s.C, s.time.alpha, s.T(), mode);
        break;
    }
    }
    rep.finalize();
}

}  // namespace detail

/// Runs the feasibility search of the configured family; any of C, a, T given
/// in the configuration replace the search result and the checks are
/// re-evaluated at the supplied values.
inline FeasibilityReport resolve_barrier(const BarrierConfig& b, const ProblemExponents& e,
                                         const DensitySpec& density) {
    const Family fam = family_of(b, density.q());
    FeasibilityReport rep;
    double horizon = 0.0;
    switch (fam) {
    case Family::FastSuper: {
        FastGlobalOptions o;
        o.eps = b.eps;
        o.bracket_sign = b.bracket_sign.value_or(1);
        rep = feasible_fast_global(e, density, o);
        break;
    }
    case Family::FastSub: rep = feasible_fast_blowup(e, density, b.eps); break;
    case Family::CriticalSuper: {
        CriticalGlobalOptions o;
        if (b.delta_exp) o.delta_exp = *b.delta_exp;
        horizon = o.horizon;
        rep = feasible_critical_global(e, density, o);
        break;
    }
    case Family::CriticalSub: rep = feasible_critical_blowup(e, density, b.eps); break;
    case Family::SlowSuper: {
        SlowOptions o;
        o.sign_mode = b.sign_mode == "literal" ? SlowSignMode::Literal : SlowSignMode::Corrected;
        o.d_exp = b.d_exp;
        rep = feasible_slow(e, density, o);
        break;
    }
    }
    if (b.bracket_sign && fam != Family::FastSuper) rep.barrier.bracket_sign = *b.bracket_sign;
    detail::apply_overrides(rep, e, density, b, horizon);
    return rep;
}

inline std::function<double(double)> make_datum(const DatumConfig& d, const DensitySpec& density, double m,
                                                const std::optional<BarrierSpec>& barrier) {
    const double R = density.R();
    if (d.kind == "zero") return [](double) { return 0.0; };
    if (d.kind == "bump") {
        const double c = d.center, w = d.width, h = d.height;
        return [c, w, h](double x) {
            const double s = (x - c) / w;
            return std::abs(s) < 1.0 ? h * (1.0 - s * s) * (1.0 - s * s) : 0.0;
        };
    }
    if (d.kind == "scaled-barrier") {
        if (!barrier) throw ConfigError(".datum.kind", "scaled-barrier needs a barrier section");
        const BarrierSpec b = *barrier;
        const double k = d.scale;
        return [b, density, k](double x) {
            const double v = eval_barrier(b, density, x, 0.0);
            require(std::isfinite(v), ErrorCode::InvalidDatum, "barrier is unbounded at x=" + std::to_string(x));
            return k * v;
        };
    }
    // power-profile C (R - |x|)^{d/m}
    double C = 0.0, dd = 0.0;
    if (d.C) C = *d.C;
    else if (barrier && barrier->family == Family::SlowSuper) C = barrier->C;
    else throw ConfigError(".datum.C", "missing required key");
    if (d.d) dd = *d.d;
    else if (barrier && barrier->family == Family::SlowSuper) dd = barrier->d_exp;
    else dd = 0.5 * std::min(2.0 - density.q(), 1.0);
    return [C, dd, R, m](double x) { return C * std::pow(R - std::abs(x), dd / m); };
}

// ---------------------------------------------------------------------------
// JSON emitters

inline json to_json(const Check& c) {
    return {{"id", c.id}, {"relation", c.relation}, {"lhs", jnum(c.lhs)}, {"rhs", jnum(c.rhs)},
            {"margin", jnum(c.margin)}, {"ok", c.ok()}};
}

inline json to_json(const FeasibilityReport& r) {
    json j;
    j["system"] = r.system;
    j["family"] = to_string(r.barrier.family);
    json params = json::object();
    for (const auto& [k, v] : r.params()) params[k] = jnum(v);
    params["bracket_sign"] = r.barrier.bracket_sign;
    j["params"] = params;
    j["checks"] = json::array();
    for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
    json extras = json::object();
    for (const auto& [k, v] : r.extras) extras[k] = jnum(v);
    j["extras"] = extras;
    j["notes"] = r.notes;
    j["feasible"] = r.feasible;
    if (const Check* t = r.tightest()) j["tightest"] = t->id;
    return j;
}

inline std::string provenance_hash(const FeasibilityReport& r) { return fnv1a64(to_json(r).dump()); }

inline json to_json(const SignReport& r) {
    json tags = json::array();
    for (auto t : r.regions) tags.push_back(to_string(t));
    return {{"orientation", to_string(r.orientation)},
            {"bracket_sign", r.bracket_sign},
            {"regions", tags},
            {"t0", jnum(r.t0)},
            {"t1", jnum(r.t1)},
            {"nx", r.nx},
            {"nt", r.nt},
            {"n_points", r.n_points},
            {"tol", jnum(r.tol)},
            {"extreme_normalized", jnum(r.extreme_normalized)},
            {"extreme_residual", jnum(r.extreme_residual)},
            {"arg_x", jnum(r.arg_x)},
            {"arg_t", jnum(r.arg_t)},
            {"notes", r.notes},
            {"pass", r.pass}};
}

inline json to_json(const SignAdjudication& a) {
    return {{"default_sign", a.default_sign}, {"passing", a.passing}, {"discrepancy", a.discrepancy},
            {"plus", to_json(a.plus)},        {"minus", to_json(a.minus)}};
}

inline json to_json(const InterfaceReport& r) {
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back({{"where", s.where},
                           {"x", jnum(s.x)},
                           {"t", jnum(s.t)},
                           {"value_left", jnum(s.value_left)},
                           {"value_right", jnum(s.value_right)},
                           {"flux_left", jnum(s.flux_left)},
                           {"flux_right", jnum(s.flux_right)},
                           {"value_gap", jnum(s.value_gap)},
                           {"flux_margin", jnum(s.flux_margin)},
                           {"ok", s.ok}});
    return {{"orientation", to_string(r.orientation)},
            {"max_value_gap", jnum(r.max_value_gap)},
            {"max_flux_gap", jnum(r.max_flux_gap)},
            {"tol", jnum(r.tol)},
            {"samples", samples},
            {"pass", r.pass}};
}

inline json to_json(const SolveResult& r) {
    json j;
    j["status"] = to_string(r.status);
    j["t_final"] = jnum(r.t_final);
    if (r.status == SolveStatus::BlowUp) j["bracket"] = {jnum(r.t_lo), jnum(r.t_hi)};
    j["message"] = r.message;
    j["delta"] = jnum(r.delta);
    j["mesh"] = {{"kind", to_string(r.mesh.kind)},
                 {"nodes", r.mesh.size()},
                 {"h_min", jnum(r.mesh.h_min())},
                 {"h_max", jnum(r.mesh.h_max())}};
    j["diagnostics"] = {{"steps", r.diag.steps},
                        {"rejected", r.diag.rejected},
                        {"newton_iters", r.diag.newton_iters},
                        {"max_newton_iters", r.diag.max_newton_iters},
                        {"dt_smallest", jnum(r.diag.dt_smallest)},
                        {"M_cap", jnum(r.diag.M_cap)},
                        {"local_existence_time", jnum(r.diag.local_existence_time)}};
    if (!r.history.empty()) {
        j["final_sup_norm"] = jnum(r.history.back().sup_norm);
        j["final_mass"] = jnum(r.history.back().mass);
    }
    j["snapshots"] = r.snapshots.size();
    return j;
}

inline json to_json(const OrderingReport& r) {
    return {{"orientation", to_string(r.orientation)},
            {"applicable", r.applicable},
            {"ordering_pass", r.ordering_pass},
            {"support_relation", r.support_relation},
            {"support_pass", r.support_pass},
            {"min_margin", jnum(r.min_margin)},
            {"arg_x", jnum(r.arg_x)},
            {"arg_t", jnum(r.arg_t)},
            {"tolerance", jnum(r.tolerance)},
            {"snapshots_checked", r.snapshots_checked},
            {"notes", r.notes},
            {"pass", r.pass}};
}

inline json to_json(const MonotonicityReport& r) {
    json st = json::array();
    for (auto s : r.statuses) st.push_back(to_string(s));
    json diffs = json::array();
    for (double d : r.level_differences) diffs.push_back(jnum(d));
    return {{"deltas", r.deltas},
            {"statuses", st},
            {"monotone", r.monotone},
            {"tol", jnum(r.tol)},
            {"worst_violation", jnum(r.worst_violation)},
            {"worst_x", jnum(r.worst_x)},
            {"worst_t", jnum(r.worst_t)},
            {"level_differences", diffs},
            {"cauchy_last", jnum(r.cauchy_last)}};
}

// ---------------------------------------------------------------------------
// CSV emitters

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << text;
}

inline std::string history_csv(const SolveResult& r) {
    std::string s = "t,sup_norm,mass,dt\n";
    for (const auto& h : r.history) s += fmt(h.t) + "," + fmt(h.sup_norm) + "," + fmt(h.mass) + "," + fmt(h.dt) + "\n";
    return s;
}

inline std::string snapshots_csv(const SolveResult& r) {
    std::string s = "t,x,u\n";
    for (const auto& f : r.snapshots)
        for (std::size_t i = 0; i < f.x.size(); ++i) s += fmt(f.t) + "," + fmt(f.x[i]) + "," + fmt(f.u[i]) + "\n";
    return s;
}

inline std::string residual_csv(const SignReport& r) {
    std::string s = "x,t,residual,bracket\n";
    for (const auto& p : r.samples) s += fmt(p.x) + "," + fmt(p.t) + "," + fmt(p.residual) + "," + fmt(p.bracket) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// Pipeline

struct BarrierCheckOptions {
    std::size_t nx = 200;
    std::size_t nt = 50;
    double tol = 1e-8;
    std::size_t interface_times = 5;
    bool keep_samples = false;
};

struct BarrierCheck {
    SignReport sign;
    InterfaceReport interface;
    std::optional<SignAdjudication> adjudication;  // fast supersolution only
    bool pass = false;
};

inline BarrierCheck barrier_check(const BarrierSpec& spec, const DensitySpec& density,
                                  const BarrierCheckOptions& opt = {}) {
    BarrierCheck out;
    const RegionSpec region = default_region(spec, default_regions(spec.family));
    out.sign = verify_sign(spec, density, region, opt.nx, opt.nt, opt.tol, opt.keep_samples);
    std::vector<double> ts;
    const std::size_t k = std::max<std::size_t>(opt.interface_times, 1);
    for (std::size_t i = 0; i < k; ++i) ts.push_back(region.t0 + (region.t1 - region.t0) * double(i) / double(k));
    out.interface = check_interface(spec, density, ts);
    if (spec.family == Family::FastSuper)
        out.adjudication = adjudicate_bracket_sign(spec, density, region, opt.nx, opt.nt, opt.tol);
    out.pass = out.sign.pass && out.interface.pass;
    return out;
}

inline json to_json(const BarrierCheck& c) {
    json j = {{"sign", to_json(c.sign)}, {"interface", to_json(c.interface)}, {"pass", c.pass}};
    if (c.adjudication) j["bracket_sign_adjudication"] = to_json(*c.adjudication);
    return j;
}

struct CaseSummary {
    std::string name;
    std::optional<FeasibilityReport> feasibility;
    std::string provenance;  // hash of the feasibility report
    std::optional<BarrierCheck> check;
    SolveResult result;
    std::optional<OrderingReport> ordering;
    bool no_false_blowup = true;
    std::vector<std::string> notes;
    json doc;

    /// 0 pass, 1 a graded check failed, 3 numerical failure.
    int exit_code() const {
        if (result.status == SolveStatus::NumericalFailure) return 3;
        bool ok = no_false_blowup;
        if (ordering && ordering->applicable) ok = ok && ordering->pass;
        if (check) ok = ok && check->pass;
        if (feasibility) ok = ok && feasibility->feasible;
        return ok ? 0 : 1;
    }
};

inline double effective_delta(const CaseConfig& cfg) { return cfg.solver.delta.value_or(0.01 * cfg.density.R); }

/// Spacing of the last accepted step before the blow-up bracket (0 if none).
inline double last_dt(const SolveResult& r) { return r.history.size() > 1 ? r.history.back().dt : 0.0; }

/// Sanity gate: a blow-up bracket may not begin before the local existence time.
inline bool no_false_blowup(const SolveResult& r) {
    if (r.status != SolveStatus::BlowUp) return true;
    return r.t_lo >= r.diag.local_existence_time - last_dt(r);
}

inline CaseSummary run_case(const CaseConfig& cfg, const BarrierCheckOptions& bc = {}) {
    CaseSummary out;
    out.name = cfg.name;
    const DensitySpec density = build_density(cfg.density);
    std::optional<BarrierSpec> barrier;
    if (cfg.barrier) {
        out.feasibility = resolve_barrier(*cfg.barrier, cfg.exponents, density);
        out.provenance = provenance_hash(*out.feasibility);
        barrier = out.feasibility->barrier;
        try {
            out.check = barrier_check(*barrier, density, bc);
        } catch (const Error& e) {
            out.notes.push_back(std::string("barrier check skipped: ") + e.what());
        }
    }
    const auto u0 = make_datum(cfg.datum, density, cfg.exponents.m, barrier);
    out.result = solve_regularized(density, cfg.exponents.m, cfg.exponents.p, u0, effective_delta(cfg),
                                   cfg.solver.scheme, cfg.solver.t_end);
    if (barrier) {
        try {
            out.ordering = compare_with_barrier(out.result, *barrier, density);
        } catch (const Error& e) {
            out.notes.push_back(std::string("ordering skipped: ") + e.what());
        }
    }
    out.no_false_blowup = no_false_blowup(out.result);
    if (density.q() < 2.0)
        out.notes.push_back("q < 2: the computed solution approximates the minimal solution; other solutions may exist");

    json& j = out.doc;
    j["name"] = cfg.name;
    j["config"] = to_json(cfg);
    if (out.feasibility) {
        j["feasibility"] = to_json(*out.feasibility);
        j["provenance"] = out.provenance;
    }
    if (out.check) j["barrier_check"] = to_json(*out.check);
    j["result"] = to_json(out.result);
    if (out.ordering) j["ordering"] = to_json(*out.ordering);
    j["no_false_blowup"] = out.no_false_blowup;
    j["notes"] = out.notes;
    j["exit_code"] = out.exit_code();
    return out;
}

/// Writes summary.json, history.csv and snapshots.csv (and feasibility.json
/// when a barrier was requested) into `dir`.
inline void write_case(const CaseSummary& s, const std::filesystem::path& dir) {
    write_text(dir / "summary.json", s.doc.dump(2) + "\n");
    write_text(dir / "history.csv", history_csv(s.result));
    write_text(dir / "snapshots.csv", snapshots_csv(s.result));
    if (s.feasibility) write_text(dir / "feasibility.json", to_json(*s.feasibility).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Theorem recipes

inline const std::vector<std::string>& theorem_ids() {
    static const std::vector<std::string> ids{"T2.1", "T2.2", "T2.3", "T2.4", "T2.5", "T2.6"};
    return ids;
}

/// Canonical desk-scale instance of each theorem (R = 1, c1 = c2 = 1).
inline CaseConfig theorem_config(const std::string& id) {
    CaseConfig c;
    c.name = id;
    c.solver.t_end = 5.0;
    c.solver.scheme.snapshot_every = 0.25;
    BarrierConfig b;
    if (id == "T2.1") {
        c.density.q = 3.0;
        c.exponents = {2.0, 3.0};
        b.regime = "fast";
        b.orientation = "super";
        b.bracket_sign = 1;
        c.barrier = b;
        c.datum.kind = "scaled-barrier";
        c.datum.scale = 0.5;
    } else if (id == "T2.2") {
        c.density.q = 3.0;
        c.exponents = {2.0, 3.0};
        b.regime = "fast";
        b.orientation = "sub";
        c.barrier = b;
        c.datum.kind = "scaled-barrier";
        c.datum.scale = 1.0;
    } else if (id == "T2.3") {
        c.density.q = 3.0;
        c.exponents = {3.0, 2.0};
        c.datum.kind = "bump";
        c.datum.center = 0.0;
        c.datum.width = 0.2;
        c.datum.height = 1e-2;
        // the truncated problem is global for p < m; the interval must reach
        // far enough into the singular layer for the limit blow-up to show
        c.solver.delta = 1e-10;
        c.solver.scheme.stretch = 1.12;
        c.solver.scheme.floor_ratio = 1e-8;
        c.solver.scheme.dt_min = 1e-9;
        c.solver.scheme.dt_max = 1.0;
        c.solver.scheme.snapshot_every = 0.0;
        c.solver.t_end = 1000.0;
    } else if (id == "T2.4") {
        c.density.q = 2.0;
        c.exponents = {2.0, 3.0};
        b.regime = "critical";
        b.orientation = "super";
        c.barrier = b;
        c.datum.kind = "scaled-barrier";
        c.datum.scale = 0.5;
    } else if (id == "T2.5") {
        c.density.q = 2.0;
        c.exponents = {2.0, 3.0};
        b.regime = "critical";
        b.orientation = "sub";
        c.barrier = b;
        c.datum.kind = "scaled-barrier";
        c.datum.scale = 1.0;
    } else if (id == "T2.6") {
        c.density.q = 1.0;
        c.exponents = {2.0, 3.0};
        b.regime = "slow";
        b.orientation = "super";
        c.barrier = b;
        c.datum.kind = "power-profile";
    } else {
        throw ConfigError(".theorem", "unknown theorem id '" + id + "'");
    }
    return c;
}

struct TheoremReport {
    std::string id;
    std::string claim;
    bool pass = false;
    std::vector<std::pair<std::string, bool>> criteria;
    CaseSummary summary;
    json doc;

    int exit_code() const {
        if (pass) return 0;
        return summary.result.status == SolveStatus::NumericalFailure ? 3 : 1;
    }
};

inline TheoremReport grade_theorem(const std::string& id, CaseSummary s) {
    TheoremReport r;
    r.id = id;
    const SolveResult& res = s.result;
    const bool global = res.status == SolveStatus::Global;
    const bool blowup = res.status == SolveStatus::BlowUp;
    auto add = [&](const std::string& name, bool ok) { r.criteria.emplace_back(name, ok); };
    const bool ordered = s.ordering && s.ordering->applicable && s.ordering->pass;
    if (id == "T2.1" || id == "T2.4" || id == "T2.6") {
        r.claim = "small datum below the supersolution: global solution bounded by the barrier";
        add("feasible", s.feasibility && s.feasibility->feasible);
        add("global", global && res.t_final >= 5.0);
        add("ordering", ordered);
    } else if (id == "T2.2") {
        r.claim = "datum above the subsolution: blow-up no later than T";
        const double T = s.feasibility ? s.feasibility->barrier.T() : 0.0;
        add("feasible", s.feasibility && s.feasibility->feasible);
        add("blowup", blowup);
        add("bracket-within-T", blowup && res.t_hi <= 1.1 * T);
        add("ordering", ordered);
    } else if (id == "T2.3") {
        r.claim = "1 < p < m with q > 2: a nontrivial datum blows up";
        add("blowup", blowup);
    } else if (id == "T2.5") {
        r.claim = "datum above the critical subsolution: blow-up";
        add("blowup", blowup);
    }
    add("no-false-blowup", s.no_false_blowup);
    r.pass = true;
    for (const auto& [n, ok] : r.criteria) r.pass = r.pass && ok;
    json crit = json::object();
    for (const auto& [n, ok] : r.criteria) crit[n] = ok;
    r.doc = {{"theorem", id}, {"claim", r.claim}, {"criteria", crit}, {"pass", r.pass}, {"case", s.doc}};
    r.summary = std::move(s);
    return r;
}

inline TheoremReport reproduce_theorem(const std::string& id, const BarrierCheckOptions& bc = {}) {
    return grade_theorem(id, run_case(theorem_config(id), bc));
}

// ---------------------------------------------------------------------------
// Phase sweep

struct SweepAxes {
    std::vector<double> m, p, q;
};

struct SweepCell {
    double m = 0.0, p = 0.0, q = 0.0;
    SolveStatus outcome = SolveStatus::NumericalFailure;
    double t_lo = std::nan(""), t_hi = std::nan("");
    double final_sup = std::nan("");
    std::string message;
};

struct PhaseTable {
    SweepAxes axes;
    std::vector<SweepCell> cells;  // m-major, then p, then q

    const SweepCell* find(double m, double p, double q) const {
        for (const auto& c : cells)
            if (c.m == m && c.p == p && c.q == q) return &c;
        return nullptr;
    }
};

/// Solves the base case for every (m, p, q) on the axes; the barrier section is
/// ignored and the datum must not depend on it. Cells run on `jobs` worker
/// threads; a failing cell is recorded as a numerical failure.
inline PhaseTable sweep(const SweepAxes& axes, const CaseConfig& base, unsigned jobs = 1,
                        const std::filesystem::path& out_dir = {}) {
    require(!axes.m.empty() && !axes.p.empty() && !axes.q.empty(), ErrorCode::InvalidArgument,
            "sweep axes must be nonempty");
    if (base.datum.kind == "scaled-barrier")
        throw ConfigError(".datum.kind", "sweeps need a datum that does not depend on a barrier");
    PhaseTable table;
    table.axes = axes;
    for (double m : axes.m)
        for (double p : axes.p)
            for (double q : axes.q) {
                SweepCell c;
                c.m = m;
                c.p = p;
                c.q = q;
                table.cells.push_back(c);
            }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < table.cells.size(); i = next++) {
            SweepCell& cell = table.cells[i];
            CaseConfig cfg = base;
            cfg.barrier.reset();
            cfg.density.q = cell.q;
            cfg.exponents = {cell.m, cell.p};
            try {
                const DensitySpec density = build_density(cfg.density);
                const auto u0 = make_datum(cfg.datum, density, cell.m, std::nullopt);
                const SolveResult r = solve_regularized(density, cell.m, cell.p, u0, effective_delta(cfg),
                                                        cfg.solver.scheme, cfg.solver.t_end);
                cell.outcome = r.status;
                cell.message = r.message;
                cell.final_sup = r.history.back().sup_norm;
                if (r.status == SolveStatus::BlowUp) {
                    cell.t_lo = r.t_lo;
                    cell.t_hi = r.t_hi;
                }
                if (!out_dir.empty()) {
                    const auto sub = out_dir / ("m" + fmt(cell.m) + "_p" + fmt(cell.p) + "_q" + fmt(cell.q));
                    write_text(sub / "history.csv", history_csv(r));
                    write_text(sub / "result.json", to_json(r).dump(2) + "\n");
                }
            } catch (const std::exception& e) {
                cell.outcome = SolveStatus::NumericalFailure;
                cell.message = e.what();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, unsigned(table.cells.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return table;
}

inline std::string sweep_csv(const PhaseTable& t) {
    std::string s = "m,p,q,outcome,t_blowup_lo,t_blowup_hi\n";
    for (const auto& c : t.cells) {
        const bool b = c.outcome == SolveStatus::BlowUp;
        s += fmt(c.m) + "," + fmt(c.p) + "," + fmt(c.q) + "," + to_string(c.outcome) + "," + (b ? fmt(c.t_lo) : "") +
             "," + (b ? fmt(c.t_hi) : "") + "\n";
    }
    return s;
}

inline json to_json(const PhaseTable& t) {
    json cells = json::array();
    for (const auto& c : t.cells)
        cells.push_back({{"m", c.m},
                         {"p", c.p},
                         {"q", c.q},
                         {"outcome", to_string(c.outcome)},
                         {"t_blowup_lo", jnum(c.t_lo)},
                         {"t_blowup_hi", jnum(c.t_hi)},
                         {"final_sup_norm", jnum(c.final_sup)},
                         {"message", c.message}});
    return {{"axes", {{"m", t.axes.m}, {"p", t.axes.p}, {"q", t.axes.q}}}, {"cells", cells}};
}

}  // namespace wpme
