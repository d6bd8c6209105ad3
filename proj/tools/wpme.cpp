// Command line front end: simulate, barrier-check, feasible, reproduce, sweep.
// Exit codes: 0 pass, 1 graded failure, 2 configuration error, 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wpme/wpme.hpp"

namespace fs = std::filesystem;
using namespace wpme;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;
constexpr int kNumeric = 3;

int exit_code_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::NoFeasiblePoint:
    case ErrorCode::MonotonicityViolation: return kFail;
    case ErrorCode::NewtonDivergence:
    case ErrorCode::BracketNonpositive:
    case ErrorCode::StencilCrossesInterface: return kNumeric;
    default: return kConfig;
    }
}

void print_error(const Error& e) {
    json j = {{"error", to_string(e.code())}, {"message", e.what()}};
    if (auto* ce = dynamic_cast<const ConfigError*>(&e)) j["path"] = ce->path();
    std::cerr << j.dump() << "\n";
}

fs::path output_dir(const std::string& flag, const CaseConfig& cfg) {
    if (!flag.empty()) return flag;
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    return fs::path("out") / cfg.name;
}

std::vector<double> parse_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError(flag, "cannot parse '" + tok + "' as a number");
        }
    }
    if (out.empty()) throw ConfigError(flag, "empty list");
    return out;
}

struct SimulateArgs {
    std::string config, out;
    std::optional<double> t_end, delta, snapshot_every;
    std::optional<std::size_t> nx;
};

int run_simulate(const SimulateArgs& a) {
    CaseConfig cfg = load_case(a.config);
    if (a.t_end) cfg.solver.t_end = *a.t_end;
    if (a.delta) cfg.solver.delta = *a.delta;
    if (a.snapshot_every) cfg.solver.scheme.snapshot_every = *a.snapshot_every;
    if (a.nx) cfg.solver.scheme.nx = *a.nx;
    validate(cfg.solver.scheme);
    const CaseSummary s = run_case(cfg);
    const fs::path dir = output_dir(a.out, cfg);
    write_case(s, dir);
    json brief = {{"name", s.name}, {"result", s.doc["result"]}, {"exit_code", s.exit_code()}, {"dir", dir.string()}};
    if (s.ordering) brief["ordering_pass"] = s.ordering->pass;
    if (!s.provenance.empty()) brief["provenance"] = s.provenance;
    std::cout << brief.dump(2) << "\n";
    return s.exit_code();
}

struct BarrierArgs {
    std::string config, samples_csv, out;
    std::size_t nx = 400, nt = 100;
    double tol = 1e-8;
};

int run_barrier_check(const BarrierArgs& a) {
    const CaseConfig cfg = load_case(a.config);
    if (!cfg.barrier) throw ConfigError(".barrier", "missing required section");
    const DensitySpec density = build_density(cfg.density);
    const FeasibilityReport rep = resolve_barrier(*cfg.barrier, cfg.exponents, density);
    BarrierCheckOptions opt;
    opt.nx = a.nx;
    opt.nt = a.nt;
    opt.tol = a.tol;
    opt.keep_samples = !a.samples_csv.empty();
    const BarrierCheck chk = barrier_check(rep.barrier, density, opt);
    json j = to_json(chk);
    j["feasibility"] = to_json(rep);
    j["provenance"] = provenance_hash(rep);
    if (!a.samples_csv.empty()) write_text(a.samples_csv, residual_csv(chk.sign));
    if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return chk.pass ? kPass : kFail;
}

struct FeasibleArgs {
    double m = 2, p = 3, q = 3, c1 = 1, c2 = 1, R = 1;
    std::optional<double> eps, delta_exp, d_exp;
    std::string orientation, blowup_case, sign_mode = "corrected", out;
    std::optional<int> bracket_sign;
};

int run_feasible(const FeasibleArgs& a) {
    const DensitySpec density = DensitySpec::power(a.R, a.q, a.c1, a.c2);
    const ProblemExponents e{a.m, a.p};
    BarrierConfig b;
    b.eps = a.eps;
    b.delta_exp = a.delta_exp;
    b.d_exp = a.d_exp;
    b.sign_mode = a.sign_mode;
    b.bracket_sign = a.bracket_sign;
    if (a.sign_mode != "corrected" && a.sign_mode != "literal")
        throw ConfigError("--sign-mode", "expected corrected | literal");
    std::optional<BlowupCase> bc;
    if (!a.blowup_case.empty()) {
        if (a.blowup_case == "p>m" || a.blowup_case == "pgtm") bc = BlowupCase::PgtM;
        else if (a.blowup_case == "p<m" || a.blowup_case == "pltm") bc = BlowupCase::PltM;
        else if (a.blowup_case == "p=m" || a.blowup_case == "peqm") bc = BlowupCase::PeqM;
        else throw ConfigError("--case", "expected p>m | p<m | p=m");
    }
    std::string orient = a.orientation;
    if (orient.empty()) orient = bc || (density.regime().tag == RegimeTag::Fast && a.p <= a.m) ? "sub" : "super";
    if (orient != "super" && orient != "sub") throw ConfigError("--orientation", "expected super | sub");
    b.orientation = orient;
    FeasibilityReport rep;
    if (bc) {
        if (density.regime().tag != RegimeTag::Fast) throw ConfigError("--case", "blow-up cases need q > 2");
        rep = feasible_fast_blowup(e, density, a.eps, bc);
    } else {
        rep = resolve_barrier(b, e, density);
    }
    json j = to_json(rep);
    j["provenance"] = provenance_hash(rep);
    if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return rep.feasible ? kPass : kFail;
}

struct ReproduceArgs {
    std::string theorem, out = "out";
    bool print_config = false;
    std::size_t nx = 200, nt = 50;
};

int run_reproduce(const ReproduceArgs& a) {
    std::vector<std::string> ids;
    if (a.theorem == "all") ids = theorem_ids();
    else ids.push_back(a.theorem);
    int worst = kPass;
    for (const auto& id : ids) {
        if (a.print_config) {
            std::cout << to_json(theorem_config(id)).dump(2) << "\n";
            continue;
        }
        BarrierCheckOptions opt;
        opt.nx = a.nx;
        opt.nt = a.nt;
        const TheoremReport r = reproduce_theorem(id, opt);
        const fs::path dir = fs::path(a.out) / id;
        write_case(r.summary, dir);
        write_text(dir / "report.json", r.doc.dump(2) + "\n");
        json brief = {{"theorem", id}, {"pass", r.pass}, {"criteria", r.doc["criteria"]},
                      {"status", to_string(r.summary.result.status)}, {"dir", dir.string()}};
        if (r.summary.result.status == SolveStatus::BlowUp)
            brief["bracket"] = {r.summary.result.t_lo, r.summary.result.t_hi};
        std::cout << brief.dump() << "\n";
        worst = std::max(worst, r.exit_code());
    }
    return worst;
}

struct SweepArgs {
    std::string config, m, p, q, out = "out/sweep";
    unsigned jobs = 1;
};

int run_sweep(const SweepArgs& a) {
    const CaseConfig base = load_case(a.config);
    SweepAxes axes{parse_list(a.m, "--m"), parse_list(a.p, "--p"), parse_list(a.q, "--q")};
    const PhaseTable t = sweep(axes, base, a.jobs, fs::path(a.out) / "cells");
    write_text(fs::path(a.out) / "sweep.csv", sweep_csv(t));
    write_text(fs::path(a.out) / "sweep.json", to_json(t).dump(2) + "\n");
    std::cout << sweep_csv(t);
    for (const auto& c : t.cells)
        if (c.outcome == SolveStatus::NumericalFailure) return kNumeric;
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical lab for the weighted porous medium equation with reaction"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "solve one configured case");
    c_sim->add_option("--config", sim.config, "case configuration (JSON)")->required();
    c_sim->add_option("--t-end", sim.t_end, "final time");
    c_sim->add_option("--nx", sim.nx, "node count (odd)");
    c_sim->add_option("--delta", sim.delta, "boundary truncation");
    c_sim->add_option("--snapshot-every", sim.snapshot_every, "snapshot spacing in time");
    c_sim->add_option("--out", sim.out, "output directory");

    BarrierArgs bar;
    auto* c_bar = app.add_subcommand("barrier-check", "residual sign and interface checks of a barrier");
    c_bar->add_option("--config", bar.config, "case configuration with a barrier section")->required();
    c_bar->add_option("--nx", bar.nx, "spatial samples");
    c_bar->add_option("--nt", bar.nt, "time samples");
    c_bar->add_option("--tol", bar.tol, "relative sign tolerance");
    c_bar->add_option("--samples-csv", bar.samples_csv, "write residual samples (x,t,residual,bracket)");
    c_bar->add_option("--out", bar.out, "write the report to this file");

    FeasibleArgs fea;
    auto* c_fea = app.add_subcommand("feasible", "search barrier parameters satisfying the sufficient conditions");
    c_fea->add_option("--m", fea.m, "diffusion exponent")->required();
    c_fea->add_option("--p", fea.p, "reaction exponent")->required();
    c_fea->add_option("--q", fea.q, "density decay exponent")->required();
    c_fea->add_option("--c1", fea.c1, "lower density constant");
    c_fea->add_option("--c2", fea.c2, "upper density constant");
    c_fea->add_option("--R", fea.R, "half width");
    c_fea->add_option("--eps", fea.eps, "collar width");
    c_fea->add_option("--case", fea.blowup_case, "fast blow-up case: p>m | p<m | p=m");
    c_fea->add_option("--sign-mode", fea.sign_mode, "slow family: corrected | literal");
    c_fea->add_option("--orientation", fea.orientation, "super | sub");
    c_fea->add_option("--delta-exp", fea.delta_exp, "critical supersolution exponent");
    c_fea->add_option("--d-exp", fea.d_exp, "slow family exponent");
    c_fea->add_option("--bracket-sign", fea.bracket_sign, "fast supersolution bracket sign (1 or -1)");
    c_fea->add_option("--out", fea.out, "write the report to this file");

    ReproduceArgs rep;
    auto* c_rep = app.add_subcommand("reproduce", "run a theorem recipe and grade it");
    c_rep->add_option("--theorem", rep.theorem, "T2.1 .. T2.6 or all")->required();
    c_rep->add_option("--out", rep.out, "output root");
    c_rep->add_option("--nx", rep.nx, "barrier check spatial samples");
    c_rep->add_option("--nt", rep.nt, "barrier check time samples");
    c_rep->add_flag("--print-config", rep.print_config, "print the recipe configuration and exit");

    SweepArgs swp;
    auto* c_swp = app.add_subcommand("sweep", "phase table over (m, p, q)");
    c_swp->add_option("--config", swp.config, "base case configuration")->required();
    c_swp->add_option("--m", swp.m, "comma separated m values")->required();
    c_swp->add_option("--p", swp.p, "comma separated p values")->required();
    c_swp->add_option("--q", swp.q, "comma separated q values")->required();
    c_swp->add_option("--jobs", swp.jobs, "worker threads");
    c_swp->add_option("--out", swp.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kConfig;
    }

    try {
        if (c_sim->parsed()) return run_simulate(sim);
        if (c_bar->parsed()) return run_barrier_check(bar);
        if (c_fea->parsed()) return run_feasible(fea);
        if (c_rep->parsed()) return run_reproduce(rep);
        if (c_swp->parsed()) return run_sweep(swp);
    } catch (const Error& e) {
        print_error(e);
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "exception"}, {"message", e.what()}}.dump() << "\n";
        return kNumeric;
    }
    return kConfig;
}
