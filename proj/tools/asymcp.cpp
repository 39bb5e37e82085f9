// Command-line front end: single simulations, parameter sweeps, mean-field
// analysis, bound reports, and coupling verification.
//
// Exit codes: 0 success; 2 invalid configuration; 3 coupling-breaks
// (domination violated, table check failed, or the deliberate failure demo);
// 4 I/O failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asymcp/asymcp.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace asymcp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCouplingBreaks = 3;
constexpr int kExitIo = 4;

struct SharedOpts {
    double beta1 = 1.0;
    double beta2 = 1.0;
    double gamma = 1.0;
    int dim = 1;
    int side = 100;
    double tmax = 100.0;
    double sample_dt = 1.0;
    std::uint64_t replicas = 100;
    std::uint64_t seed = 0;
    std::string out = ".";
    std::string variant = "standard";
    std::string init = "single1";
    double p1 = 0.01;
    double p2 = 0.01;
    unsigned threads = 1;
};

void add_shared(CLI::App* sub, SharedOpts& o) {
    sub->add_option("--beta1", o.beta1, "asymptomatic infection rate");
    sub->add_option("--beta2", o.beta2, "symptomatic infection rate");
    sub->add_option("--gamma", o.gamma, "rate of becoming symptomatic");
    sub->add_option("--dim", o.dim, "lattice dimension (1-3)");
    sub->add_option("--side", o.side, "torus side length");
    sub->add_option("--tmax", o.tmax, "time horizon");
    sub->add_option("--sample-dt", o.sample_dt, "sampling interval");
    sub->add_option("--replicas", o.replicas, "number of replicas");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--variant", o.variant, "model variant")
        ->check(CLI::IsMember({"standard", "forest-fire", "collapsed"}));
    sub->add_option("--init", o.init, "initial condition")
        ->check(CLI::IsMember({"single1", "single2", "all2", "bernoulli"}));
    sub->add_option("--p1", o.p1, "bernoulli initial P(state 1)");
    sub->add_option("--p2", o.p2, "bernoulli initial P(state 2)");
    sub->add_option("--threads", o.threads, "worker threads for replica runs");
}

Variant parse_variant(const std::string& v) {
    if (v == "standard") return Variant::Standard;
    if (v == "forest-fire") return Variant::ForestFire;
    if (v == "collapsed") return Variant::Collapsed;
    throw std::domain_error("unknown variant: " + v);
}

Params to_params(const SharedOpts& o) {
    Params p{o.beta1, o.beta2, o.gamma, parse_variant(o.variant)};
    p.validate();
    return p;
}

json shared_json(const SharedOpts& o, const char* subcommand) {
    json j;
    j["subcommand"] = subcommand;
    j["beta1"] = o.beta1;
    j["beta2"] = o.beta2;
    j["gamma"] = o.gamma;
    j["dim"] = o.dim;
    j["side"] = o.side;
    j["tmax"] = o.tmax;
    j["sample_dt"] = o.sample_dt;
    j["replicas"] = o.replicas;
    j["seed"] = o.seed;
    j["out"] = o.out;
    j["variant"] = o.variant;
    j["init"] = o.init;
    j["p1"] = o.p1;
    j["p2"] = o.p2;
    j["threads"] = o.threads;
    return j;
}

std::string out_path(const SharedOpts& o, const std::string& name) {
    fs::path dir(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + o.out);
    return (dir / name).string();
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << j.dump(2) << '\n';
    if (!f) throw IoError("write failed: " + path);
}

int run_simulate(const SharedOpts& o, bool snapshot) {
    if (snapshot && o.dim != 2) throw std::domain_error("--snapshot requires --dim 2");
    Params params = to_params(o);
    LatticeGeometry geom(o.dim, o.side);
    InitialCondition ic = parse_init(o.init, o.p1, o.p2);
    std::uint64_t run_seed = seed_for(o.seed, 0, 0);
    Configuration init = build_initial(geom, ic, run_seed);
    Trajectory traj = run_ctmc(init, params, o.tmax, o.sample_dt, run_seed);
    write_trajectory_csv(out_path(o, "trajectory.csv"), traj);
    if (snapshot) write_pgm(traj.final_config, out_path(o, "snapshot.pgm"));

    json j = shared_json(o, "simulate");
    j["event_count"] = traj.event_count;
    const Sample& last = traj.samples.back();
    j["final_u0"] = last.dens.u0;
    j["final_u1"] = last.dens.u1;
    j["final_u2"] = last.dens.u2;
    j["survived"] = (last.n1 + last.n2) > 0;
    if (traj.extinction_time)
        j["extinction_time"] = *traj.extinction_time;
    else
        j["extinction_time"] = nullptr;
    if (snapshot) j["snapshot"] = "snapshot.pgm";
    write_json(out_path(o, "summary.json"), j);
    return kExitOk;
}

int run_sweep(const SharedOpts& o, std::vector<double> grid1, std::vector<double> grid2,
              std::vector<double> gridg) {
    if (grid1.empty()) grid1 = {o.beta1};
    if (grid2.empty()) grid2 = {o.beta2};
    if (gridg.empty()) gridg = {o.gamma};
    LatticeGeometry geom(o.dim, o.side);
    InitialCondition ic = parse_init(o.init, o.p1, o.p2);
    Variant variant = parse_variant(o.variant);
    // Validate every grid point up front so a bad grid fails before any work.
    for (double b1 : grid1)
        for (double b2 : grid2)
            for (double gm : gridg) Params{b1, b2, gm, variant}.validate();

    const std::string csv_path = out_path(o, "sweep.csv");
    std::vector<std::pair<std::string, std::string>> done = completed_sweep_rows(csv_path);
    auto find_done = [&](const std::string& key) -> const std::string* {
        for (const auto& [k, line] : done)
            if (k == key) return &line;
        return nullptr;
    };

    std::vector<std::string> lines;
    std::uint64_t point = 0, computed = 0, resumed = 0;
    for (double b1 : grid1) {
        for (double b2 : grid2) {
            for (double gm : gridg) {
                std::string key = sweep_key(b1, b2, gm);
                if (const std::string* line = find_done(key)) {
                    lines.push_back(*line);
                    ++resumed;
                } else {
                    Params p{b1, b2, gm, variant};
                    SurvivalEstimate est = survival_estimate(p, geom, ic, o.tmax, o.replicas,
                                                             o.seed, point, o.threads);
                    lines.push_back(sweep_row(b1, b2, gm, est));
                    ++computed;
                    // Persist progress after every completed point so an
                    // interrupted sweep resumes here.
                    std::ofstream partial(csv_path);
                    if (!partial) throw IoError("cannot open for writing: " + csv_path);
                    partial << kSweepHeader << '\n';
                    for (const auto& l : lines) partial << l << '\n';
                }
                ++point;
            }
        }
    }
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot open for writing: " + csv_path);
    out << kSweepHeader << '\n';
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw IoError("write failed: " + csv_path);

    json j = shared_json(o, "sweep");
    j["beta1_grid"] = grid1;
    j["beta2_grid"] = grid2;
    j["gamma_grid"] = gridg;
    j["points"] = point;
    j["computed"] = computed;
    j["resumed"] = resumed;
    j["csv"] = "sweep.csv";
    write_json(out_path(o, "sweep_summary.json"), j);
    return kExitOk;
}

json fixed_point_json(const FixedPoint& fp) {
    json j;
    j["u1"] = fp.u.u1;
    j["u2"] = fp.u.u2;
    j["trace"] = fp.trace;
    j["det"] = fp.det;
    j["stability"] = fp.stability;
    return j;
}

int run_meanfield(const SharedOpts& o, double u1_0, double u2_0, double dt, std::size_t stride) {
    Params params{o.beta1, o.beta2, o.gamma, Variant::Standard};
    params.validate();
    FixedPointReport rep = fixed_points(params);
    OdeTrajectory traj = integrate({u1_0, u2_0}, params, o.tmax, dt);
    write_meanfield_csv(out_path(o, "meanfield.csv"), traj, stride);

    json j = shared_json(o, "meanfield");
    j["u1_0"] = u1_0;
    j["u2_0"] = u2_0;
    j["dt"] = dt;
    j["d1"] = rep.d1;
    j["d2"] = rep.d2;
    j["survival_condition"] = rep.survival;
    j["p0"] = fixed_point_json(rep.origin);
    if (rep.interior)
        j["p12"] = fixed_point_json(*rep.interior);
    else
        j["p12"] = nullptr;
    const MeanFieldState& fin = traj.points.back().u;
    j["final_u1"] = fin.u1;
    j["final_u2"] = fin.u2;
    j["converged"] = traj.converged;
    write_json(out_path(o, "meanfield_summary.json"), j);
    return kExitOk;
}

int run_bounds(const SharedOpts& o, int radius, double target, int perc_radius) {
    if (!(o.gamma >= 0.0)) throw std::domain_error("gamma must be nonnegative");
    double mu = gw_offspring_mean(o.dim, o.gamma);
    json j = shared_json(o, "bounds");
    j["mu"] = mu;
    j["subcritical"] = mu < 1.0;
    j["radius"] = radius;
    if (mu < 1.0) {
        j["radius_bound"] = gw_radius_bound(o.dim, o.gamma, radius);
        j["total_mean"] = gw_total_mean(o.dim, o.gamma);
        j["exterior_bound"] = exterior_path_bound(o.dim, o.gamma, radius);
    } else {
        j["radius_bound"] = "not applicable";
        j["total_mean"] = "not applicable";
        j["exterior_bound"] = "not applicable";
    }
    j["site_open_prob"] = site_open_prob(o.beta1, o.gamma, o.dim);
    j["target"] = target;
    j["beta_bar"] = beta_bar(o.gamma, o.dim, target);
    if (perc_radius > 0) {
        PercolationResult pr = percolation_mc(o.beta1, o.gamma, o.dim, perc_radius, o.replicas, o.seed);
        json p;
        p["radius"] = perc_radius;
        p["open_prob"] = pr.open_prob;
        p["estimate"] = pr.estimate;
        p["ci_lo"] = pr.ci.lo;
        p["ci_hi"] = pr.ci.hi;
        p["hits"] = pr.hits;
        p["replicas"] = pr.replicas;
        j["percolation"] = p;
    }
    write_json(out_path(o, "bounds.json"), j);
    return kExitOk;
}

CouplingKind make_kind(const std::string& kind, const SharedOpts& o, double b1p, double b2p,
                       double gp) {
    if (kind == "beta1") return make_beta1_coupling(o.beta1, b1p, o.beta2, o.gamma);
    if (kind == "beta2") return make_beta2_coupling(o.beta1, o.beta2, b2p, o.gamma);
    if (kind == "gamma") return make_gamma_coupling(o.beta1, o.beta2, o.gamma, gp);
    throw std::domain_error("unknown coupling kind: " + kind);
}

int run_couple_check_tables(const SharedOpts& o) {
    // The tables do not depend on the rates, only on the clock structure, so
    // representative parameter choices cover each kind exhaustively.
    struct Case {
        const char* name;
        CouplingKind kind;
    };
    std::vector<Case> cases{
        {"beta1", make_beta1_coupling(1.0, 1.5, 2.0, 1.0)},
        {"beta2", make_beta2_coupling(1.0, 2.0, 3.0, 1.0)},
        {"gamma", make_gamma_coupling(1.0, 2.0, 1.0, 2.0)},
    };
    json j = shared_json(o, "couple");
    j["mode"] = "check-tables";
    json kinds = json::array();
    int total_violations = 0;
    for (const Case& c : cases) {
        ClosureReport rep = verify_table_closure(c.kind);
        json k;
        k["kind"] = c.name;
        k["cells_checked"] = rep.cells_checked;
        k["violations"] = rep.violations;
        kinds.push_back(k);
        total_violations += static_cast<int>(rep.violations.size());
        std::printf("%s: %d cells checked, %zu violations\n", c.name, rep.cells_checked,
                    rep.violations.size());
    }
    j["kinds"] = kinds;
    j["total_violations"] = total_violations;
    write_json(out_path(o, "couple_summary.json"), j);
    return total_violations == 0 ? kExitOk : kExitCouplingBreaks;
}

int run_couple_demo(const SharedOpts& o) {
    FailureDemo demo = demonstrate_beta1_greater_failure();
    std::printf("why the coupling construction needs beta1 <= beta2:\n");
    for (const std::string& line : demo.narrative) std::printf("  %s\n", line.c_str());
    std::printf("pair %s is outside the ordered-pair space: domination cannot be maintained\n",
                demo.bad_pair.c_str());
    json j = shared_json(o, "couple");
    j["mode"] = "demo-failure";
    j["narrative"] = demo.narrative;
    j["bad_pair"] = demo.bad_pair;
    write_json(out_path(o, "couple_summary.json"), j);
    return demo.left_s ? kExitCouplingBreaks : kExitOk;
}

int run_couple(const SharedOpts& o, const std::string& kind_name, double b1p, double b2p, double gp,
               bool check_tables, bool demo_failure) {
    if (check_tables) return run_couple_check_tables(o);
    if (demo_failure) return run_couple_demo(o);
    CouplingKind kind = make_kind(kind_name, o, b1p, b2p, gp);
    ClosureReport closure = verify_table_closure(kind);
    LatticeGeometry geom(o.dim, o.side);
    InitialCondition ic = parse_init(o.init, o.p1, o.p2);
    Configuration init = build_initial(geom, ic, seed_for(o.seed, 0, 0));
    PairTrajectory traj = coupled_run(kind, init, o.tmax, o.sample_dt, seed_for(o.seed, 0, 0));
    write_pair_csv(out_path(o, "coupled.csv"), traj);

    bool all_dominated = true;
    for (const PairSample& s : traj.samples) all_dominated = all_dominated && s.dominated;

    json j = shared_json(o, "couple");
    j["mode"] = "run";
    j["kind"] = kind_name;
    j["beta1p"] = b1p;
    j["beta2p"] = b2p;
    j["gammap"] = gp;
    j["low_params"] = {{"beta1", kind.low_params().beta1},
                       {"beta2", kind.low_params().beta2},
                       {"gamma", kind.low_params().gamma}};
    j["high_params"] = {{"beta1", kind.high_params().beta1},
                        {"beta2", kind.high_params().beta2},
                        {"gamma", kind.high_params().gamma}};
    j["cells_checked"] = closure.cells_checked;
    j["table_violations"] = closure.violations;
    j["event_count"] = traj.event_count;
    j["samples"] = traj.samples.size();
    j["all_dominated"] = all_dominated;
    write_json(out_path(o, "couple_summary.json"), j);
    if (!closure.ok() || !all_dominated) return kExitCouplingBreaks;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-state epidemic process toolkit: exact simulation, coupling checks, "
                 "mean-field analysis, and survival bounds"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value config file; sections per subcommand; "
                                   "command-line flags override");

    SharedOpts so_sim, so_sweep, so_mf, so_bounds, so_couple;

    CLI::App* sim = app.add_subcommand("simulate", "run one trajectory and write CSV + summary");
    add_shared(sim, so_sim);
    bool snapshot = false;
    sim->add_flag("--snapshot", snapshot, "also write the final configuration as a PGM (dim 2)");

    CLI::App* sweep = app.add_subcommand("sweep", "survival estimates over a parameter grid");
    add_shared(sweep, so_sweep);
    std::vector<double> grid1, grid2, gridg;
    sweep->add_option("--beta1-grid", grid1, "comma-separated beta1 values")->delimiter(',');
    sweep->add_option("--beta2-grid", grid2, "comma-separated beta2 values")->delimiter(',');
    sweep->add_option("--gamma-grid", gridg, "comma-separated gamma values")->delimiter(',');

    CLI::App* mf = app.add_subcommand("meanfield", "fixed points, stability, and ODE integration");
    add_shared(mf, so_mf);
    double u1_0 = 0.01, u2_0 = 0.01, mf_dt = 1e-3;
    std::size_t stride = 100;
    mf->add_option("--u1", u1_0, "initial u1");
    mf->add_option("--u2", u2_0, "initial u2");
    mf->add_option("--dt", mf_dt, "integration step");
    mf->add_option("--csv-stride", stride, "write every Nth integration point");

    CLI::App* bounds = app.add_subcommand("bounds", "branching and percolation bound report");
    add_shared(bounds, so_bounds);
    int radius = 5, perc_radius = 0;
    double target = 0.875;
    bounds->add_option("--radius", radius, "radius for the branching bounds");
    bounds->add_option("--target", target, "target open-site probability for beta-bar");
    bounds->add_option("--perc-radius", perc_radius,
                       "box radius for the percolation Monte Carlo (0 = skip)");

    CLI::App* couple = app.add_subcommand("couple", "coupled pair runs and table verification");
    add_shared(couple, so_couple);
    std::string kind_name = "beta2";
    double b1p = 0.0, b2p = 0.0, gp = 0.0;
    bool check_tables = false, demo_failure = false;
    couple->add_option("--kind", kind_name, "coupling kind")
        ->check(CLI::IsMember({"beta1", "beta2", "gamma"}));
    couple->add_option("--beta1p", b1p, "beta1 of the dominating process (kind beta1)");
    couple->add_option("--beta2p", b2p, "beta2 of the dominating process (kind beta2)");
    couple->add_option("--gammap", gp, "gamma of the dominating process (kind gamma)");
    couple->add_flag("--check-tables", check_tables, "verify all transition tables and exit");
    couple->add_flag("--demo-failure", demo_failure,
                     "show why beta1 > beta2 breaks the construction; exits 3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed()) return run_simulate(so_sim, snapshot);
        if (sweep->parsed()) return run_sweep(so_sweep, grid1, grid2, gridg);
        if (mf->parsed()) return run_meanfield(so_mf, u1_0, u2_0, mf_dt, stride);
        if (bounds->parsed()) return run_bounds(so_bounds, radius, target, perc_radius);
        if (couple->parsed())
            return run_couple(so_couple, kind_name, b1p, b2p, gp, check_tables, demo_failure);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
