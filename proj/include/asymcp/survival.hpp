#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "asymcp/dynamics.hpp"
#include "asymcp/lattice.hpp"
#include "asymcp/params.hpp"
#include "asymcp/rng.hpp"
#include "asymcp/stats.hpp"

namespace asymcp {

enum class InitKind { Single1, Single2, All2, Bernoulli };

// Initial condition specification: a single infected site at the origin, a
// fully symptomatic lattice, or an i.i.d. product measure.
struct InitialCondition {
    InitKind kind = InitKind::Single1;
    double p1 = 0.0;  // Bernoulli only: P(state 1)
    double p2 = 0.0;  // Bernoulli only: P(state 2)

    void validate() const {
        if (kind == InitKind::Bernoulli) {
            if (!(p1 >= 0.0 && p2 >= 0.0 && p1 + p2 <= 1.0))
                throw std::domain_error("bernoulli initial condition needs p1, p2 >= 0 with p1 + p2 <= 1");
        }
    }
};

inline InitialCondition parse_init(const std::string& text, double p1 = 0.0, double p2 = 0.0) {
    if (text == "single1") return {InitKind::Single1, 0.0, 0.0};
    if (text == "single2") return {InitKind::Single2, 0.0, 0.0};
    if (text == "all2") return {InitKind::All2, 0.0, 0.0};
    if (text == "bernoulli") {
        InitialCondition ic{InitKind::Bernoulli, p1, p2};
        ic.validate();
        return ic;
    }
    throw std::domain_error("unknown initial condition: " + text);
}

inline const char* init_name(InitKind k) {
    switch (k) {
        case InitKind::Single1: return "single1";
        case InitKind::Single2: return "single2";
        case InitKind::All2: return "all2";
        default: return "bernoulli";
    }
}

// Builds the initial configuration; the seed only matters for the Bernoulli
// product measure (sub-stream 6 of the replica seed).
inline Configuration build_initial(const LatticeGeometry& g, const InitialCondition& ic,
                                   std::uint64_t seed) {
    ic.validate();
    Configuration cfg(g);
    switch (ic.kind) {
        case InitKind::Single1: cfg.states[0] = kAsymptomatic; break;
        case InitKind::Single2: cfg.states[0] = kSymptomatic; break;
        case InitKind::All2:
            for (auto& s : cfg.states) s = kSymptomatic;
            break;
        case InitKind::Bernoulli: {
            Rng rng(seed_for(seed, 6));
            for (auto& s : cfg.states) {
                double u = rng.uniform01();
                s = u < ic.p1 ? kAsymptomatic : u < ic.p1 + ic.p2 ? kSymptomatic : kHealthy;
            }
            break;
        }
    }
    return cfg;
}

struct SurvivalEstimate {
    std::uint64_t replicas = 0;
    std::uint64_t survived = 0;      // infected sites present at t_max
    double survival = 0.0;
    Interval survival_ci;
    double mean_density = 0.0;       // mean infected density at t_max
    Interval density_ci;
    std::vector<double> final_densities;
    std::vector<double> extinction_times;  // for replicas that died, in [0, t_max]
};

// Runs independent replicas and reports the survival fraction (infection
// still present at t_max) with a Wilson interval, plus the mean infected
// density at t_max.  Replica r of grid point g uses the seed stream
// (master, g, r), so results do not depend on the thread count.
inline SurvivalEstimate survival_estimate(const Params& params, const LatticeGeometry& g,
                                          const InitialCondition& ic, double t_max,
                                          std::uint64_t replicas, std::uint64_t master_seed,
                                          std::uint64_t point_index = 0, unsigned threads = 1) {
    params.validate();
    ic.validate();
    if (replicas == 0) throw std::invalid_argument("need at least one replica");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (threads == 0) threads = 1;

    std::vector<double> densities(replicas, 0.0);
    std::vector<char> alive(replicas, 0);
    std::vector<double> deaths(replicas, -1.0);

    auto run_one = [&](std::uint64_t rep) {
        std::uint64_t seed = seed_for(master_seed, point_index, rep);
        Configuration init = build_initial(g, ic, seed);
        // Sampling grid = {0, t_max}: only the endpoint matters here.
        Trajectory traj = run_ctmc(init, params, t_max, t_max, seed);
        const Sample& last = traj.samples.back();
        densities[rep] = last.dens.u1 + last.dens.u2;
        alive[rep] = (last.n1 + last.n2) > 0 ? 1 : 0;
        if (traj.extinction_time && *traj.extinction_time <= t_max)
            deaths[rep] = *traj.extinction_time;
    };

    if (threads <= 1) {
        for (std::uint64_t rep = 0; rep < replicas; ++rep) run_one(rep);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::uint64_t rep = next.fetch_add(1); rep < replicas; rep = next.fetch_add(1))
                    run_one(rep);
            });
        for (auto& th : pool) th.join();
    }

    SurvivalEstimate est;
    est.replicas = replicas;
    for (std::uint64_t rep = 0; rep < replicas; ++rep) {
        est.survived += alive[rep];
        est.final_densities.push_back(densities[rep]);
        if (deaths[rep] >= 0.0) est.extinction_times.push_back(deaths[rep]);
    }
    est.survival = static_cast<double>(est.survived) / static_cast<double>(replicas);
    est.survival_ci = wilson_interval(est.survived, replicas);
    MeanCi mc = mean_interval(est.final_densities);
    est.mean_density = mc.mean;
    est.density_ci = {mc.lo, mc.hi};
    return est;
}

enum class SweepDirection { Beta1, Beta2 };

struct BetaCBracket {
    double lo = 0.0;
    double hi = 0.0;
    double survival_lo = 0.0;  // estimate at the bracket ends
    double survival_hi = 0.0;
    int evaluations = 0;
};

// Bisects the survival estimate (as a function of beta1 or beta2, the other
// parameters fixed) against a threshold, shrinking [lo, hi] until its width
// is at most tol.  This is a finite-size, finite-horizon estimate of the
// phase boundary, not the infinite-lattice critical value.
inline BetaCBracket estimate_beta_c(SweepDirection dir, Params base, const LatticeGeometry& g,
                                    const InitialCondition& ic, double t_max, std::uint64_t replicas,
                                    std::uint64_t master_seed, double lo, double hi, double tol,
                                    double threshold = 0.5, unsigned threads = 1) {
    if (!(lo >= 0.0 && hi > lo)) throw std::invalid_argument("need 0 <= lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    BetaCBracket out;
    auto eval = [&](double value) {
        Params p = base;
        (dir == SweepDirection::Beta1 ? p.beta1 : p.beta2) = value;
        SurvivalEstimate est = survival_estimate(p, g, ic, t_max, replicas, master_seed,
                                                 static_cast<std::uint64_t>(out.evaluations), threads);
        ++out.evaluations;
        return est.survival;
    };
    out.survival_lo = eval(lo);
    out.survival_hi = eval(hi);
    if (out.survival_lo >= threshold)
        throw std::runtime_error("bracket lower end already survives at the threshold; lower it");
    if (out.survival_hi < threshold)
        throw std::runtime_error("bracket upper end does not survive at the threshold; raise it");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double s = eval(mid);
        if (s < threshold) {
            lo = mid;
            out.survival_lo = s;
        } else {
            hi = mid;
            out.survival_hi = s;
        }
    }
    out.lo = lo;
    out.hi = hi;
    return out;
}

}  // namespace asymcp
