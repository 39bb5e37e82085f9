#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "asymcp/lattice.hpp"
#include "asymcp/params.hpp"
#include "asymcp/rate_tree.hpp"
#include "asymcp/rng.hpp"

namespace asymcp {

struct RateEntry {
    State target;
    double rate;
};

struct LocalRates {
    std::array<RateEntry, 2> entry{};
    int count = 0;
};

// Total transition rate of a site given its state and infected-neighbor
// counts.  Every rate used by the simulator is computed through this one
// function so that incremental bookkeeping and from-scratch recomputation
// agree bit for bit.
inline double site_rate(State s, int c1, int c2, const Params& p, double inv_degree) {
    switch (p.variant) {
        case Variant::Standard:
            if (s == kHealthy) return (p.beta1 * c1 + p.beta2 * c2) * inv_degree;
            if (s == kAsymptomatic) return p.gamma + 1.0;
            return 1.0;
        case Variant::ForestFire:
            if (s == kHealthy) return p.beta1 * c1 * inv_degree;
            if (s == kAsymptomatic) return 1.0 + p.gamma;
            return 1.0;
        default:  // Collapsed
            if (s == kHealthy) return p.beta2 * c2 * inv_degree;
            return 1.0;
    }
}

// The per-site transition menu (target state, rate), from the configuration.
inline LocalRates local_rates(Site x, const Configuration& c, const Params& p) {
    p.validate();
    c.geometry.check_site(x);
    int c1 = 0, c2 = 0;
    for (Site y : c.geometry.neighbors(x)) {
        c1 += (c[y] == kAsymptomatic) ? 1 : 0;
        c2 += (c[y] == kSymptomatic) ? 1 : 0;
    }
    double inv_degree = 1.0 / static_cast<double>(c.geometry.degree());
    LocalRates lr;
    State s = c[x];
    switch (p.variant) {
        case Variant::Standard:
            if (s == kHealthy) {
                lr.entry[0] = {kAsymptomatic, (p.beta1 * c1 + p.beta2 * c2) * inv_degree};
                lr.count = 1;
            } else if (s == kAsymptomatic) {
                lr.entry[0] = {kSymptomatic, p.gamma};
                lr.entry[1] = {kHealthy, 1.0};
                lr.count = 2;
            } else {
                lr.entry[0] = {kHealthy, 1.0};
                lr.count = 1;
            }
            break;
        case Variant::ForestFire:
            if (s == kHealthy) {
                lr.entry[0] = {kAsymptomatic, p.beta1 * c1 * inv_degree};
                lr.count = 1;
            } else if (s == kAsymptomatic) {
                lr.entry[0] = {kSymptomatic, 1.0 + p.gamma};
                lr.count = 1;
            } else {
                lr.entry[0] = {kHealthy, 1.0};
                lr.count = 1;
            }
            break;
        default:  // Collapsed
            if (s == kAsymptomatic) throw std::domain_error("collapsed variant has no state 1");
            if (s == kHealthy) {
                lr.entry[0] = {kSymptomatic, p.beta2 * c2 * inv_degree};
                lr.count = 1;
            } else {
                lr.entry[0] = {kHealthy, 1.0};
                lr.count = 1;
            }
            break;
    }
    return lr;
}

struct Event {
    double t;
    Site site;
    State from;
    State to;
};

struct Sample {
    double t;
    Density dens;
    std::int64_t n1;
    std::int64_t n2;
};

struct Trajectory {
    std::vector<Sample> samples;
    Configuration final_config;
    std::optional<double> extinction_time;
    bool halted = false;          // an observer requested an early stop
    std::uint64_t event_count = 0;

    explicit Trajectory(Configuration c) : final_config(std::move(c)) {}
};

// Exact event-driven continuous-time simulation (rejection-free direct
// method).  Per event: one exponential jump with the total rate, one
// tree-guided site pick proportional to the site's rate, one transition.
class CtmcSimulator {
  public:
    CtmcSimulator(Configuration init, const Params& p, std::uint64_t seed)
        : params_(p),
          table_(init.geometry),
          cfg_(std::move(init)),
          inv_degree_(1.0 / static_cast<double>(cfg_.geometry.degree())),
          n1cnt_(cfg_.states.size(), 0),
          n2cnt_(cfg_.states.size(), 0),
          tree_(cfg_.states.size()),
          rng_(seed) {
        params_.validate();
        const std::int64_t n = cfg_.geometry.site_count();
        for (Site x = 0; x < n; ++x) {
            State s = cfg_[x];
            if (s > kSymptomatic) throw std::domain_error("invalid state in configuration");
            if (params_.variant == Variant::Collapsed && s == kAsymptomatic)
                throw std::domain_error("collapsed variant has no state 1");
            if (s != kHealthy) ++infected_;
            n1_ += (s == kAsymptomatic) ? 1 : 0;
            n2_ += (s == kSymptomatic) ? 1 : 0;
            const Site* row = table_.row(x);
            for (int k = 0; k < table_.degree(); ++k) {
                State sy = cfg_[row[k]];
                n1cnt_[static_cast<std::size_t>(x)] += (sy == kAsymptomatic) ? 1 : 0;
                n2cnt_[static_cast<std::size_t>(x)] += (sy == kSymptomatic) ? 1 : 0;
            }
        }
        for (Site x = 0; x < n; ++x) tree_.set(static_cast<std::size_t>(x), rate_of(x));
    }

    double time() const { return t_; }
    std::int64_t infected() const { return infected_; }
    const Configuration& configuration() const { return cfg_; }

    template <typename Observer>
    Trajectory run(double t_max, double sample_dt, Observer&& observe) {
        if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
        if (!(sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be positive");
        Trajectory traj(cfg_);
        std::int64_t k = 0;
        if (infected_ == 0) extinction_ = t_;

        auto record = [&](double ts) {
            double n = static_cast<double>(cfg_.geometry.site_count());
            Density d;
            d.u0 = static_cast<double>(cfg_.geometry.site_count() - n1_ - n2_) / n;
            d.u1 = static_cast<double>(n1_) / n;
            d.u2 = 1.0 - d.u0 - d.u1;
            traj.samples.push_back({ts, d, n1_, n2_});
        };
        // Emit pending grid samples strictly before the next state change.
        auto emit_before = [&](double tcut) {
            for (double ts = static_cast<double>(k) * sample_dt; ts < tcut && ts <= t_max;
                 ts = static_cast<double>(++k) * sample_dt)
                record(ts);
        };

        while (true) {
            double total = tree_.total();
            if (total <= 0.0) {
                emit_before(t_max + 1.0);
                t_ = t_max;
                break;
            }
            double dt = rng_.exponential(total);
            double t_next = t_ + dt;
            if (t_next > t_max) {
                emit_before(t_max + 1.0);
                t_ = t_max;
                break;
            }
            emit_before(t_next);
            Event ev = apply_event(t_next);
            ++traj.event_count;
            if (infected_ == 0 && !extinction_) extinction_ = t_;
            if (!observe(ev)) {
                traj.halted = true;
                break;
            }
        }
        if (!traj.halted && (traj.samples.empty() || traj.samples.back().t != t_max)) record(t_max);
        traj.final_config = cfg_;
        traj.extinction_time = extinction_;
        return traj;
    }

    Trajectory run(double t_max, double sample_dt) {
        return run(t_max, sample_dt, [](const Event&) { return true; });
    }

    // From-scratch recomputation of every neighbor count, site rate, and tree
    // node must reproduce the incrementally maintained values bit for bit.
    bool rates_consistent() const {
        const std::int64_t n = cfg_.geometry.site_count();
        for (Site x = 0; x < n; ++x) {
            int c1 = 0, c2 = 0;
            const Site* row = table_.row(x);
            for (int k = 0; k < table_.degree(); ++k) {
                c1 += (cfg_[row[k]] == kAsymptomatic) ? 1 : 0;
                c2 += (cfg_[row[k]] == kSymptomatic) ? 1 : 0;
            }
            if (c1 != n1cnt_[static_cast<std::size_t>(x)] || c2 != n2cnt_[static_cast<std::size_t>(x)])
                return false;
            double r = site_rate(cfg_[x], c1, c2, params_, inv_degree_);
            if (r != tree_.get(static_cast<std::size_t>(x))) return false;
        }
        const auto& nodes = tree_.nodes();
        for (std::size_t v = 1; v < nodes.size() / 2; ++v)
            if (nodes[v] != nodes[2 * v] + nodes[2 * v + 1]) return false;
        std::int64_t inf = 0;
        for (State s : cfg_.states) inf += (s != kHealthy) ? 1 : 0;
        return inf == infected_;
    }

  private:
    double rate_of(Site x) const {
        return site_rate(cfg_[x], n1cnt_[static_cast<std::size_t>(x)], n2cnt_[static_cast<std::size_t>(x)],
                         params_, inv_degree_);
    }

    Event apply_event(double t_event) {
        double total = tree_.total();
        Site x = static_cast<Site>(tree_.sample(rng_.uniform01() * total));
        State from = cfg_[x];
        State to;
        switch (params_.variant) {
            case Variant::Standard:
                if (from == kHealthy)
                    to = kAsymptomatic;
                else if (from == kAsymptomatic)
                    to = (rng_.uniform01() * (1.0 + params_.gamma) < params_.gamma) ? kSymptomatic : kHealthy;
                else
                    to = kHealthy;
                break;
            case Variant::ForestFire:
                to = (from == kHealthy) ? kAsymptomatic : (from == kAsymptomatic) ? kSymptomatic : kHealthy;
                break;
            default:  // Collapsed
                to = (from == kHealthy) ? kSymptomatic : kHealthy;
                break;
        }
        set_state(x, from, to);
        t_ = t_event;
        return {t_event, x, from, to};
    }

    void set_state(Site x, State from, State to) {
        cfg_[x] = to;
        if (from == kHealthy && to != kHealthy) ++infected_;
        if (from != kHealthy && to == kHealthy) --infected_;
        n1_ += (to == kAsymptomatic) - (from == kAsymptomatic);
        n2_ += (to == kSymptomatic) - (from == kSymptomatic);
        const Site* row = table_.row(x);
        for (int k = 0; k < table_.degree(); ++k) {
            Site y = row[k];
            auto yi = static_cast<std::size_t>(y);
            n1cnt_[yi] += (to == kAsymptomatic) - (from == kAsymptomatic);
            n2cnt_[yi] += (to == kSymptomatic) - (from == kSymptomatic);
            double r = rate_of(y);
            if (r != tree_.get(yi)) tree_.set(yi, r);
        }
        tree_.set(static_cast<std::size_t>(x), rate_of(x));
    }

    Params params_;
    NeighborTable table_;
    Configuration cfg_;
    double inv_degree_;
    std::vector<int> n1cnt_, n2cnt_;
    SumTree tree_;
    Rng rng_;
    double t_ = 0.0;
    std::int64_t infected_ = 0;
    std::int64_t n1_ = 0, n2_ = 0;
    std::optional<double> extinction_ = std::nullopt;
};

inline Trajectory run_ctmc(const Configuration& init, const Params& p, double t_max, double sample_dt,
                           std::uint64_t seed) {
    CtmcSimulator sim(init, p, seed);
    return sim.run(t_max, sample_dt);
}

}  // namespace asymcp
