#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "asymcp/dynamics.hpp"
#include "asymcp/lattice.hpp"
#include "asymcp/params.hpp"
#include "asymcp/rng.hpp"

namespace asymcp {

// Clock classes of the space-time scaffold.  The numeric order doubles as the
// deterministic tie-break when several events carry the same floating-point
// time (impossible in exact arithmetic, but replay must not depend on heap
// internals).
enum class ClockType : std::uint8_t { Type1Arrow = 0, Type2Arrow = 1, Dot = 2, Cross = 3 };

// Pre-sampled Poisson clocks on a finite space-time window: per directed edge,
// arrival times of type-1 arrows (rate beta1/2d, only 1s infect through them)
// and type-2 arrows (rate beta2/2d, only 2s infect); per site, dots (rate
// gamma, 1 -> 2) and crosses (rate 1, any infected -> 0).  Directed edge index
// = tail * 2d + neighbor slot.
struct EventStream {
    LatticeGeometry geom;
    double horizon;
    std::uint64_t seed;
    std::vector<std::vector<double>> type1;    // size N * 2d
    std::vector<std::vector<double>> type2;    // size N * 2d
    std::vector<std::vector<double>> dots;     // size N
    std::vector<std::vector<double>> crosses;  // size N

    EventStream(const LatticeGeometry& g, double T, std::uint64_t s)
        : geom(g),
          horizon(T),
          seed(s),
          type1(static_cast<std::size_t>(g.site_count()) * g.degree()),
          type2(static_cast<std::size_t>(g.site_count()) * g.degree()),
          dots(static_cast<std::size_t>(g.site_count())),
          crosses(static_cast<std::size_t>(g.site_count())) {}
};

// Each substream gets its own engine derived from (seed, clock class, clock
// index), so streams are independent and a stream's times do not depend on
// the order in which the others are generated.
inline EventStream sample_event_stream(const LatticeGeometry& g, const Params& p, double horizon,
                                       std::uint64_t seed) {
    p.validate();
    if (p.variant == Variant::ForestFire)
        throw std::domain_error("event streams are defined for the standard and collapsed variants only");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    EventStream es(g, horizon, seed);
    const double inv_degree = 1.0 / static_cast<double>(g.degree());
    const std::size_t edges = es.type1.size();
    for (std::size_t e = 0; e < edges; ++e) {
        Rng r1(seed_for(seed, 1, e));
        es.type1[e] = poisson_times(p.beta1 * inv_degree, horizon, r1);
        Rng r2(seed_for(seed, 2, e));
        es.type2[e] = poisson_times(p.beta2 * inv_degree, horizon, r2);
    }
    for (std::size_t x = 0; x < es.dots.size(); ++x) {
        Rng rd(seed_for(seed, 3, x));
        es.dots[x] = poisson_times(p.gamma, horizon, rd);
        Rng rc(seed_for(seed, 4, x));
        es.crosses[x] = poisson_times(1.0, horizon, rc);
    }
    return es;
}

namespace detail {

struct StreamCursor {
    double t;
    ClockType type;
    std::size_t index;  // edge index for arrows, site index for dots/crosses
    std::size_t pos;
};

struct CursorLater {
    bool operator()(const StreamCursor& a, const StreamCursor& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.type != b.type) return a.type > b.type;
        return a.index > b.index;
    }
};

}  // namespace detail

// Deterministic replay of a pre-sampled stream.  Distributionally identical to
// run_ctmc with matching parameters; used as the exactness oracle and as the
// carrier of shared randomness for couplings.
inline Trajectory evolve_from_stream(const Configuration& init, const EventStream& es, Variant variant,
                                     double t_max, double sample_dt) {
    if (variant == Variant::ForestFire)
        throw std::domain_error("event streams are defined for the standard and collapsed variants only");
    if (init.geometry.site_count() != es.geom.site_count() || init.geometry.dim() != es.geom.dim())
        throw std::domain_error("configuration does not live on the stream's lattice");
    if (!(t_max > 0.0) || t_max > es.horizon)
        throw std::domain_error("replay horizon must lie inside the stream window");
    if (!(sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be positive");

    NeighborTable table(es.geom);
    const int degree = es.geom.degree();
    Configuration cfg = init;
    std::int64_t infected = 0, n1 = 0, n2 = 0;
    for (State s : cfg.states) {
        if (s > kSymptomatic) throw std::domain_error("invalid state in configuration");
        if (variant == Variant::Collapsed && s == kAsymptomatic)
            throw std::domain_error("collapsed variant has no state 1");
        infected += (s != kHealthy) ? 1 : 0;
        n1 += (s == kAsymptomatic) ? 1 : 0;
        n2 += (s == kSymptomatic) ? 1 : 0;
    }

    std::priority_queue<detail::StreamCursor, std::vector<detail::StreamCursor>, detail::CursorLater> queue;
    auto push_head = [&](const std::vector<std::vector<double>>& lists, ClockType type, std::size_t idx) {
        if (!lists[idx].empty()) queue.push({lists[idx][0], type, idx, 0});
    };
    for (std::size_t e = 0; e < es.type1.size(); ++e) {
        push_head(es.type1, ClockType::Type1Arrow, e);
        push_head(es.type2, ClockType::Type2Arrow, e);
    }
    for (std::size_t x = 0; x < es.dots.size(); ++x) {
        push_head(es.dots, ClockType::Dot, x);
        push_head(es.crosses, ClockType::Cross, x);
    }

    Trajectory traj(cfg);
    std::optional<double> extinction;
    if (infected == 0) extinction = 0.0;
    std::int64_t k = 0;
    auto record = [&](double ts) {
        double n = static_cast<double>(cfg.geometry.site_count());
        Density d;
        d.u0 = static_cast<double>(cfg.geometry.site_count() - n1 - n2) / n;
        d.u1 = static_cast<double>(n1) / n;
        d.u2 = 1.0 - d.u0 - d.u1;
        traj.samples.push_back({ts, d, n1, n2});
    };
    auto emit_before = [&](double tcut) {
        for (double ts = static_cast<double>(k) * sample_dt; ts < tcut && ts <= t_max;
             ts = static_cast<double>(++k) * sample_dt)
            record(ts);
    };
    auto set_state = [&](Site x, State to) {
        State from = cfg[x];
        cfg[x] = to;
        infected += (to != kHealthy) - (from != kHealthy);
        n1 += (to == kAsymptomatic) - (from == kAsymptomatic);
        n2 += (to == kSymptomatic) - (from == kSymptomatic);
    };

    while (!queue.empty() && infected > 0) {
        detail::StreamCursor cur = queue.top();
        queue.pop();
        if (cur.t > t_max) break;
        emit_before(cur.t);
        switch (cur.type) {
            case ClockType::Type1Arrow: {
                Site tail = static_cast<Site>(cur.index / static_cast<std::size_t>(degree));
                Site head = table.row(tail)[cur.index % static_cast<std::size_t>(degree)];
                if (cfg[tail] == kAsymptomatic && cfg[head] == kHealthy) {
                    set_state(head, kAsymptomatic);
                    ++traj.event_count;
                }
                break;
            }
            case ClockType::Type2Arrow: {
                Site tail = static_cast<Site>(cur.index / static_cast<std::size_t>(degree));
                Site head = table.row(tail)[cur.index % static_cast<std::size_t>(degree)];
                if (cfg[tail] == kSymptomatic && cfg[head] == kHealthy) {
                    set_state(head, variant == Variant::Collapsed ? kSymptomatic : kAsymptomatic);
                    ++traj.event_count;
                }
                break;
            }
            case ClockType::Dot: {
                Site x = static_cast<Site>(cur.index);
                if (cfg[x] == kAsymptomatic) {
                    set_state(x, kSymptomatic);
                    ++traj.event_count;
                }
                break;
            }
            case ClockType::Cross: {
                Site x = static_cast<Site>(cur.index);
                if (cfg[x] != kHealthy) {
                    set_state(x, kHealthy);
                    ++traj.event_count;
                    if (infected == 0 && !extinction) extinction = cur.t;
                }
                break;
            }
        }
        const std::vector<std::vector<double>>* lists =
            cur.type == ClockType::Type1Arrow   ? &es.type1
            : cur.type == ClockType::Type2Arrow ? &es.type2
            : cur.type == ClockType::Dot        ? &es.dots
                                                : &es.crosses;
        if (cur.pos + 1 < (*lists)[cur.index].size())
            queue.push({(*lists)[cur.index][cur.pos + 1], cur.type, cur.index, cur.pos + 1});
    }
    emit_before(t_max + 1.0);
    if (traj.samples.empty() || traj.samples.back().t != t_max) record(t_max);
    traj.final_config = cfg;
    traj.extinction_time = extinction;
    return traj;
}

inline Trajectory evolve_from_stream(const Configuration& init, const EventStream& es, Variant variant) {
    return evolve_from_stream(init, es, variant, es.horizon, 1.0);
}

}  // namespace asymcp
