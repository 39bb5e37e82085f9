#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymcp/event_stream.hpp"
#include "asymcp/lattice.hpp"
#include "asymcp/params.hpp"
#include "asymcp/rng.hpp"

namespace asymcp {

// Pair states of two coupled processes driven by shared randomness; the first
// digit is the state in the lower-parameter process xi, the second in the
// higher-parameter process xi'.  S is closed under the coupled dynamics, and
// membership in S is exactly the domination property: whenever xi is infected
// at a site, so is xi'.
enum class PairState : std::uint8_t { P00 = 0, P01, P02, P11, P12, P22 };

inline State pair_low(PairState p) {
    static constexpr State lo[6] = {0, 0, 0, 1, 1, 2};
    return lo[static_cast<int>(p)];
}

inline State pair_high(PairState p) {
    static constexpr State hi[6] = {0, 1, 2, 1, 2, 2};
    return hi[static_cast<int>(p)];
}

inline std::optional<PairState> pair_from_states(State lo, State hi) {
    for (int i = 0; i < 6; ++i) {
        auto p = static_cast<PairState>(i);
        if (pair_low(p) == lo && pair_high(p) == hi) return p;
    }
    return std::nullopt;
}

inline std::string pair_name(State lo, State hi) {
    return std::to_string(static_cast<int>(lo)) + std::to_string(static_cast<int>(hi));
}

inline std::string pair_name(PairState p) { return pair_name(pair_low(p), pair_high(p)); }

// Clock classes of the joint graphical representation.  Enumeration order is
// the deterministic tie-break order during replay.
enum class PairClock : std::uint8_t {
    SharedArrow = 0,  // acts as 1-arrow and 2-arrow on both processes
    Arrow1Prime = 1,  // 1-arrow on xi' only, 2-arrow on both
    Arrow2 = 2,       // 2-arrow on both
    Arrow2Prime = 3,  // 2-arrow on xi' only
    BlackDot = 4,     // dot on both
    WhiteDot = 5,     // dot on xi' only
    Cross = 6,        // recovery on both
};

inline const char* pair_clock_name(PairClock c) {
    switch (c) {
        case PairClock::SharedArrow: return "shared-arrow";
        case PairClock::Arrow1Prime: return "1'-arrow";
        case PairClock::Arrow2: return "2-arrow";
        case PairClock::Arrow2Prime: return "2'-arrow";
        case PairClock::BlackDot: return "black-dot";
        case PairClock::WhiteDot: return "white-dot";
        default: return "cross";
    }
}

// Which single-process arrow semantics a clock carries, per coordinate.
struct EdgeActs {
    bool as1_low, as2_low, as1_high, as2_high;
};

inline EdgeActs edge_acts(PairClock c) {
    switch (c) {
        case PairClock::SharedArrow: return {true, true, true, true};
        case PairClock::Arrow1Prime: return {false, true, true, true};
        case PairClock::Arrow2: return {false, true, false, true};
        case PairClock::Arrow2Prime: return {false, false, false, true};
        default: throw std::domain_error("not an edge clock");
    }
}

enum class CouplingKindTag { Beta1, Beta2, Gamma };

// A coupling of xi = (beta1, beta2, gamma) with a process xi' that dominates
// it in one parameter.  Orderings may hold with equality, which collapses the
// corresponding differential clock to rate zero.
struct CouplingKind {
    CouplingKindTag tag;
    double beta1, beta2, gamma;
    double primed;  // beta1', beta2', or gamma' depending on tag

    void validate() const {
        Params base{beta1, beta2, gamma, Variant::Standard};
        base.validate();
        if (!(primed >= 0.0)) throw std::domain_error("rates must be finite and nonnegative");
        switch (tag) {
            case CouplingKindTag::Beta1:
                if (!(beta1 <= primed && primed <= beta2))
                    throw std::domain_error("coupling requires beta1 <= beta1' <= beta2");
                break;
            case CouplingKindTag::Beta2:
                if (!(beta1 <= beta2 && beta2 <= primed))
                    throw std::domain_error("coupling requires beta1 <= beta2 <= beta2'");
                break;
            case CouplingKindTag::Gamma:
                if (!(beta1 <= beta2)) throw std::domain_error("coupling requires beta1 <= beta2");
                if (!(gamma <= primed)) throw std::domain_error("coupling requires gamma <= gamma'");
                break;
        }
    }

    Params low_params() const { return {beta1, beta2, gamma, Variant::Standard}; }

    Params high_params() const {
        switch (tag) {
            case CouplingKindTag::Beta1: return {primed, beta2, gamma, Variant::Standard};
            case CouplingKindTag::Beta2: return {beta1, primed, gamma, Variant::Standard};
            default: return {beta1, beta2, primed, Variant::Standard};
        }
    }

    std::vector<PairClock> edge_clocks() const {
        switch (tag) {
            case CouplingKindTag::Beta1:
                return {PairClock::SharedArrow, PairClock::Arrow1Prime, PairClock::Arrow2};
            case CouplingKindTag::Beta2:
                return {PairClock::SharedArrow, PairClock::Arrow2, PairClock::Arrow2Prime};
            default: return {PairClock::SharedArrow, PairClock::Arrow2};
        }
    }

    std::vector<PairClock> vertex_clocks() const {
        if (tag == CouplingKindTag::Gamma)
            return {PairClock::BlackDot, PairClock::WhiteDot, PairClock::Cross};
        return {PairClock::BlackDot, PairClock::Cross};
    }

    bool has_clock(PairClock c) const {
        for (PairClock e : edge_clocks())
            if (e == c) return true;
        for (PairClock v : vertex_clocks())
            if (v == c) return true;
        return false;
    }

    // Per-edge rates are divided by 2d; dots and crosses are per site.
    double clock_rate(PairClock c) const {
        switch (c) {
            case PairClock::SharedArrow: return beta1;
            case PairClock::Arrow1Prime: return primed - beta1;
            case PairClock::Arrow2: return tag == CouplingKindTag::Beta1 ? beta2 - primed : beta2 - beta1;
            case PairClock::Arrow2Prime: return primed - beta2;
            case PairClock::BlackDot: return gamma;
            case PairClock::WhiteDot: return primed - gamma;
            default: return 1.0;
        }
    }
};

inline CouplingKind make_beta1_coupling(double beta1, double beta1_primed, double beta2, double gamma) {
    CouplingKind k{CouplingKindTag::Beta1, beta1, beta2, gamma, beta1_primed};
    k.validate();
    return k;
}

inline CouplingKind make_beta2_coupling(double beta1, double beta2, double beta2_primed, double gamma) {
    CouplingKind k{CouplingKindTag::Beta2, beta1, beta2, gamma, beta2_primed};
    k.validate();
    return k;
}

inline CouplingKind make_gamma_coupling(double beta1, double beta2, double gamma, double gamma_primed) {
    CouplingKind k{CouplingKindTag::Gamma, beta1, beta2, gamma, gamma_primed};
    k.validate();
    return k;
}

namespace tables {

using P = PairState;
using Row = std::array<P, 6>;
using Edge = std::array<Row, 6>;
using Column = std::array<P, 6>;

// Row index: pair at the arrow's tail; column index: pair at the head; entry:
// the head pair after the arrow fires.  A head coordinate becomes 1 exactly
// when it is healthy and the clock lets the tail coordinate infect it.

// Arrows acting as 1-arrows and 2-arrows on both coordinates.
inline constexpr Edge kSharedArrow = {{
    {P::P00, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P11, P::P11, P::P12, P::P11, P::P12, P::P22},
    {P::P11, P::P11, P::P12, P::P11, P::P12, P::P22},
    {P::P11, P::P11, P::P12, P::P11, P::P12, P::P22},
}};

// 1-arrow on the second coordinate only, 2-arrow on both.
inline constexpr Edge kArrow1Prime = {{
    {P::P00, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P11, P::P11, P::P12, P::P11, P::P12, P::P22},
}};

// 2-arrow on both coordinates: only tails in state 2 infect.  Rows 01 and 11
// therefore leave the head untouched — a tail 1 acting here would inflate the
// asymptomatic infection rate of both marginals beyond beta1.
inline constexpr Edge kArrow2Both = {{
    {P::P00, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P00, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P00, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P11, P::P11, P::P12, P::P11, P::P12, P::P22},
}};

// 2-arrow on the second coordinate only.  Row 22 must leave the first
// coordinate unchanged (entry 01, not 11): if the first process could infect
// through this clock its symptomatic rate would be beta2' instead of beta2.
inline constexpr Edge kArrow2Prime = {{
    {P::P00, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P00, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P00, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
    {P::P01, P::P01, P::P02, P::P11, P::P12, P::P22},
}};

inline constexpr Column kBlackDot = {P::P00, P::P02, P::P02, P::P22, P::P22, P::P22};
inline constexpr Column kWhiteDot = {P::P00, P::P02, P::P02, P::P12, P::P12, P::P22};
inline constexpr Column kCross = {P::P00, P::P00, P::P00, P::P00, P::P00, P::P00};

inline const Edge& edge_table(PairClock c) {
    switch (c) {
        case PairClock::SharedArrow: return kSharedArrow;
        case PairClock::Arrow1Prime: return kArrow1Prime;
        case PairClock::Arrow2: return kArrow2Both;
        case PairClock::Arrow2Prime: return kArrow2Prime;
        default: throw std::domain_error("not an edge clock");
    }
}

inline const Column& vertex_table(PairClock c) {
    switch (c) {
        case PairClock::BlackDot: return kBlackDot;
        case PairClock::WhiteDot: return kWhiteDot;
        case PairClock::Cross: return kCross;
        default: throw std::domain_error("not a vertex clock");
    }
}

}  // namespace tables

// Single-process semantics used to regenerate the tables from the arrow rules.
inline State arrow_coordinate_rule(State tail, State head, bool as1, bool as2) {
    if (head == kHealthy && ((as1 && tail == kAsymptomatic) || (as2 && tail == kSymptomatic)))
        return kAsymptomatic;
    return head;
}

inline State dot_coordinate_rule(State s, bool acts) {
    return (acts && s == kAsymptomatic) ? kSymptomatic : s;
}

struct PairUpdate {
    PairState x_after;
    PairState y_after;  // meaningful for edge events only
};

// Exactly the embedded table entry: edge events update the head pair (y),
// vertex events update x and ignore y.
inline PairUpdate pair_transition(const CouplingKind& kind, PairClock clock, PairState x,
                                  std::optional<PairState> y = std::nullopt) {
    if (!kind.has_clock(clock)) throw std::domain_error("event type not defined for this coupling kind");
    if (clock == PairClock::BlackDot || clock == PairClock::WhiteDot || clock == PairClock::Cross) {
        return {tables::vertex_table(clock)[static_cast<int>(x)], y.value_or(PairState::P00)};
    }
    if (!y) throw std::domain_error("edge events need a head pair");
    PairState ny = tables::edge_table(clock)[static_cast<int>(x)][static_cast<int>(*y)];
    return {x, ny};
}

struct ClosureReport {
    int cells_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Exhaustive check of every (tail, head, clock) and (pair, vertex clock) cell:
// the embedded entry must lie in S (trivially true for the type, re-derived
// from raw digits anyway) and must project, coordinate by coordinate, to the
// single-process rule for the clocks that affect that coordinate.
inline ClosureReport verify_table_closure(const CouplingKind& kind) {
    ClosureReport rep;
    auto note = [&](const std::string& msg) { rep.violations.push_back(msg); };
    for (PairClock c : kind.edge_clocks()) {
        EdgeActs a = edge_acts(c);
        for (int xi = 0; xi < 6; ++xi) {
            for (int yi = 0; yi < 6; ++yi) {
                auto x = static_cast<PairState>(xi);
                auto y = static_cast<PairState>(yi);
                ++rep.cells_checked;
                PairState got = pair_transition(kind, c, x, y).y_after;
                State want_lo = arrow_coordinate_rule(pair_low(x), pair_low(y), a.as1_low, a.as2_low);
                State want_hi = arrow_coordinate_rule(pair_high(x), pair_high(y), a.as1_high, a.as2_high);
                if (!pair_from_states(want_lo, want_hi))
                    note(std::string(pair_clock_name(c)) + " tail " + pair_name(x) + " head " + pair_name(y) +
                         " leaves S: " + pair_name(want_lo, want_hi));
                else if (pair_low(got) != want_lo || pair_high(got) != want_hi)
                    note(std::string(pair_clock_name(c)) + " tail " + pair_name(x) + " head " + pair_name(y) +
                         " table says " + pair_name(got) + " but the arrow rules give " +
                         pair_name(want_lo, want_hi));
            }
        }
    }
    for (PairClock c : kind.vertex_clocks()) {
        bool lo_acts = (c == PairClock::BlackDot || c == PairClock::Cross);
        for (int xi = 0; xi < 6; ++xi) {
            auto x = static_cast<PairState>(xi);
            ++rep.cells_checked;
            PairState got = pair_transition(kind, c, x).x_after;
            State want_lo, want_hi;
            if (c == PairClock::Cross) {
                want_lo = kHealthy;
                want_hi = kHealthy;
            } else {
                want_lo = dot_coordinate_rule(pair_low(x), lo_acts);
                want_hi = dot_coordinate_rule(pair_high(x), true);
            }
            if (!pair_from_states(want_lo, want_hi))
                note(std::string(pair_clock_name(c)) + " at " + pair_name(x) +
                     " leaves S: " + pair_name(want_lo, want_hi));
            else if (pair_low(got) != want_lo || pair_high(got) != want_hi)
                note(std::string(pair_clock_name(c)) + " at " + pair_name(x) + " table says " + pair_name(got) +
                     " but the dot/cross rules give " + pair_name(want_lo, want_hi));
        }
    }
    return rep;
}

// Joint Poisson scaffold for a coupling kind.
struct CouplingStream {
    LatticeGeometry geom;
    double horizon;
    std::uint64_t seed;
    CouplingKind kind;
    std::vector<std::vector<double>> shared_arrows, arrows_1p, arrows_2, arrows_2p;  // per directed edge
    std::vector<std::vector<double>> black_dots, white_dots, crosses;                // per site

    CouplingStream(const LatticeGeometry& g, double T, std::uint64_t s, const CouplingKind& k)
        : geom(g), horizon(T), seed(s), kind(k) {
        std::size_t edges = static_cast<std::size_t>(g.site_count()) * g.degree();
        std::size_t sites = static_cast<std::size_t>(g.site_count());
        shared_arrows.resize(edges);
        arrows_1p.resize(edges);
        arrows_2.resize(edges);
        arrows_2p.resize(edges);
        black_dots.resize(sites);
        white_dots.resize(sites);
        crosses.resize(sites);
    }
};

inline CouplingStream sample_coupling_stream(const CouplingKind& kind, const LatticeGeometry& g,
                                             double horizon, std::uint64_t seed) {
    kind.validate();
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    CouplingStream cs(g, horizon, seed, kind);
    const double inv_degree = 1.0 / static_cast<double>(g.degree());
    auto edge_rate = [&](PairClock c) { return kind.has_clock(c) ? kind.clock_rate(c) * inv_degree : 0.0; };
    auto site_rate = [&](PairClock c) { return kind.has_clock(c) ? kind.clock_rate(c) : 0.0; };
    const std::size_t edges = cs.shared_arrows.size();
    for (std::size_t e = 0; e < edges; ++e) {
        Rng r0(seed_for(seed, 10, e));
        cs.shared_arrows[e] = poisson_times(edge_rate(PairClock::SharedArrow), horizon, r0);
        Rng r1(seed_for(seed, 11, e));
        cs.arrows_1p[e] = poisson_times(edge_rate(PairClock::Arrow1Prime), horizon, r1);
        Rng r2(seed_for(seed, 12, e));
        cs.arrows_2[e] = poisson_times(edge_rate(PairClock::Arrow2), horizon, r2);
        Rng r3(seed_for(seed, 13, e));
        cs.arrows_2p[e] = poisson_times(edge_rate(PairClock::Arrow2Prime), horizon, r3);
    }
    for (std::size_t x = 0; x < cs.black_dots.size(); ++x) {
        Rng rb(seed_for(seed, 20, x));
        cs.black_dots[x] = poisson_times(site_rate(PairClock::BlackDot), horizon, rb);
        Rng rw(seed_for(seed, 21, x));
        cs.white_dots[x] = poisson_times(site_rate(PairClock::WhiteDot), horizon, rw);
        Rng rc(seed_for(seed, 22, x));
        cs.crosses[x] = poisson_times(site_rate(PairClock::Cross), horizon, rc);
    }
    return cs;
}

struct PairConfiguration {
    LatticeGeometry geometry;
    std::vector<PairState> pairs;

    explicit PairConfiguration(const LatticeGeometry& g)
        : geometry(g), pairs(static_cast<std::size_t>(g.site_count()), PairState::P00) {}
};

inline PairConfiguration pair_from_shared(const Configuration& c) {
    PairConfiguration pc(c.geometry);
    for (std::size_t i = 0; i < c.states.size(); ++i) {
        State s = c.states[i];
        if (s > kSymptomatic) throw std::domain_error("invalid state in configuration");
        pc.pairs[i] = s == kHealthy ? PairState::P00 : s == kAsymptomatic ? PairState::P11 : PairState::P22;
    }
    return pc;
}

inline Configuration pair_project(const PairConfiguration& pc, bool high) {
    Configuration c(pc.geometry);
    for (std::size_t i = 0; i < pc.pairs.size(); ++i)
        c.states[i] = high ? pair_high(pc.pairs[i]) : pair_low(pc.pairs[i]);
    return c;
}

struct PairSample {
    double t;
    double u_inf_low;
    double u_inf_high;
    bool dominated;
};

struct PairTrajectory {
    std::vector<PairSample> samples;
    PairConfiguration final_pairs;
    std::uint64_t event_count = 0;

    explicit PairTrajectory(PairConfiguration pc) : final_pairs(std::move(pc)) {}
};

// Replays the joint scaffold over a pair configuration.  The dominated flag is
// recomputed honestly at every sample by scanning the lattice, even though
// closure of S makes it provably always true.
inline PairTrajectory coupled_run(const CouplingKind& kind, const Configuration& shared_init, double t_max,
                                  double sample_dt, std::uint64_t seed) {
    kind.validate();
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (!(sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be positive");
    CouplingStream cs = sample_coupling_stream(kind, shared_init.geometry, t_max, seed);
    NeighborTable table(cs.geom);
    const int degree = cs.geom.degree();
    PairConfiguration pc = pair_from_shared(shared_init);
    const double n = static_cast<double>(cs.geom.site_count());

    std::int64_t inf_low = 0, inf_high = 0;
    for (PairState p : pc.pairs) {
        inf_low += (pair_low(p) != kHealthy) ? 1 : 0;
        inf_high += (pair_high(p) != kHealthy) ? 1 : 0;
    }

    struct Cursor {
        double t;
        PairClock clock;
        std::size_t index;
        std::size_t pos;
    };
    struct Later {
        bool operator()(const Cursor& a, const Cursor& b) const {
            if (a.t != b.t) return a.t > b.t;
            if (a.clock != b.clock) return a.clock > b.clock;
            return a.index > b.index;
        }
    };
    std::priority_queue<Cursor, std::vector<Cursor>, Later> queue;
    auto lists_of = [&](PairClock c) -> const std::vector<std::vector<double>>& {
        switch (c) {
            case PairClock::SharedArrow: return cs.shared_arrows;
            case PairClock::Arrow1Prime: return cs.arrows_1p;
            case PairClock::Arrow2: return cs.arrows_2;
            case PairClock::Arrow2Prime: return cs.arrows_2p;
            case PairClock::BlackDot: return cs.black_dots;
            case PairClock::WhiteDot: return cs.white_dots;
            default: return cs.crosses;
        }
    };
    for (PairClock c :
         {PairClock::SharedArrow, PairClock::Arrow1Prime, PairClock::Arrow2, PairClock::Arrow2Prime,
          PairClock::BlackDot, PairClock::WhiteDot, PairClock::Cross}) {
        const auto& lists = lists_of(c);
        for (std::size_t i = 0; i < lists.size(); ++i)
            if (!lists[i].empty()) queue.push({lists[i][0], c, i, 0});
    }

    PairTrajectory traj(pc);
    std::int64_t k = 0;
    auto set_pair = [&](std::size_t i, PairState to) {
        PairState from = pc.pairs[i];
        pc.pairs[i] = to;
        inf_low += (pair_low(to) != kHealthy) - (pair_low(from) != kHealthy);
        inf_high += (pair_high(to) != kHealthy) - (pair_high(from) != kHealthy);
    };
    auto record = [&](double ts) {
        bool dominated = true;
        for (PairState p : pc.pairs)
            if (pair_low(p) != kHealthy && pair_high(p) == kHealthy) dominated = false;
        traj.samples.push_back({ts, static_cast<double>(inf_low) / n, static_cast<double>(inf_high) / n,
                                dominated});
    };
    auto emit_before = [&](double tcut) {
        for (double ts = static_cast<double>(k) * sample_dt; ts < tcut && ts <= t_max;
             ts = static_cast<double>(++k) * sample_dt)
            record(ts);
    };

    while (!queue.empty() && inf_high > 0) {
        Cursor cur = queue.top();
        queue.pop();
        emit_before(cur.t);
        if (cur.clock == PairClock::BlackDot || cur.clock == PairClock::WhiteDot ||
            cur.clock == PairClock::Cross) {
            PairState before = pc.pairs[cur.index];
            PairState after = pair_transition(kind, cur.clock, before).x_after;
            if (after != before) {
                set_pair(cur.index, after);
                ++traj.event_count;
            }
        } else {
            Site tail = static_cast<Site>(cur.index / static_cast<std::size_t>(degree));
            Site head = table.row(tail)[cur.index % static_cast<std::size_t>(degree)];
            auto hi = static_cast<std::size_t>(head);
            PairState before = pc.pairs[hi];
            PairState after =
                pair_transition(kind, cur.clock, pc.pairs[static_cast<std::size_t>(tail)], before).y_after;
            if (after != before) {
                set_pair(hi, after);
                ++traj.event_count;
            }
        }
        const auto& lists = lists_of(cur.clock);
        if (cur.pos + 1 < lists[cur.index].size())
            queue.push({lists[cur.index][cur.pos + 1], cur.clock, cur.index, cur.pos + 1});
    }
    emit_before(t_max + 1.0);
    if (traj.samples.empty() || traj.samples.back().t != t_max) record(t_max);
    traj.final_pairs = pc;
    return traj;
}

// The marginal event stream seen by one coordinate of the coupling: merging
// the joint clocks that act on that coordinate reproduces, class by class,
// independent Poisson streams with that marginal's own rates.
inline EventStream derive_marginal_stream(const CouplingStream& cs, bool high) {
    auto merge2 = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) out.push_back(a[i] <= b[j] ? a[i++] : b[j++]);
        while (i < a.size()) out.push_back(a[i++]);
        while (j < b.size()) out.push_back(b[j++]);
        return out;
    };
    EventStream es(cs.geom, cs.horizon, cs.seed);
    const std::size_t edges = cs.shared_arrows.size();
    for (std::size_t e = 0; e < edges; ++e) {
        // type-1 arrows: clocks with a 1-effect on this coordinate.  The
        // 1'-arrow list is empty unless the kind actually carries that clock.
        es.type1[e] = high ? merge2(cs.shared_arrows[e], cs.arrows_1p[e]) : cs.shared_arrows[e];
        // type-2 arrows: clocks with a 2-effect on this coordinate.
        std::vector<double> t2 = merge2(cs.shared_arrows[e], cs.arrows_1p[e]);
        t2 = merge2(t2, cs.arrows_2[e]);
        if (high) t2 = merge2(t2, cs.arrows_2p[e]);
        es.type2[e] = t2;
    }
    for (std::size_t x = 0; x < cs.black_dots.size(); ++x) {
        es.dots[x] = high ? merge2(cs.black_dots[x], cs.white_dots[x]) : cs.black_dots[x];
        es.crosses[x] = cs.crosses[x];
    }
    return es;
}

struct FailureDemo {
    std::vector<std::string> narrative;
    std::string bad_pair;
    bool left_s = false;
};

// Why the construction needs beta1 <= beta2: with beta1 > beta2 the scaffold
// must contain arrows through which only 1s infect, acting on both processes.
// Executing those rules from a legal shared start drives a head pair to 10,
// which lies outside S, so domination cannot be read off the pair states.
inline FailureDemo demonstrate_beta1_greater_failure() {
    FailureDemo demo;
    // Two coupled processes with beta1 > beta2' > beta2 would share: arrows
    // acting as 1+2 on both (rate beta2), 1-only arrows on both (rate
    // beta1 - beta2'), 2'-arrows on the second only, dots, crosses.
    // Extended pair states (lo, hi) without the S restriction:
    std::array<State, 4> lo{kSymptomatic, kHealthy, kAsymptomatic, kHealthy};
    std::array<State, 4> hi{kSymptomatic, kHealthy, kAsymptomatic, kHealthy};
    auto show = [&](int i) { return pair_name(lo[i], hi[i]); };
    demo.narrative.push_back("sites 0..3 start as pairs " + show(0) + " " + show(1) + " " + show(2) + " " +
                             show(3) + " (both processes equal)");

    // 2'-arrow 0 -> 1: only the second process infects through it.
    hi[1] = arrow_coordinate_rule(hi[0], hi[1], false, true);
    lo[1] = arrow_coordinate_rule(lo[0], lo[1], false, false);
    demo.narrative.push_back("2'-arrow 0 -> 1: site 1 becomes " + show(1));
    // black dot at site 1: 1 -> 2 on both.
    lo[1] = dot_coordinate_rule(lo[1], true);
    hi[1] = dot_coordinate_rule(hi[1], true);
    demo.narrative.push_back("dot at 1: site 1 becomes " + show(1));
    // shared arrow 2 -> 1: 1s and 2s infect on both.
    lo[1] = arrow_coordinate_rule(lo[2], lo[1], true, true);
    hi[1] = arrow_coordinate_rule(hi[2], hi[1], true, true);
    demo.narrative.push_back("shared arrow 2 -> 1: site 1 becomes " + show(1));
    // cross at site 0.
    lo[0] = kHealthy;
    hi[0] = kHealthy;
    demo.narrative.push_back("cross at 0: site 0 becomes " + show(0));
    // 1-only arrow 1 -> 0: the 1 in the first process infects, the 2 in the
    // second cannot.
    lo[0] = arrow_coordinate_rule(lo[1], lo[0], true, false);
    hi[0] = arrow_coordinate_rule(hi[1], hi[0], true, false);
    demo.narrative.push_back("1-only arrow 1 -> 0: site 0 becomes " + show(0));

    for (int i = 0; i < 4; ++i) {
        if (!pair_from_states(lo[i], hi[i])) {
            demo.bad_pair = show(i);
            demo.left_s = true;
        }
    }
    return demo;
}

}  // namespace asymcp
