#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "asymcp/event_stream.hpp"
#include "asymcp/stats.hpp"

using namespace asymcp;

namespace {

// d = 1, side 3; directed edge index = tail * 2 + slot, slot 0 = left
// neighbor, slot 1 = right neighbor.
EventStream empty_stream(double horizon = 1.0) {
    return EventStream(LatticeGeometry(1, 3), horizon, 0);
}

Configuration config3(State a, State b, State c) {
    LatticeGeometry g(1, 3);
    Configuration cfg(g);
    cfg[0] = a;
    cfg[1] = b;
    cfg[2] = c;
    return cfg;
}

}  // namespace

TEST_CASE("sampled clock counts match their Poisson intensities") {
    LatticeGeometry g(1, 3);
    Params p{6.0, 4.0, 2.0, Variant::Standard};
    const int m = 2000;
    double sum1 = 0.0, sum2 = 0.0, sumd = 0.0, sumc = 0.0;
    for (int i = 0; i < m; ++i) {
        EventStream es = sample_event_stream(g, p, 1.0, static_cast<std::uint64_t>(i));
        for (const auto& v : es.type1) {
            sum1 += static_cast<double>(v.size());
            REQUIRE(std::is_sorted(v.begin(), v.end()));
            for (double t : v) {
                REQUIRE(t > 0.0);
                REQUIRE(t < 1.0);
            }
        }
        for (const auto& v : es.type2) sum2 += static_cast<double>(v.size());
        for (const auto& v : es.dots) sumd += static_cast<double>(v.size());
        for (const auto& v : es.crosses) sumc += static_cast<double>(v.size());
    }
    // 6 directed edges at rate beta/2, 3 sites at rates gamma and 1.
    auto check = [&](double total, double mean) {
        REQUIRE(std::abs(total / m - mean) < 3.0 * std::sqrt(mean / m));
    };
    check(sum1, 6.0 * 3.0);   // beta1/2 = 3 per edge
    check(sum2, 6.0 * 2.0);   // beta2/2 = 2 per edge
    check(sumd, 3.0 * 2.0);   // gamma per site
    check(sumc, 3.0 * 1.0);   // rate 1 per site
}

TEST_CASE("streams are reproducible and substreams are independent") {
    LatticeGeometry g(1, 5);
    Params p{3.0, 2.0, 1.0, Variant::Standard};
    EventStream a = sample_event_stream(g, p, 4.0, 99);
    EventStream b = sample_event_stream(g, p, 4.0, 99);
    REQUIRE(a.type1 == b.type1);
    REQUIRE(a.type2 == b.type2);
    REQUIRE(a.dots == b.dots);
    REQUIRE(a.crosses == b.crosses);
    EventStream c = sample_event_stream(g, p, 4.0, 100);
    REQUIRE(a.type1 != c.type1);
    // Changing beta2 must not disturb the type-1, dot, or cross substreams.
    EventStream d = sample_event_stream(g, {3.0, 0.5, 1.0, Variant::Standard}, 4.0, 99);
    REQUIRE(a.type1 == d.type1);
    REQUIRE(a.dots == d.dots);
    REQUIRE(a.crosses == d.crosses);
    REQUIRE(a.type2 != d.type2);
}

TEST_CASE("type-1 arrows spread only from asymptomatic sites") {
    EventStream es = empty_stream();
    es.type1[1 * 2 + 1] = {0.5};  // site 1 -> site 2
    Trajectory traj = evolve_from_stream(config3(kHealthy, kAsymptomatic, kHealthy), es,
                                         Variant::Standard, 1.0, 1.0);
    REQUIRE(traj.event_count == 1);
    REQUIRE(traj.final_config[2] == kAsymptomatic);

    // The same arrow does nothing when the tail is symptomatic or healthy.
    Trajectory none = evolve_from_stream(config3(kHealthy, kSymptomatic, kHealthy), es,
                                         Variant::Standard, 1.0, 1.0);
    REQUIRE(none.event_count == 0);
    REQUIRE(none.final_config[2] == kHealthy);
}

TEST_CASE("type-2 arrows fire after the tail turns symptomatic") {
    EventStream es = empty_stream();
    es.dots[1] = {0.3};
    es.type2[1 * 2 + 1] = {0.2, 0.4};  // first arrival too early, second lands
    Trajectory traj = evolve_from_stream(config3(kHealthy, kAsymptomatic, kHealthy), es,
                                         Variant::Standard, 1.0, 1.0);
    // Dot turns site 1 symptomatic at 0.3; the 0.4 arrow then infects site 2
    // into state 1 under the standard variant.
    REQUIRE(traj.event_count == 2);
    REQUIRE(traj.final_config[1] == kSymptomatic);
    REQUIRE(traj.final_config[2] == kAsymptomatic);
}

TEST_CASE("collapsed replay sends type-2 infections straight to state 2") {
    EventStream es = empty_stream();
    es.type1[0 * 2 + 1] = {0.2};  // must never fire: no site is ever in state 1
    es.dots[0] = {0.3};           // must never fire either
    es.type2[0 * 2 + 1] = {0.5};
    Trajectory traj = evolve_from_stream(config3(kSymptomatic, kHealthy, kHealthy), es,
                                         Variant::Collapsed, 1.0, 1.0);
    REQUIRE(traj.event_count == 1);
    REQUIRE(traj.final_config[0] == kSymptomatic);
    REQUIRE(traj.final_config[1] == kSymptomatic);
    REQUIRE(traj.final_config[2] == kHealthy);
}

TEST_CASE("crosses recover infected sites and set the extinction time") {
    EventStream es = empty_stream();
    es.crosses[1] = {0.75};
    Trajectory traj = evolve_from_stream(config3(kHealthy, kSymptomatic, kHealthy), es,
                                         Variant::Standard, 1.0, 1.0);
    REQUIRE(traj.event_count == 1);
    REQUIRE(traj.extinction_time.has_value());
    REQUIRE(*traj.extinction_time == 0.75);
    // A cross on a healthy site is a no-op.
    EventStream noop = empty_stream();
    noop.crosses[0] = {0.1};
    Trajectory t2 = evolve_from_stream(config3(kHealthy, kSymptomatic, kHealthy), noop,
                                       Variant::Standard, 1.0, 1.0);
    REQUIRE(t2.event_count == 0);
    REQUIRE_FALSE(t2.extinction_time.has_value());
}

TEST_CASE("simultaneous events follow the fixed clock-class order") {
    // An arrow and a cross share t = 0.5 at the arrow's tail.  Arrows rank
    // before crosses, so the infection escapes just before the tail recovers.
    EventStream es = empty_stream();
    es.type1[1 * 2 + 1] = {0.5};
    es.crosses[1] = {0.5};
    Trajectory traj = evolve_from_stream(config3(kHealthy, kAsymptomatic, kHealthy), es,
                                         Variant::Standard, 1.0, 1.0);
    REQUIRE(traj.event_count == 2);
    REQUIRE(traj.final_config[1] == kHealthy);
    REQUIRE(traj.final_config[2] == kAsymptomatic);

    // A dot and a cross at the same site and time: the dot acts first, so the
    // site passes through state 2 before recovering (two events, not one).
    EventStream es2 = empty_stream();
    es2.dots[1] = {0.25};
    es2.crosses[1] = {0.25};
    Trajectory t2 = evolve_from_stream(config3(kHealthy, kAsymptomatic, kHealthy), es2,
                                       Variant::Standard, 1.0, 1.0);
    REQUIRE(t2.event_count == 2);
    REQUIRE(t2.final_config[1] == kHealthy);
    REQUIRE(*t2.extinction_time == 0.25);
}

TEST_CASE("samples are right-continuous at event times") {
    EventStream es = empty_stream();
    es.crosses[1] = {0.5};
    Trajectory traj = evolve_from_stream(config3(kHealthy, kAsymptomatic, kHealthy), es,
                                         Variant::Standard, 1.0, 0.5);
    REQUIRE(traj.samples.size() == 3);
    REQUIRE(traj.samples[0].t == 0.0);
    REQUIRE(traj.samples[0].n1 == 1);
    REQUIRE(traj.samples[1].t == 0.5);
    REQUIRE(traj.samples[1].n1 == 0);  // state just after the cross
    REQUIRE(traj.samples[2].t == 1.0);
}

TEST_CASE("stream construction and replay reject invalid requests") {
    LatticeGeometry g(1, 3);
    REQUIRE_THROWS_AS(sample_event_stream(g, {2.0, 0.0, 1.0, Variant::ForestFire}, 1.0, 0),
                      std::domain_error);
    REQUIRE_THROWS_AS(sample_event_stream(g, {2.0, 1.0, 1.0, Variant::Standard}, 0.0, 0),
                      std::invalid_argument);
    EventStream es = empty_stream(1.0);
    Configuration cfg = config3(kHealthy, kAsymptomatic, kHealthy);
    REQUIRE_THROWS_AS(evolve_from_stream(cfg, es, Variant::ForestFire, 1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(evolve_from_stream(cfg, es, Variant::Standard, 2.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(evolve_from_stream(cfg, es, Variant::Collapsed, 1.0, 1.0), std::domain_error);
    Configuration wrong(LatticeGeometry(1, 4));
    REQUIRE_THROWS_AS(evolve_from_stream(wrong, es, Variant::Standard, 1.0, 1.0), std::domain_error);
}

TEST_CASE("replay and the direct simulation agree in distribution") {
    // Same law, two implementations: compare censored extinction times with a
    // two-sample Kolmogorov-Smirnov test at alpha = 0.01 plus a binomial check
    // on the censoring probability itself.
    LatticeGeometry g(1, 20);
    Params p{2.0, 2.0, 1.0, Variant::Standard};
    const double t_max = 30.0;
    const int n = 8000;
    std::vector<double> direct_times, replay_times;
    int direct_ext = 0, replay_ext = 0;
    for (int i = 0; i < n; ++i) {
        Configuration init(g);
        init[10] = kAsymptomatic;
        Trajectory td = run_ctmc(init, p, t_max, t_max, seed_for(500, i));
        if (td.extinction_time) {
            ++direct_ext;
            direct_times.push_back(*td.extinction_time);
        }
        EventStream es = sample_event_stream(g, p, t_max, seed_for(501, i));
        Trajectory tr = evolve_from_stream(init, es, Variant::Standard, t_max, t_max);
        if (tr.extinction_time) {
            ++replay_ext;
            replay_times.push_back(*tr.extinction_time);
        }
    }
    double pa = static_cast<double>(direct_ext) / n;
    double pb = static_cast<double>(replay_ext) / n;
    double pooled = 0.5 * (pa + pb);
    double sigma = std::sqrt(pooled * (1.0 - pooled) * 2.0 / n);
    REQUIRE(std::abs(pa - pb) < 3.0 * sigma + 1e-12);
    double d = ks_statistic(direct_times, replay_times);
    REQUIRE(d < ks_critical(direct_times.size(), replay_times.size()));
}
