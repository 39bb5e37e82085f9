#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "asymcp/rng.hpp"
#include "asymcp/stats.hpp"

namespace asymcp {

namespace detail {
inline void check_gw_inputs(int d, double gamma) {
    if (d < 1) throw std::invalid_argument("dimension must be at least 1");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::domain_error("gamma must be finite and nonnegative");
}
}  // namespace detail

// Mean offspring count of the branching process that dominates the spread of
// symptomatic sites: each 2 spawns on average 4d ones, each of which turns
// symptomatic before recovering with probability gamma/(1+gamma).
inline double gw_offspring_mean(int d, double gamma) {
    detail::check_gw_inputs(d, gamma);
    return 4.0 * static_cast<double>(d) * gamma / (1.0 + gamma);
}

inline bool gw_subcritical(int d, double gamma) { return gw_offspring_mean(d, gamma) < 1.0; }

// P(the infection ever reaches distance r from a single 2 at the origin) is
// at most mu^(r-1); meaningful only in the subcritical regime.
inline double gw_radius_bound(int d, double gamma, int r) {
    double mu = gw_offspring_mean(d, gamma);
    if (mu >= 1.0) throw std::domain_error("radius bound needs offspring mean below 1");
    if (r < 1) throw std::invalid_argument("radius must be at least 1");
    return std::pow(mu, r - 1);
}

// Expected total number of 2s ever produced, root included: 1/(1-mu).
inline double gw_total_mean(int d, double gamma) {
    double mu = gw_offspring_mean(d, gamma);
    if (mu >= 1.0) throw std::domain_error("total mean needs offspring mean below 1");
    return 1.0 / (1.0 - mu);
}

// Bound on the probability that an infection path from outside the cube of
// radius r ever reaches the origin: 2d * sum_{j>=r} (2j+3)^(d-1) mu^j.  Terms
// are accumulated with compensated summation until one falls below 1e-15 of
// the running sum.
inline double exterior_path_bound(int d, double gamma, int r) {
    double mu = gw_offspring_mean(d, gamma);
    if (mu >= 1.0) throw std::domain_error("exterior bound needs offspring mean below 1");
    if (r < 0) throw std::invalid_argument("radius must be nonnegative");
    double sum = 0.0, comp = 0.0;
    double mu_pow = std::pow(mu, r);
    for (int j = r;; ++j) {
        double term = std::pow(2.0 * j + 3.0, d - 1) * mu_pow;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        mu_pow *= mu;
        if (term == 0.0 || (sum > 0.0 && term < 1e-15 * sum)) break;
        if (j - r > 100000000) throw std::runtime_error("exterior bound series failed to converge");
    }
    return 2.0 * static_cast<double>(d) * sum;
}

struct GWTree {
    std::vector<std::uint64_t> generation_counts;  // 2-counts, generation 0 is the root
    std::uint64_t total = 0;
    bool extinct = false;    // no individuals left at the last simulated generation
    bool truncated = false;  // population cap hit (supercritical safety valve)
};

inline constexpr std::uint64_t kGwPopulationCap = 10000000;

// Simulates the dominating branching process exactly as constructed: each 2
// produces K ones with K = 2d plus 2d independent Geometric(1/2)-1 extras,
// and each 1 independently becomes a 2 with probability gamma/(1+gamma).
inline GWTree gw_simulate(int d, double gamma, int generations, std::uint64_t seed) {
    detail::check_gw_inputs(d, gamma);
    if (generations < 0) throw std::invalid_argument("generations must be nonnegative");
    Rng rng(seed_for(seed, 7));
    const double p2 = gamma / (1.0 + gamma);
    GWTree tree;
    std::uint64_t current = 1;
    tree.generation_counts.push_back(current);
    tree.total = current;
    for (int g = 0; g < generations && current > 0; ++g) {
        std::uint64_t next = 0;
        for (std::uint64_t parent = 0; parent < current; ++parent) {
            // 2d guaranteed ones plus 2d shifted-geometric extras; each
            // Geometric(1/2) draw contributes 1 + (G - 1) = G.
            std::uint64_t ones = 0;
            for (int i = 0; i < 2 * d; ++i) ones += rng.geometric_half();
            for (std::uint64_t o = 0; o < ones; ++o)
                if (rng.bernoulli(p2)) ++next;
        }
        tree.generation_counts.push_back(next);
        tree.total += next;
        current = next;
        if (tree.total > kGwPopulationCap) {
            tree.truncated = true;
            break;
        }
    }
    tree.extinct = current == 0;
    return tree;
}

namespace detail {
inline double binomial_coeff(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

inline double pairwise_sum(const std::vector<double>& xs, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return xs[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}
}  // namespace detail

// Probability that a given site is open: all 2d inward infection clocks fire
// before the site's recovery clock, integrated out in closed form as an
// alternating binomial sum over subsets.
inline double site_open_prob(double beta1, double gamma, int d) {
    detail::check_gw_inputs(d, gamma);
    if (!(beta1 >= 0.0) || !std::isfinite(beta1))
        throw std::domain_error("beta1 must be finite and nonnegative");
    const int n = 2 * d;
    const double r = beta1 / (static_cast<double>(n) * (1.0 + gamma));
    std::vector<double> terms;
    terms.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        terms.push_back(sign * detail::binomial_coeff(n, k) / (1.0 + static_cast<double>(k) * r));
    }
    return detail::pairwise_sum(terms, 0, terms.size());
}

// The unique beta1 with site_open_prob(beta1, gamma, d) = target, found by
// bisection on the strictly increasing map; relative width 1e-9.
inline double beta_bar(double gamma, int d, double target) {
    detail::check_gw_inputs(d, gamma);
    if (!(target < 1.0)) throw std::domain_error("target probability must be below 1");
    if (target <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (site_open_prob(hi, gamma, d) < target) {
        hi *= 2.0;
        if (hi > 1e18) throw std::runtime_error("failed to bracket the target probability");
    }
    while (hi - lo > 1e-9 * hi) {
        double mid = 0.5 * (lo + hi);
        if (site_open_prob(mid, gamma, d) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct PercolationResult {
    double open_prob = 0.0;   // per-site openness probability used
    double estimate = 0.0;    // fraction of replicas whose cluster reaches the boundary
    Interval ci;              // Wilson 95%
    std::uint64_t hits = 0;
    std::uint64_t replicas = 0;
};

// Monte Carlo estimate of P(the open cluster of the origin reaches the
// boundary of [-R, R]^d) under independent site openness.  Sites reveal their
// state lazily on first visit; breadth-first order is deterministic, so the
// result is reproducible for a given seed.
inline PercolationResult percolation_mc(double beta1, double gamma, int d, int radius,
                                        std::uint64_t replicas, std::uint64_t seed) {
    if (d < 2) throw std::domain_error("percolation comparison needs dimension at least 2");
    if (radius < 1) throw std::invalid_argument("radius must be at least 1");
    const double p = site_open_prob(beta1, gamma, d);
    const std::int64_t side = 2 * static_cast<std::int64_t>(radius) + 1;

    PercolationResult res;
    res.open_prob = p;
    res.replicas = replicas;
    std::vector<std::int64_t> coords(d), ncoords(d);
    for (std::uint64_t rep = 0; rep < replicas; ++rep) {
        Rng rng(seed_for(seed, 5, rep));
        // 0 = unknown, 1 = open, 2 = closed
        std::unordered_map<std::int64_t, std::uint8_t> known;
        auto open_at = [&](std::int64_t key) {
            auto it = known.find(key);
            if (it != known.end()) return it->second == 1;
            bool open = rng.bernoulli(p);
            known.emplace(key, open ? 1 : 2);
            return open;
        };
        auto decode = [&](std::int64_t key, std::vector<std::int64_t>& out) {
            for (int i = 0; i < d; ++i) {
                out[i] = key % side - radius;
                key /= side;
            }
        };
        auto encode = [&](const std::vector<std::int64_t>& c) {
            std::int64_t key = 0;
            for (int i = d - 1; i >= 0; --i) key = key * side + (c[i] + radius);
            return key;
        };
        const std::int64_t origin = encode(std::vector<std::int64_t>(d, 0));
        bool reached = false;
        if (open_at(origin)) {
            std::deque<std::int64_t> frontier{origin};
            std::unordered_map<std::int64_t, bool> visited{{origin, true}};
            while (!frontier.empty() && !reached) {
                std::int64_t key = frontier.front();
                frontier.pop_front();
                decode(key, coords);
                for (int axis = 0; axis < d && !reached; ++axis) {
                    for (int dir = -1; dir <= 1; dir += 2) {
                        ncoords = coords;
                        ncoords[axis] += dir;
                        if (std::abs(ncoords[axis]) > radius) continue;
                        std::int64_t nkey = encode(ncoords);
                        if (visited.count(nkey)) continue;
                        visited[nkey] = true;
                        if (!open_at(nkey)) continue;
                        bool boundary = false;
                        for (int i = 0; i < d; ++i)
                            if (std::abs(ncoords[i]) == radius) boundary = true;
                        if (boundary) {
                            reached = true;
                            break;
                        }
                        frontier.push_back(nkey);
                    }
                }
            }
        }
        if (reached) ++res.hits;
    }
    if (replicas > 0) res.estimate = static_cast<double>(res.hits) / static_cast<double>(replicas);
    res.ci = wilson_interval(res.hits, replicas);
    return res;
}

}  // namespace asymcp
