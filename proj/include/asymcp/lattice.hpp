#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace asymcp {

using Site = std::int64_t;
using State = std::uint8_t;  // 0 healthy, 1 infected asymptomatic, 2 infected symptomatic

inline constexpr State kHealthy = 0;
inline constexpr State kAsymptomatic = 1;
inline constexpr State kSymptomatic = 2;

// Periodic torus {0,...,L-1}^d with sites flattened row-major (axis 0 fastest).
class LatticeGeometry {
  public:
    LatticeGeometry(int d, std::int64_t side) : d_(d), side_(side) {
        if (d < 1 || d > 3) throw std::domain_error("lattice dimension must be 1, 2, or 3");
        if (side < 2) throw std::domain_error("lattice side must be at least 2");
        sites_ = 1;
        for (int a = 0; a < d; ++a) sites_ *= side;
    }

    int dim() const { return d_; }
    std::int64_t side() const { return side_; }
    std::int64_t site_count() const { return sites_; }
    int degree() const { return 2 * d_; }

    std::array<std::int64_t, 3> coords(Site x) const {
        check_site(x);
        std::array<std::int64_t, 3> c{0, 0, 0};
        for (int a = 0; a < d_; ++a) {
            c[a] = x % side_;
            x /= side_;
        }
        return c;
    }

    Site site_at(const std::array<std::int64_t, 3>& c) const {
        Site x = 0;
        for (int a = d_ - 1; a >= 0; --a) {
            std::int64_t w = ((c[a] % side_) + side_) % side_;
            x = x * side_ + w;
        }
        return x;
    }

    // The 2d nearest neighbors of x with periodic wrap, in a fixed order:
    // per axis, minus direction then plus direction.
    std::vector<Site> neighbors(Site x) const {
        check_site(x);
        std::vector<Site> out;
        out.reserve(static_cast<std::size_t>(degree()));
        std::int64_t stride = 1;
        Site rest = x;
        for (int a = 0; a < d_; ++a) {
            std::int64_t c = rest % side_;
            rest /= side_;
            Site minus = x + ((c == 0 ? side_ - 1 : -1)) * stride;
            Site plus = x + ((c == side_ - 1 ? -(side_ - 1) : 1)) * stride;
            out.push_back(minus);
            out.push_back(plus);
            stride *= side_;
        }
        return out;
    }

    void check_site(Site x) const {
        if (x < 0 || x >= sites_) throw std::domain_error("site index out of range");
    }

  private:
    int d_;
    std::int64_t side_;
    std::int64_t sites_;
};

// Dense precomputed neighbor indices for hot loops; layout: site * 2d + slot.
class NeighborTable {
  public:
    explicit NeighborTable(const LatticeGeometry& g)
        : degree_(g.degree()), flat_(static_cast<std::size_t>(g.site_count()) * degree_) {
        for (Site x = 0; x < g.site_count(); ++x) {
            auto nb = g.neighbors(x);
            for (int k = 0; k < degree_; ++k) flat_[static_cast<std::size_t>(x) * degree_ + k] = nb[k];
        }
    }

    int degree() const { return degree_; }
    const Site* row(Site x) const { return flat_.data() + static_cast<std::size_t>(x) * degree_; }

  private:
    int degree_;
    std::vector<Site> flat_;
};

struct Configuration {
    LatticeGeometry geometry;
    std::vector<State> states;

    explicit Configuration(const LatticeGeometry& g, State fill = kHealthy)
        : geometry(g), states(static_cast<std::size_t>(g.site_count()), fill) {}

    State operator[](Site x) const { return states[static_cast<std::size_t>(x)]; }
    State& operator[](Site x) { return states[static_cast<std::size_t>(x)]; }
};

struct StateCounts {
    std::int64_t n0 = 0, n1 = 0, n2 = 0;
};

inline StateCounts state_counts(const Configuration& c) {
    StateCounts sc;
    for (State s : c.states) {
        if (s == kHealthy)
            ++sc.n0;
        else if (s == kAsymptomatic)
            ++sc.n1;
        else
            ++sc.n2;
    }
    return sc;
}

// Fraction of sites in each state.  The counts are exact integers; u0 and u1
// are exact quotients and u2 is taken as the residual so the three components
// sum to one bit-exactly.
struct Density {
    double u0, u1, u2;
};

inline Density density(const Configuration& c) {
    StateCounts sc = state_counts(c);
    double n = static_cast<double>(c.geometry.site_count());
    double u0 = static_cast<double>(sc.n0) / n;
    double u1 = static_cast<double>(sc.n1) / n;
    return {u0, u1, 1.0 - u0 - u1};
}

// Fraction of the 2d neighbors of x in the given state (the f_i of the local
// transition rates).
inline double neighbor_fraction(Site x, const Configuration& c, State i) {
    if (i != kAsymptomatic && i != kSymptomatic) throw std::domain_error("neighbor_fraction wants state 1 or 2");
    auto nb = c.geometry.neighbors(x);
    int count = 0;
    for (Site y : nb) count += (c[y] == i) ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(c.geometry.degree());
}

// PGM (P2, ASCII) snapshot for d=2: 0 -> 255 (white), 1 -> 128 (gray), 2 -> 0 (black).
inline std::string to_pgm(const Configuration& c) {
    if (c.geometry.dim() != 2) throw std::domain_error("PGM snapshots are only defined for d=2");
    std::int64_t side = c.geometry.side();
    std::string out = "P2\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
    for (std::int64_t row = 0; row < side; ++row) {
        for (std::int64_t col = 0; col < side; ++col) {
            State s = c[row * side + col];
            out += (s == kHealthy ? "255" : s == kAsymptomatic ? "128" : "0");
            out += (col + 1 == side ? '\n' : ' ');
        }
    }
    return out;
}

inline void write_pgm(const Configuration& c, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << to_pgm(c);
}

}  // namespace asymcp
