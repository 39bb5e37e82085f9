#pragma once

#include <bit>
#include <cstddef>
#include <vector>

namespace asymcp {

// Flat binary indexed sum tree over per-site rates.  Supports O(log n) point
// updates and O(log n) sampling of an index proportional to its rate.  Parent
// nodes are always recomputed as left + right in a fixed order, so rebuilding
// the tree from the same leaves reproduces every internal node bit for bit.
class SumTree {
  public:
    explicit SumTree(std::size_t n)
        : n_(n), base_(n == 0 ? 1 : std::bit_ceil(n)), node_(2 * base_, 0.0) {}

    std::size_t size() const { return n_; }

    double get(std::size_t i) const { return node_[base_ + i]; }

    void set(std::size_t i, double value) {
        std::size_t v = base_ + i;
        node_[v] = value;
        for (v >>= 1; v >= 1; v >>= 1) node_[v] = node_[2 * v] + node_[2 * v + 1];
    }

    double total() const { return node_[1]; }

    // Largest-index-safe descent: returns i such that the prefix sums bracket
    // target.  target must lie in [0, total()); ties and floating-point edge
    // cases fall back toward the nearest nonzero leaf on the left.
    std::size_t sample(double target) const {
        std::size_t v = 1;
        while (v < base_) {
            std::size_t l = 2 * v;
            if (target < node_[l] || node_[l + 1] <= 0.0) {
                v = l;
            } else {
                target -= node_[l];
                v = l + 1;
            }
        }
        std::size_t i = v - base_;
        if (i >= n_) i = n_ - 1;
        return i;
    }

    const std::vector<double>& nodes() const { return node_; }

  private:
    std::size_t n_;
    std::size_t base_;
    std::vector<double> node_;
};

}  // namespace asymcp
