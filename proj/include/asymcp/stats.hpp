#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace asymcp {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial proportion; z defaults to the
// two-sided 95% normal quantile.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.96) {
    if (n == 0) return {0.0, 1.0};
    double nn = static_cast<double>(n);
    double phat = static_cast<double>(successes) / nn;
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (phat + z2 / (2.0 * nn)) / denom;
    double half = z / denom * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct MeanCi {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Normal-approximation confidence interval for a sample mean.
inline MeanCi mean_interval(const std::vector<double>& xs, double z = 1.96) {
    if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
    double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    double se = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return {mean, mean - z * se, mean + z * se};
}

// Two-sample Kolmogorov-Smirnov distance; inputs are sorted in place.
inline double ks_statistic(std::vector<double>& a, std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS needs nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        double fa = static_cast<double>(i) / static_cast<double>(a.size());
        double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

// Large-sample critical value c(alpha) * sqrt((n+m)/(n*m)); c = 1.628 is the
// standard alpha = 0.01 coefficient.
inline double ks_critical(std::size_t n, std::size_t m, double c_alpha = 1.628) {
    double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return c_alpha * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace asymcp
