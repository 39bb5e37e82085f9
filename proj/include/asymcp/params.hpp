#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace asymcp {

// Standard: 0->1 at beta1*f1 + beta2*f2, 1->2 at gamma, 1->0 at 1, 2->0 at 1.
// ForestFire: beta2 = 0 forced; 0->1 at beta1*f1, 1->2 at 1+gamma, 2->0 at 1
//             (burning trees never revert to live directly).
// Collapsed: the gamma=infinity limit; state 1 is removed, 0->2 at beta2*f2,
//            2->0 at 1 (beta1 = 0 forced, gamma unused).
enum class Variant { Standard, ForestFire, Collapsed };

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::Standard: return "standard";
        case Variant::ForestFire: return "forest-fire";
        default: return "collapsed";
    }
}

struct Params {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double gamma = 0.0;
    Variant variant = Variant::Standard;

    void validate() const {
        auto bad = [](double r) { return !(r >= 0.0) || !std::isfinite(r); };
        if (bad(beta1) || bad(beta2) || bad(gamma))
            throw std::domain_error("rates must be finite and nonnegative");
        if (variant == Variant::ForestFire && beta2 != 0.0)
            throw std::domain_error("forest-fire variant requires beta2 = 0");
        if (variant == Variant::Collapsed && beta1 != 0.0)
            throw std::domain_error("collapsed variant requires beta1 = 0");
    }
};

}  // namespace asymcp
