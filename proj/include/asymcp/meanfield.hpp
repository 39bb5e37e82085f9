#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymcp/params.hpp"

namespace asymcp {

// Density pair (u1, u2) in the two-dimensional simplex.
struct MeanFieldState {
    double u1 = 0.0;
    double u2 = 0.0;

    bool in_simplex(double tol = 0.0) const {
        return u1 >= -tol && u2 >= -tol && u1 + u2 <= 1.0 + tol;
    }
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

// du1/dt and du2/dt of the homogeneous-mixing system.
inline MeanFieldState vector_field(const MeanFieldState& u, const Params& p) {
    double f1 = (p.beta1 * u.u1 + p.beta2 * u.u2) * (1.0 - u.u1 - u.u2) - (1.0 + p.gamma) * u.u1;
    double f2 = p.gamma * u.u1 - u.u2;
    return {f1, f2};
}

inline Matrix2 jacobian(const MeanFieldState& u, const Params& p) {
    Matrix2 j;
    j[0][0] = p.beta1 * (1.0 - 2.0 * u.u1) - (p.beta1 + p.beta2) * u.u2 - (1.0 + p.gamma);
    j[0][1] = p.beta2 * (1.0 - 2.0 * u.u2) - (p.beta1 + p.beta2) * u.u1;
    j[1][0] = p.gamma;
    j[1][1] = -1.0;
    return j;
}

inline double trace2(const Matrix2& m) { return m[0][0] + m[1][1]; }
inline double det2(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

inline std::string stability_label(double tr, double det) {
    if (det == 0.0 || (det > 0.0 && tr == 0.0)) return "degenerate";
    if (tr < 0.0 && det > 0.0) return "stable";
    return "unstable/saddle";
}

struct FixedPoint {
    MeanFieldState u;
    double trace = 0.0;
    double det = 0.0;
    std::string stability;
};

struct FixedPointReport {
    double d1 = 0.0;  // 1 + gamma
    double d2 = 0.0;  // beta1 + gamma*beta2
    bool survival = false;
    FixedPoint origin;
    std::optional<FixedPoint> interior;
};

// The disease-free point always, and the endemic point
// (1/(1+gamma) - 1/(beta1 + gamma*beta2), gamma * u1-bar) exactly when
// beta1 + gamma*beta2 > 1 + gamma.
inline FixedPointReport fixed_points(const Params& p) {
    FixedPointReport rep;
    rep.d1 = 1.0 + p.gamma;
    rep.d2 = p.beta1 + p.gamma * p.beta2;
    rep.survival = rep.d2 > rep.d1;
    auto classify = [&](const MeanFieldState& u) {
        Matrix2 j = jacobian(u, p);
        double tr = trace2(j), dt = det2(j);
        return FixedPoint{u, tr, dt, stability_label(tr, dt)};
    };
    rep.origin = classify({0.0, 0.0});
    if (rep.survival) {
        double u1 = 1.0 / rep.d1 - 1.0 / rep.d2;
        rep.interior = classify({u1, p.gamma * u1});
    }
    return rep;
}

struct OdePoint {
    double t;
    MeanFieldState u;
};

struct OdeTrajectory {
    std::vector<OdePoint> points;
    bool converged = false;      // state stopped moving before t_max
    double convergence_time = 0.0;
};

// Classical fixed-step fourth-order integration.  States are clamped back to
// the simplex when roundoff pushes them out by at most kSimplexTol; a larger
// excursion means the step size is too coarse and raises an error.
inline constexpr double kSimplexTol = 1e-9;
inline constexpr double kConvergedSpeed = 1e-12;  // movement per unit time

inline OdeTrajectory integrate(const MeanFieldState& u0, const Params& p, double t_max,
                               double dt = 1e-3) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be nonnegative");
    if (!u0.in_simplex()) throw std::domain_error("initial state outside the simplex");
    auto add = [](const MeanFieldState& a, const MeanFieldState& b, double s) {
        return MeanFieldState{a.u1 + s * b.u1, a.u2 + s * b.u2};
    };
    OdeTrajectory traj;
    MeanFieldState u = u0;
    traj.points.push_back({0.0, u});
    long nsteps = static_cast<long>(std::ceil(t_max / dt - 1e-12));
    for (long n = 0; n < nsteps; ++n) {
        double h = std::min(dt, t_max - static_cast<double>(n) * dt);
        MeanFieldState k1 = vector_field(u, p);
        MeanFieldState k2 = vector_field(add(u, k1, h / 2.0), p);
        MeanFieldState k3 = vector_field(add(u, k2, h / 2.0), p);
        MeanFieldState k4 = vector_field(add(u, k3, h), p);
        MeanFieldState next{u.u1 + h / 6.0 * (k1.u1 + 2.0 * k2.u1 + 2.0 * k3.u1 + k4.u1),
                            u.u2 + h / 6.0 * (k1.u2 + 2.0 * k2.u2 + 2.0 * k3.u2 + k4.u2)};
        if (!next.in_simplex(kSimplexTol))
            throw std::runtime_error("integration step left the simplex; reduce dt");
        next.u1 = std::max(next.u1, 0.0);
        next.u2 = std::max(next.u2, 0.0);
        if (next.u1 + next.u2 > 1.0) {
            double s = 1.0 / (next.u1 + next.u2);
            next.u1 *= s;
            next.u2 *= s;
        }
        double move = std::abs(next.u1 - u.u1) + std::abs(next.u2 - u.u2);
        double t_next = static_cast<double>(n + 1) * dt;
        if (t_next > t_max) t_next = t_max;
        u = next;
        traj.points.push_back({t_next, u});
        if (move < kConvergedSpeed * h) {
            traj.converged = true;
            traj.convergence_time = t_next;
            break;
        }
    }
    return traj;
}

// Divergence of (phi*F1, phi*F2) for phi = 1/(u1*u2); strictly negative on
// the interior of the simplex, which rules out periodic orbits.
inline double dulac_divergence(const MeanFieldState& u, const Params& p) {
    if (!(u.u1 > 0.0 && u.u2 > 0.0 && u.u1 + u.u2 < 1.0))
        throw std::domain_error("Dulac divergence needs an interior point");
    return -(p.beta2 * (1.0 - u.u1 - u.u2)) / (u.u1 * u.u1) - (p.beta1 / u.u2 + p.beta2 / u.u1) -
           p.gamma / (u.u2 * u.u2);
}

}  // namespace asymcp
