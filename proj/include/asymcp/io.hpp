#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "asymcp/coupling.hpp"
#include "asymcp/dynamics.hpp"
#include "asymcp/meanfield.hpp"
#include "asymcp/survival.hpp"

namespace asymcp {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// All numeric CSV output goes through one formatter so identical doubles
// always print identically (byte-determinism and resume keys rely on this).
inline std::string fmt_g(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    out << "t,u0,u1,u2\n";
    for (const Sample& s : traj.samples)
        out << fmt_g(s.t) << ',' << fmt_g(s.dens.u0) << ',' << fmt_g(s.dens.u1) << ','
            << fmt_g(s.dens.u2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

inline void write_meanfield_csv(const std::string& path, const OdeTrajectory& traj,
                                std::size_t stride = 1) {
    if (stride == 0) stride = 1;
    std::ofstream out = open_out(path);
    out << "t,u1,u2\n";
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
        if (i % stride != 0 && i + 1 != traj.points.size()) continue;
        const OdePoint& p = traj.points[i];
        out << fmt_g(p.t) << ',' << fmt_g(p.u.u1) << ',' << fmt_g(p.u.u2) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

inline void write_pair_csv(const std::string& path, const PairTrajectory& traj) {
    std::ofstream out = open_out(path);
    out << "t,u_inf_low,u_inf_high,dominated\n";
    for (const PairSample& s : traj.samples)
        out << fmt_g(s.t) << ',' << fmt_g(s.u_inf_low) << ',' << fmt_g(s.u_inf_high) << ','
            << (s.dominated ? 1 : 0) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

inline constexpr const char* kSweepHeader =
    "beta1,beta2,gamma,survival,ci_lo,ci_hi,density,density_ci_lo,density_ci_hi";

inline std::string sweep_key(double beta1, double beta2, double gamma) {
    return fmt_g(beta1) + "," + fmt_g(beta2) + "," + fmt_g(gamma);
}

inline std::string sweep_row(double beta1, double beta2, double gamma, const SurvivalEstimate& est) {
    std::ostringstream row;
    row << sweep_key(beta1, beta2, gamma) << ',' << fmt_g(est.survival) << ','
        << fmt_g(est.survival_ci.lo) << ',' << fmt_g(est.survival_ci.hi) << ','
        << fmt_g(est.mean_density) << ',' << fmt_g(est.density_ci.lo) << ','
        << fmt_g(est.density_ci.hi);
    return row.str();
}

// Completed data rows of a partially written sweep CSV, keyed by their first
// three fields.  Only newline-terminated rows with the full field count are
// kept, so a torn final line from an interrupted run is recomputed rather
// than trusted.
inline std::vector<std::pair<std::string, std::string>> completed_sweep_rows(
    const std::string& path) {
    std::vector<std::pair<std::string, std::string>> rows;
    std::ifstream in(path, std::ios::binary);
    if (!in) return rows;
    std::ostringstream all;
    all << in.rdbuf();
    std::string text = all.str();
    std::size_t pos = 0;
    while (true) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) break;  // drops any unterminated fragment
        std::string line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.rfind("beta1,", 0) == 0) continue;
        std::size_t commas = 0;
        for (char c : line) commas += c == ',';
        if (commas != 8) continue;
        std::size_t third = line.find(',', line.find(',', line.find(',') + 1) + 1);
        rows.emplace_back(line.substr(0, third), line);
    }
    return rows;
}

}  // namespace asymcp
