#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgbo/solver.hpp"

namespace dgbo {

// -1 - alpha + 2/r + alpha/(2r), defined for 0 < alpha <= 1 and 1 < r < 1 + alpha.
double threshold(double alpha, double r);

struct SweepRecord {
    double alpha = 0.0;
    double r = 0.0;
    double s = 0.0;
    double T = 0.0;
    double amplitude = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> kappas;
    bool converged = false;
    bool diverged = false;
    double residual = 0.0;
    std::string error;  // empty unless the cell failed
};

struct SweepSpec {
    std::vector<double> alphas;
    std::vector<double> rs;
    std::vector<double> s_offsets;
    SolveConfig base;         // grid, T, epsilon, iteration limits
    double amplitude = 0.01;  // physical L2 norm of the data
    double band = 2.0;        // data supported in |xi| <= band
    std::uint64_t seed = 0;
};

// One Picard run per (alpha, r, offset) at s = threshold + offset. Cell i uses
// data seeded with derive_seed(seed, i). Failures land in the record.
std::vector<SweepRecord> threshold_sweep(const SweepSpec& spec);

struct ProbeRecord {
    long N = 0;
    double alpha = 0.0;
    double s = 0.0;
    double r = 2.0;
    double t = 0.0;
    std::uint64_t seed = 0;
    std::string space;           // "H" at r = 2, "FL" otherwise
    double second_norm = 0.0;    // ||A2(phi_N)(t)|| in the row's space
    double data_norm = 0.0;      // ||phi_N|| in the same space
    double ratio = 0.0;          // second_norm / data_norm^2
    double growth = 0.0;         // ratio / ratio at the previous N (0 on the first row)
    bool monotone = false;       // ratio nondecreasing in N across the whole r series
};

struct ProbeSpec {
    std::vector<long> Ns;
    double alpha = 0.25;
    double s = 0.0;
    std::vector<double> rs{1.2, 2.0};
    double t = 1.0;
    std::uint64_t seed = 0;
    bool include_high = true;
    int points_per_unit = 16;  // frequency lattice density
};

// phi_N = N^{-s} h_N + l, with h_N and l smooth bumps of width 1 at +-N and
// +-1, each of unit L2 norm. The second iterate
//   A2(t)^(xi) = e^{it omega(xi)} (-i xi / 4pi) int phi^(xi1) phi^(xi - xi1) (e^{it Omega} - 1) / (i Omega) dxi1
// is summed directly over the sparse support. Rows are ordered by r, then N.
std::vector<ProbeRecord> illposedness_probe(const ProbeSpec& spec);

}  // namespace dgbo
