#pragma once

#include <cstdint>
#include <string>

#include "dgbo/norms.hpp"

namespace dgbo {

// Empty when 2/q + 1/p = 1/r and one of
//   (1) 4 <= q <= inf, 4 < p <= inf
//   (2) 1/4 <= 1/p <= 1/p + 1/q < 1/2
//   (3) (q, p) = (inf, 2)
// holds; otherwise a message naming what failed.
std::string strichartz_violation(double q, double p, double r);

// Physical samples of W(t)phi on the space grid of phi and the given time grid.
SpaceTimeSamples free_evolution(const SpectralField& phi, double alpha, const Grid1D& time);

// ||D^{alpha/q} W(t)phi||_{L^q_t L^p_x} / ((2pi)^{-1/r'} ||phi||_{FL^{0,r}}).
// The (2pi) factor makes the (inf, 2), r = 2 ratio exactly 1.
double strichartz_ratio(const SpectralField& phi, double q, double p, double r, double alpha, const Grid1D& time);

struct SmoothingCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_error = 0.0;
    double spread = 0.0;    // (max - min) / mean of the per-x time norms on the band
    double constant = 1.0;  // (2 + alpha)^{-1/r}, already folded into rhs
    double band = 0.0;      // sup taken over |x| <= band
};

// lhs = sup_x ||W(t)phi||_{L-hat^r_t}; rhs = (2+alpha)^{-1/r} ||phi||_{homogeneous FL^{-(1+alpha)/r, r}}.
// The sup runs over |x| <= v_min * t_width / 4 where every packet crosses
// inside the window. Grids with v_max * t_width > half_width / 2 wrap and
// are rejected.
SmoothingCheck local_smoothing_check(const SpectralField& phi, double r, double alpha, const Grid1D& time);

// Space grid for data supported in |xi| <= xi_hi observed over [-t_width, t_width):
// half width 2 v_max t_width, resolving |xi| up to 2 xi_hi.
Grid1D smoothing_space_grid(double xi_hi, double alpha, double t_width);

// Gaussian(centre, 0.15 (hi - lo)) times a smooth bump vanishing outside (lo, hi).
// Positive frequencies only, so the field is complex.
SpectralField band_bump(const Grid1D& grid, double lo, double hi);

// Real field with Gaussian coefficients on 0 < |xi| <= xi_max, scaled to the
// given physical L2 norm.
SpectralField random_band_limited(const Grid1D& grid, double xi_max, std::uint64_t seed, double l2 = 1.0);

// int_0^{t_m} W(t_m - s) F(s) ds at every lattice time, trapezoid rule on the
// t lattice in the interaction picture. The lattice contains t = 0.
SliceField duhamel_integral(const SliceField& forcing, double alpha);

// psi(t / T) W(t) phi as slices.
SliceField cutoff_evolution(const SpectralField& phi, double alpha, const Grid1D& time, double T = 1.0);

// Slice-wise multiplication by psi(t / T).
void apply_time_cutoff(SliceField& u, double T);

// Empty if b' + 1 >= b >= 0 >= b' > -1/r'.
std::string duhamel_hypothesis_violation(double b, double b_prime, double r);

enum class LinearEstimate { Homogeneous, Duhamel };

const char* to_string(LinearEstimate e);

struct LinearInputs {
    SpectralField phi;   // homogeneous estimate
    SliceField forcing;  // Duhamel estimate
    Grid1D time;         // homogeneous estimate
};

// Homogeneous: ||psi(t) W(t) phi||_{X^{s,b}_r} / ||phi||_{FL^{s,r}}.
// Duhamel: ||psi_T int_0^t W(t-s) F ds||_{X^{s,b}_r} / (T^{1+b'-b} ||F||_{X^{s,b'}_r}).
double linear_estimates_check(LinearEstimate which, const LinearInputs& in, double s, double b, double b_prime,
                              double r, double T, double alpha);

}  // namespace dgbo
