#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dgbo/norms.hpp"

namespace dgbo {

struct SolveConfig {
    double alpha = 1.0;
    double half_width = 3.14159265358979323846;
    std::size_t n_x = 64;
    double T = 1.0;
    double dt = 1e-3;
    double s = 0.0;
    double r = 2.0;
    double epsilon = 0.05;
    bool dealias = true;
    int max_picard_iters = 25;
    double picard_tol = 1e-10;
    std::size_t n_t = 256;       // Picard lattice on [-2T, 2T); divisible by 8
    std::size_t n_samples = 10;  // diagnostic samples after t = 0 in solve()

    double b() const { return 1.0 / r + epsilon; }
    double b_prime() const { return -(1.0 - 1.0 / r) + 2.0 * epsilon; }
    NormParams x_params() const { return {s, b(), r, alpha}; }
    Grid1D space() const;
    SpaceTimeGrid picard_grid() const;
};

// Throws ValidationError naming the first bad field.
void validate(const SolveConfig& cfg);

struct Diagnostics {
    double t = 0.0;
    double mean = 0.0;
    double l2 = 0.0;
    double energy = 0.0;
};

struct SolveResult {
    std::vector<double> times;
    std::vector<SpectralField> trajectory;
    std::vector<Diagnostics> diagnostics;
    SpectralField final_state;
};

double mean_value(const SpectralField& u);
double l2_norm(const SpectralField& u);
// (1/2)||D^{(1+alpha)/2} u||^2 + (1/6) int u^3
double energy(const SpectralField& u, double alpha);
Diagnostics diagnose(const SpectralField& u, double t, double alpha);

// -u u_x = -(1/2) d_x(u^2). With dealias, modes |k| >= n/3 are zeroed before
// and after squaring. The Nyquist mode of the output is always zero.
SpectralField nonlinearity(const SpectralField& u, bool dealias = true);

// One Lawson (integrating factor) RK4 step of u_t = i omega u + N(u).
SpectralField step_ifrk4(const SpectralField& u, double dt, double alpha, bool dealias = true);

SolveResult solve(const SpectralField& u0, const SolveConfig& cfg);

struct PicardResult {
    std::vector<SliceField> iterates;
    std::vector<double> kappas;     // kappa_n for n >= 1
    std::vector<double> residuals;  // X(u^{n+1} - u^n) / X(psi_T u^{n+1})
    bool converged = false;
    bool diverged = false;
};

// u^0 = psi(t) W(t) u0, u^{n+1} = psi(t) W(t) u0 + psi_T(t) int_0^t W(t-s) N(u^n)(s) ds
// on the lattice [-2T, 2T). Stops when the residual drops below picard_tol,
// after max_picard_iters, or once kappa > 10 three times running.
PicardResult picard_iterate(const SpectralField& u0, const SolveConfig& cfg);

// Slice m of a Picard iterate as a field.
SpectralField slice_at(const SliceField& u, std::size_t m);

// Relative L2 gap between solve() and the last Picard iterate on the lattice
// times in [0, T].
double solve_picard_gap(const SpectralField& u0, const SolveConfig& cfg, const PicardResult& picard);

// X^{s,b'}(N(u)) / X^{s,b}(u)^2 with b = 1/r + eps, b' = -1/r' + 2 eps.
double nonlinear_estimate_ratio(const SpaceTimeField& u, double s, double r, double epsilon, double alpha,
                                bool dealias = true);

// Real space-time field with Gaussian coefficients on |xi| <= xi_max,
// |tau - omega(xi)| <= sigma_max, scaled to unit X^{0,0}_2 norm.
SpaceTimeField random_space_time_field(const SpaceTimeGrid& grid, double xi_max, double sigma_max, double alpha,
                                       std::uint64_t seed);

// The symmetry u -> lambda^a u(lambda x, lambda^{2+alpha} t) holds with a = 1 + alpha.
double scaling_exponent(double alpha);
// -1/2 - alpha: homogeneous Sobolev index left invariant by the symmetry.
double critical_index(double alpha);

// lambda^a u0(lambda x) on the grid of half width L / lambda with the same n.
SpectralField rescale_data(const SpectralField& u0, double lambda, double exponent);

// Solves u0 to cfg.T and the rescaled data to cfg.T / lambda^{2+alpha} with
// the same dt, pulls the second back and returns the relative L2 gap.
double scaling_check(const SpectralField& u0, double lambda, const SolveConfig& cfg,
                     std::optional<double> exponent = std::nullopt);

}  // namespace dgbo
