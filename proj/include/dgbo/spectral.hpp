#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dgbo {

using cplx = std::complex<double>;

// Periodic lattice x_j = -L + j*dx on [-L, L), dual lattice xi_k = k*pi/L.
// Coefficients are stored in FFT order: slot i holds k = i for i < n/2 and
// k = i - n otherwise.
struct Grid1D {
    double half_width = 0.0;
    std::size_t n = 0;

    double dx() const { return 2.0 * half_width / static_cast<double>(n); }
    double dxi() const;
    double x(std::size_t j) const { return -half_width + static_cast<double>(j) * dx(); }
    long wavenumber(std::size_t i) const {
        return i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
    }
    double xi(std::size_t i) const { return static_cast<double>(wavenumber(i)) * dxi(); }
    std::size_t slot(long k) const {
        return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + static_cast<long>(n));
    }
    double xi_max() const { return static_cast<double>(n / 2) * dxi(); }
    bool operator==(const Grid1D&) const = default;
};

// Validates n (power of two, >= 8) and half_width (finite, > 0).
Grid1D make_grid(double half_width, std::size_t n);

// Time axis uses the same lattice: t_m = -t_width + m*dt.
struct SpaceTimeGrid {
    Grid1D space;
    Grid1D time;
    bool operator==(const SpaceTimeGrid&) const = default;
};

SpaceTimeGrid make_space_time_grid(double half_width, std::size_t n_x, double t_width, std::size_t n_t);

struct SpectralField {
    Grid1D grid;
    std::vector<cplx> coeffs;
};

// Physical samples on the space-time lattice, index ix * n_t + it.
struct SpaceTimeSamples {
    SpaceTimeGrid grid;
    std::vector<cplx> values;
    cplx& at(std::size_t ix, std::size_t it) { return values[ix * grid.time.n + it]; }
    const cplx& at(std::size_t ix, std::size_t it) const { return values[ix * grid.time.n + it]; }
};

// Space-time Fourier coefficients, index i_xi * n_t + i_tau, FFT order on both axes.
struct SpaceTimeField {
    SpaceTimeGrid grid;
    std::vector<cplx> coeffs;
    cplx& at(std::size_t i, std::size_t m) { return coeffs[i * grid.time.n + m]; }
    const cplx& at(std::size_t i, std::size_t m) const { return coeffs[i * grid.time.n + m]; }
};

// Spectral in x, physical in t: slices[m] holds the coefficients of u(., t_m).
struct SliceField {
    SpaceTimeGrid grid;
    std::vector<cplx> data;  // index m * n_x + i
    std::span<cplx> slice(std::size_t m) { return {data.data() + m * grid.space.n, grid.space.n}; }
    std::span<const cplx> slice(std::size_t m) const { return {data.data() + m * grid.space.n, grid.space.n}; }
};

SliceField make_slice_field(const SpaceTimeGrid& grid);

// f^(xi_k) = dx * sum_j f(x_j) e^{-i x_j xi_k}
SpectralField forward(const Grid1D& grid, std::span<const cplx> samples);
SpectralField forward(const Grid1D& grid, std::span<const double> samples);
// f(x_j) = (1/2pi) * dxi * sum_k f^(xi_k) e^{i x_j xi_k}
std::vector<cplx> inverse(const SpectralField& field);
std::vector<double> inverse_real(const SpectralField& field);

SpaceTimeField forward(const SpaceTimeSamples& samples);
SpaceTimeSamples inverse(const SpaceTimeField& field);

// Time transform of each x-coefficient row.
SpaceTimeField to_space_time(const SliceField& slices);
SliceField to_slices(const SpaceTimeField& field);

// omega(xi) = -xi |xi|^{1+alpha}; W(t) multiplies by e^{i t omega}.
double dispersion(double xi, double alpha);
double group_velocity(double xi, double alpha);
// [0, 1] for the symbol layer; the equation itself needs 0 < alpha <= 1.
void check_alpha(double alpha);
void check_model_alpha(double alpha);
SpectralField propagate(const SpectralField& f, double t, double alpha);

// |d|^gamma; gamma < 0 with a nonzero mean is rejected.
SpectralField abs_derivative(const SpectralField& f, double gamma);
// <d>^gamma = (1 + xi^2)^{gamma/2}
SpectralField japanese_derivative(const SpectralField& f, double gamma);
SpectralField apply_multiplier(const SpectralField& f, const std::function<cplx(double)>& m);

// Max relative deviation from conjugate symmetry c(-k) = conj(c(k)).
double hermitian_defect(std::span<const cplx> coeffs);
bool is_real_field(const SpectralField& f, double tol = 1e-10);

// Version string of the FFT backend.
const char* fft_backend_version();

}  // namespace dgbo
