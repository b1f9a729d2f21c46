#include "dgbo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "dgbo/errors.hpp"
#include "fft.hpp"

namespace dgbo {
namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double parity(long k) { return (k & 1) ? -1.0 : 1.0; }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

double Grid1D::dxi() const { return std::numbers::pi / half_width; }

Grid1D make_grid(double half_width, std::size_t n) {
    if (!(std::isfinite(half_width) && half_width > 0.0))
        fail_validation(ErrorKind::Grid, "half_width must be finite and positive, got " + std::to_string(half_width));
    if (n < 8 || !is_pow2(n))
        fail_validation(ErrorKind::Grid, "n must be a power of two >= 8, got " + std::to_string(n));
    return Grid1D{half_width, n};
}

SpaceTimeGrid make_space_time_grid(double half_width, std::size_t n_x, double t_width, std::size_t n_t) {
    return SpaceTimeGrid{make_grid(half_width, n_x), make_grid(t_width, n_t)};
}

SliceField make_slice_field(const SpaceTimeGrid& grid) {
    return SliceField{grid, std::vector<cplx>(grid.space.n * grid.time.n)};
}

SpectralField forward(const Grid1D& grid, std::span<const cplx> samples) {
    if (samples.size() != grid.n) fail_validation(ErrorKind::Grid, "sample count does not match grid");
    SpectralField out{grid, std::vector<cplx>(samples.begin(), samples.end())};
    fft::transform_1d(out.coeffs, -1);
    const double dx = grid.dx();
    for (std::size_t i = 0; i < grid.n; ++i) out.coeffs[i] *= dx * parity(grid.wavenumber(i));
    return out;
}

SpectralField forward(const Grid1D& grid, std::span<const double> samples) {
    std::vector<cplx> c(samples.begin(), samples.end());
    return forward(grid, std::span<const cplx>(c));
}

std::vector<cplx> inverse(const SpectralField& field) {
    const auto& g = field.grid;
    std::vector<cplx> out(field.coeffs);
    const double scale = 1.0 / (static_cast<double>(g.n) * g.dx());
    for (std::size_t i = 0; i < g.n; ++i) out[i] *= scale * parity(g.wavenumber(i));
    fft::transform_1d(out, +1);
    return out;
}

std::vector<double> inverse_real(const SpectralField& field) {
    auto c = inverse(field);
    std::vector<double> out(c.size());
    std::transform(c.begin(), c.end(), out.begin(), [](cplx z) { return z.real(); });
    return out;
}

SpaceTimeField forward(const SpaceTimeSamples& samples) {
    const auto& g = samples.grid;
    const std::size_t nx = g.space.n, nt = g.time.n;
    if (samples.values.size() != nx * nt) fail_validation(ErrorKind::Grid, "sample count does not match grid");
    SpaceTimeField out{g, samples.values};
    fft::transform_2d(out.coeffs.data(), nx, nt, -1);
    const double scale = g.space.dx() * g.time.dx();
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t m = 0; m < nt; ++m)
            out.at(i, m) *= scale * parity(g.space.wavenumber(i) + g.time.wavenumber(m));
    return out;
}

SpaceTimeSamples inverse(const SpaceTimeField& field) {
    const auto& g = field.grid;
    const std::size_t nx = g.space.n, nt = g.time.n;
    SpaceTimeSamples out{g, field.coeffs};
    const double scale = 1.0 / (static_cast<double>(nx) * g.space.dx() * static_cast<double>(nt) * g.time.dx());
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t m = 0; m < nt; ++m)
            out.at(i, m) *= scale * parity(g.space.wavenumber(i) + g.time.wavenumber(m));
    fft::transform_2d(out.values.data(), nx, nt, +1);
    return out;
}

SpaceTimeField to_space_time(const SliceField& slices) {
    const auto& g = slices.grid;
    const std::size_t nx = g.space.n, nt = g.time.n;
    SpaceTimeField out{g, std::vector<cplx>(nx * nt)};
    for (std::size_t m = 0; m < nt; ++m)
        for (std::size_t i = 0; i < nx; ++i) out.coeffs[i * nt + m] = slices.data[m * nx + i];
    fft::transform_many(out.coeffs.data(), nt, nx, -1);
    const double dt = g.time.dx();
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t m = 0; m < nt; ++m) out.at(i, m) *= dt * parity(g.time.wavenumber(m));
    return out;
}

SliceField to_slices(const SpaceTimeField& field) {
    const auto& g = field.grid;
    const std::size_t nx = g.space.n, nt = g.time.n;
    std::vector<cplx> rows(field.coeffs);
    const double scale = 1.0 / (static_cast<double>(nt) * g.time.dx());
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t m = 0; m < nt; ++m) rows[i * nt + m] *= scale * parity(g.time.wavenumber(m));
    fft::transform_many(rows.data(), nt, nx, +1);
    SliceField out = make_slice_field(g);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t m = 0; m < nt; ++m) out.data[m * nx + i] = rows[i * nt + m];
    return out;
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        fail_validation(ErrorKind::Domain, "alpha must lie in [0, 1], got " + num(alpha));
}

void check_model_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        fail_validation(ErrorKind::Domain, "alpha must lie in (0, 1], got " + num(alpha));
}

double dispersion(double xi, double alpha) { return -xi * std::pow(std::abs(xi), 1.0 + alpha); }

double group_velocity(double xi, double alpha) { return -(2.0 + alpha) * std::pow(std::abs(xi), 1.0 + alpha); }

SpectralField propagate(const SpectralField& f, double t, double alpha) {
    check_alpha(alpha);
    SpectralField out = f;
    for (std::size_t i = 0; i < f.grid.n; ++i) {
        const double ph = t * dispersion(f.grid.xi(i), alpha);
        out.coeffs[i] *= cplx(std::cos(ph), std::sin(ph));
    }
    return out;
}

SpectralField abs_derivative(const SpectralField& f, double gamma) {
    SpectralField out = f;
    if (gamma < 0.0) {
        double peak = 0.0;
        for (auto c : f.coeffs) peak = std::max(peak, std::abs(c));
        if (std::abs(f.coeffs[0]) > 1e-13 * peak)
            fail_validation(ErrorKind::SingularSymbol, "|d|^gamma with gamma < 0 applied to a field with nonzero mean");
    }
    for (std::size_t i = 0; i < f.grid.n; ++i) {
        const double a = std::abs(f.grid.xi(i));
        out.coeffs[i] = a == 0.0 ? (gamma == 0.0 ? f.coeffs[i] : cplx(0.0)) : f.coeffs[i] * std::pow(a, gamma);
    }
    return out;
}

SpectralField japanese_derivative(const SpectralField& f, double gamma) {
    SpectralField out = f;
    for (std::size_t i = 0; i < f.grid.n; ++i) {
        const double xi = f.grid.xi(i);
        out.coeffs[i] *= std::pow(1.0 + xi * xi, 0.5 * gamma);
    }
    return out;
}

SpectralField apply_multiplier(const SpectralField& f, const std::function<cplx(double)>& m) {
    SpectralField out = f;
    for (std::size_t i = 0; i < f.grid.n; ++i) out.coeffs[i] *= m(f.grid.xi(i));
    return out;
}

double hermitian_defect(std::span<const cplx> coeffs) {
    const std::size_t n = coeffs.size();
    double peak = 0.0, worst = 0.0;
    for (auto c : coeffs) peak = std::max(peak, std::abs(c));
    if (peak == 0.0) return 0.0;
    // The Nyquist slot is its own partner; it is excluded.
    for (std::size_t i = 0; i < n; ++i) {
        if (i == n / 2) continue;
        const std::size_t j = (n - i) % n;
        worst = std::max(worst, std::abs(coeffs[j] - std::conj(coeffs[i])));
    }
    return worst / peak;
}

bool is_real_field(const SpectralField& f, double tol) { return hermitian_defect(f.coeffs) <= tol; }

}  // namespace dgbo
