#include "dgbo/dyadic.hpp"

#include <cmath>
#include <string>

#include "dgbo/errors.hpp"

namespace dgbo {
namespace {

double g(double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; }

}  // namespace

double bump_psi(double xi) {
    const double a = std::abs(xi);
    if (a <= 1.0) return 1.0;
    if (a >= 1.25) return 0.0;
    const double up = g((1.25 - a) / 0.25);
    const double down = g((a - 1.0) / 0.25);
    return up / (up + down);
}

double bump_chi(double xi) { return bump_psi(xi) - bump_psi(2.0 * xi); }

double dyadic_multiplier(double xi, long N) {
    return N == 1 ? bump_psi(xi) : bump_chi(xi / static_cast<double>(N));
}

bool is_dyadic(long N) { return N >= 1 && (N & (N - 1)) == 0; }

void check_dyadic(long N) {
    if (!is_dyadic(N)) fail_validation(ErrorKind::Domain, "not a dyadic number: " + std::to_string(N));
}

SpectralField project_frequency(const SpectralField& f, long N) {
    check_dyadic(N);
    SpectralField out = f;
    for (std::size_t i = 0; i < f.grid.n; ++i) out.coeffs[i] *= dyadic_multiplier(f.grid.xi(i), N);
    return out;
}

SpaceTimeField project_modulation(const SpaceTimeField& u, long L, double alpha) {
    check_dyadic(L);
    SpaceTimeField out = u;
    const auto& g = u.grid;
    for (std::size_t i = 0; i < g.space.n; ++i) {
        const double om = dispersion(g.space.xi(i), alpha);
        for (std::size_t m = 0; m < g.time.n; ++m) out.at(i, m) *= dyadic_multiplier(g.time.xi(m) - om, L);
    }
    return out;
}

}  // namespace dgbo
