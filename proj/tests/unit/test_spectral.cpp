#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "dgbo/errors.hpp"
#include "dgbo/spectral.hpp"

using namespace dgbo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<cplx> random_samples(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& c : v) c = {g(gen), g(gen)};
    return v;
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(std::span<const cplx> a) {
    double m = 0.0;
    for (auto c : a) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

TEST_CASE("grid lattice arithmetic") {
    const auto g = make_grid(pi, 8);
    CHECK_THAT(g.dx(), WithinRel(pi / 4, 1e-15));
    CHECK_THAT(g.dxi(), WithinRel(1.0, 1e-15));
    std::vector<double> xi;
    for (std::size_t i = 0; i < g.n; ++i) xi.push_back(g.xi(i));
    std::sort(xi.begin(), xi.end());
    for (int k = -4; k < 4; ++k) CHECK_THAT(xi[static_cast<std::size_t>(k + 4)], WithinAbs(k, 1e-15));

    CHECK_THAT(make_grid(2 * pi, 8).dxi(), WithinRel(0.5, 1e-15));

    for (std::size_t n : {8u, 64u, 1024u}) {
        const auto h = make_grid(3.7, n);
        CHECK_THAT(h.dx() * h.dxi() * static_cast<double>(n), WithinRel(2 * pi, 1e-14));
        for (std::size_t i = 0; i < n; ++i) CHECK(h.slot(h.wavenumber(i)) == i);
    }
}

TEST_CASE("grid rejects bad sizes") {
    CHECK_THROWS_AS(make_grid(pi, 6), ValidationError);
    CHECK_THROWS_AS(make_grid(pi, 4), ValidationError);
    CHECK_THROWS_AS(make_grid(0.0, 8), ValidationError);
    CHECK_THROWS_AS(make_grid(-1.0, 8), ValidationError);
    CHECK_THROWS_AS(make_grid(std::nan(""), 8), ValidationError);
}

TEST_CASE("round trip is identity for every size") {
    for (std::size_t n = 8; n <= 4096; n *= 2) {
        const auto g = make_grid(5.0, n);
        const auto u = random_samples(n, n);
        const auto back = inverse(forward(g, u));
        CHECK(max_diff(back, u) / max_abs(u) < 1e-12);

        SpectralField F{g, random_samples(n, n + 1)};
        const auto again = forward(g, inverse(F));
        CHECK(max_diff(again.coeffs, F.coeffs) / max_abs(F.coeffs) < 1e-12);
    }
}

TEST_CASE("forward of constants and cosines") {
    const auto g = make_grid(pi, 16);
    std::vector<double> one(g.n, 1.0), c(g.n);
    const auto F = forward(g, one);
    CHECK_THAT(F.coeffs[0].real(), WithinRel(2 * pi, 1e-14));
    for (std::size_t i = 1; i < g.n; ++i) CHECK(std::abs(F.coeffs[i]) < 1e-13);

    for (std::size_t j = 0; j < g.n; ++j) c[j] = std::cos(g.x(j));
    const auto C = forward(g, c);
    CHECK_THAT(C.coeffs[g.slot(1)].real(), WithinRel(pi, 1e-14));
    CHECK_THAT(C.coeffs[g.slot(-1)].real(), WithinRel(pi, 1e-14));
    for (std::size_t i = 0; i < g.n; ++i)
        if (g.wavenumber(i) != 1 && g.wavenumber(i) != -1) CHECK(std::abs(C.coeffs[i]) < 1e-13);
}

TEST_CASE("Parseval on random fields") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = make_grid(7.0 + static_cast<double>(seed), 256);
        const auto u = random_samples(g.n, seed);
        const auto F = forward(g, u);
        double phys = 0.0, spec = 0.0;
        for (auto v : u) phys += std::norm(v);
        for (auto v : F.coeffs) spec += std::norm(v);
        CHECK_THAT(g.dx() * phys, WithinRel(g.dxi() * spec / (2 * pi), 1e-10));
    }
}

TEST_CASE("space-time transforms round trip") {
    const auto st = make_space_time_grid(3.0, 16, 2.0, 32);
    SpaceTimeSamples u{st, random_samples(16 * 32, 9)};
    const auto back = inverse(forward(u));
    CHECK(max_diff(back.values, u.values) / max_abs(u.values) < 1e-12);

    const auto F = forward(u);
    const auto via = to_space_time(to_slices(F));
    CHECK(max_diff(via.coeffs, F.coeffs) / max_abs(F.coeffs) < 1e-12);
}

TEST_CASE("dispersion symbol") {
    CHECK(dispersion(2, 1) == -8.0);
    for (double a : {0.0, 0.25, 0.5, 1.0}) {
        CHECK_THAT(dispersion(-1, a), WithinRel(1.0, 1e-15));
        CHECK(dispersion(0, a) == 0.0);
    }
    const auto g = make_grid(10.0, 256);
    for (double a : {0.0, 0.3, 1.0}) {
        std::vector<double> xi;
        for (std::size_t i = 0; i < g.n; ++i) xi.push_back(g.xi(i));
        std::sort(xi.begin(), xi.end());
        for (std::size_t i = 0; i < xi.size(); ++i) {
            CHECK(dispersion(-xi[i], a) == -dispersion(xi[i], a));
            if (i) CHECK(dispersion(xi[i], a) < dispersion(xi[i - 1], a));
            CHECK_THAT(group_velocity(xi[i], a), WithinAbs(-(2 + a) * std::pow(std::abs(xi[i]), 1 + a), 1e-9));
        }
    }
}

TEST_CASE("alpha outside [0,1] is rejected") {
    CHECK_THROWS_AS(check_alpha(1.5), ValidationError);
    CHECK_THROWS_AS(check_alpha(-0.1), ValidationError);
    CHECK_NOTHROW(check_alpha(0.0));
    CHECK_NOTHROW(check_alpha(1.0));
}

TEST_CASE("propagate is a unimodular group") {
    const auto g = make_grid(6.0, 128);
    SpectralField f{g, random_samples(g.n, 3)};
    const double a = 0.6;

    const auto id = propagate(f, 0.0, a);
    CHECK(max_diff(id.coeffs, f.coeffs) == 0.0);

    const auto p = propagate(f, 0.37, a);
    for (std::size_t i = 0; i < g.n; ++i) CHECK_THAT(std::abs(p.coeffs[i]), WithinRel(std::abs(f.coeffs[i]), 1e-14));

    const auto two = propagate(propagate(f, 0.11, a), -0.42, a);
    const auto one = propagate(f, 0.11 - 0.42, a);
    CHECK(max_diff(two.coeffs, one.coeffs) / max_abs(f.coeffs) < 1e-12);
}

TEST_CASE("multipliers") {
    const auto g = make_grid(pi, 16);
    std::vector<double> c(g.n), s(g.n);
    for (std::size_t j = 0; j < g.n; ++j) c[j] = std::cos(g.x(j)), s[j] = -std::sin(g.x(j));
    const auto C = forward(g, c), S = forward(g, s);
    const auto dC = apply_multiplier(C, [](double xi) { return cplx(0.0, xi); });
    CHECK(max_diff(dC.coeffs, S.coeffs) < 1e-13);

    SpectralField mode{g, std::vector<cplx>(g.n)};
    mode.coeffs[g.slot(2)] = 1.0;
    const auto d2 = abs_derivative(mode, 2.0);
    CHECK_THAT(d2.coeffs[g.slot(2)].real(), WithinRel(4.0, 1e-14));

    CHECK_NOTHROW(abs_derivative(C, -1.0));
    SpectralField dc = C;
    dc.coeffs[0] = 1.0;
    CHECK_THROWS_AS(abs_derivative(dc, -1.0), ValidationError);
    CHECK_NOTHROW(abs_derivative(mode, -1.0));

    const auto j = japanese_derivative(mode, 2.0);
    CHECK_THAT(j.coeffs[g.slot(2)].real(), WithinRel(5.0, 1e-14));
}

TEST_CASE("hermitian symmetry detects real data") {
    const auto g = make_grid(4.0, 64);
    std::vector<double> real(g.n);
    for (std::size_t j = 0; j < g.n; ++j) real[j] = std::exp(-g.x(j) * g.x(j)) * (1 + g.x(j));
    const auto F = forward(g, real);
    CHECK(hermitian_defect(F.coeffs) < 1e-14);
    CHECK(is_real_field(F));

    SpectralField G{g, random_samples(g.n, 5)};
    CHECK_FALSE(is_real_field(G));
}
