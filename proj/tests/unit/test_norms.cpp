#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "dgbo/errors.hpp"
#include "dgbo/linear.hpp"
#include "dgbo/norms.hpp"

using namespace dgbo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<cplx> gaussian_coeffs(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& c : v) c = {g(gen), g(gen)};
    return v;
}

SpectralField random_field(const Grid1D& g, std::uint64_t seed) { return {g, gaussian_coeffs(g.n, seed)}; }

SpaceTimeField random_st(const SpaceTimeGrid& g, std::uint64_t seed) {
    return {g, gaussian_coeffs(g.space.n * g.time.n, seed)};
}

}  // namespace

TEST_CASE("fl_norm one and two term sums") {
    const auto g = make_grid(pi / std::sqrt(3.0), 8);  // xi_1 = sqrt 3
    SpectralField f{g, std::vector<cplx>(g.n)};
    f.coeffs[0] = 1.0;
    for (double s : {-1.0, 0.0, 2.5})
        for (double r : {1.25, 2.0, 7.0})
            CHECK_THAT(fl_norm(f, {s, 0.0, r, 1.0}), WithinRel(std::pow(g.dxi(), 1.0 - 1.0 / r), 1e-13));

    f.coeffs[g.slot(1)] = 1.0;
    // r' -> 1 as r -> inf; the endpoint itself is outside the domain
    CHECK_THAT(fl_norm(f, {1.0, 0.0, 1e12, 1.0}), WithinRel(3.0 * g.dxi(), 1e-9));
    CHECK_THROWS_AS(fl_norm(f, {1.0, 0.0, infinity, 1.0}), ValidationError);
    CHECK_THROWS_AS(fl_norm(f, {0.0, 0.0, 1.0, 1.0}), ValidationError);
}

TEST_CASE("fl_norm at r = 2 matches physical L2") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto g = make_grid(5.0, 128);
        const auto f = random_field(g, seed);
        const auto u = inverse(f);
        double l2 = 0.0;
        for (auto v : u) l2 += std::norm(v) * g.dx();
        CHECK_THAT(fl_norm(f, {0.0, 0.0, 2.0, 1.0}) / std::sqrt(2 * pi), WithinRel(std::sqrt(l2), 1e-10));
    }
}

TEST_CASE("homogeneous weight is singular at the origin") {
    const auto g = make_grid(4.0, 32);
    auto f = random_field(g, 1);
    CHECK_THROWS_AS(fl_norm(f, {-0.5, 0.0, 2.0, 1.0}, true), ValidationError);
    CHECK_NOTHROW(fl_norm(f, {0.5, 0.0, 2.0, 1.0}, true));
    f.coeffs[0] = 0.0;
    CHECK(fl_norm(f, {-0.5, 0.0, 2.0, 1.0}, true) > 0.0);
}

TEST_CASE("norms are homogeneous, subadditive and monotone in s") {
    const auto g = make_grid(6.0, 64);
    const auto st = make_space_time_grid(6.0, 16, 2.0, 16);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const NormParams p{U(gen), U(gen), 1.1 + std::abs(U(gen)), 0.5};
        const auto f = random_field(g, 100 + trial), h = random_field(g, 200 + trial);
        const cplx c(U(gen), U(gen));
        auto cf = f, sum = f;
        for (std::size_t i = 0; i < g.n; ++i) cf.coeffs[i] *= c, sum.coeffs[i] += h.coeffs[i];
        CHECK_THAT(fl_norm(cf, p), WithinRel(std::abs(c) * fl_norm(f, p), 1e-12));
        CHECK(fl_norm(sum, p) <= (fl_norm(f, p) + fl_norm(h, p)) * (1 + 1e-12));

        auto p2 = p;
        p2.s = p.s + 0.3;
        CHECK(fl_norm(f, p) <= fl_norm(f, p2));

        const auto u = random_st(st, 300 + trial), v = random_st(st, 400 + trial);
        auto cu = u, uv = u;
        for (std::size_t i = 0; i < u.coeffs.size(); ++i) cu.coeffs[i] *= c, uv.coeffs[i] += v.coeffs[i];
        CHECK_THAT(xsb_norm(cu, p), WithinRel(std::abs(c) * xsb_norm(u, p), 1e-12));
        CHECK(xsb_norm(uv, p) <= (xsb_norm(u, p) + xsb_norm(v, p)) * (1 + 1e-12));

        const auto su = inverse(u), sv = inverse(v), suv = inverse(uv), scu = inverse(cu);
        const double q = 1.0 + std::abs(U(gen)), pp = trial % 3 == 0 ? infinity : 1.0 + std::abs(U(gen));
        CHECK_THAT(mixed_norm(scu, q, pp), WithinRel(std::abs(c) * mixed_norm(su, q, pp), 1e-12));
        CHECK(mixed_norm(suv, q, pp) <= (mixed_norm(su, q, pp) + mixed_norm(sv, q, pp)) * (1 + 1e-12));
        CHECK_THAT(smoothing_norm(scu, p.r), WithinRel(std::abs(c) * smoothing_norm(su, p.r), 1e-12));
        CHECK(smoothing_norm(suv, p.r) <= (smoothing_norm(su, p.r) + smoothing_norm(sv, p.r)) * (1 + 1e-12));
    }
}

TEST_CASE("xsb_norm single modes and collapse") {
    const auto st = make_space_time_grid(3.0, 16, 4.0, 32);
    const double a = 0.5;
    SpaceTimeField u{st, std::vector<cplx>(16 * 32)};
    const std::size_t i = st.space.slot(3), m = st.time.slot(-5);
    u.at(i, m) = 1.0;
    const double xi = st.space.xi(i), tau = st.time.xi(m);
    for (double s : {-1.0, 0.5})
        for (double b : {-0.3, 0.7})
            for (double r : {1.3, 2.0, 4.0}) {
                const double expect = std::pow(japanese(xi), s) * std::pow(japanese(tau - dispersion(xi, a)), b) *
                                      std::pow(st.space.dxi() * st.time.dxi(), 1.0 - 1.0 / r);
                CHECK_THAT(xsb_norm(u, {s, b, r, a}), WithinRel(expect, 1e-12));
            }

    // b = s = 0: plain l^{r'} over the joint lattice
    const auto v = random_st(st, 4);
    for (double r : {1.5, 2.0, 3.0}) {
        const double rc = r / (r - 1);
        double sum = 0.0;
        for (auto c : v.coeffs) sum += std::pow(std::abs(c), rc);
        CHECK_THAT(xsb_norm(v, {0.0, 0.0, r, a}),
                   WithinRel(std::pow(sum * st.space.dxi() * st.time.dxi(), 1.0 / rc), 1e-12));
    }

    // r = 2: space-time Parseval
    const auto sv = inverse(v);
    double l2 = 0.0;
    for (auto c : sv.values) l2 += std::norm(c) * st.space.dx() * st.time.dx();
    CHECK_THAT(xsb_norm(v, {0.0, 0.0, 2.0, a}), WithinRel(2 * pi * std::sqrt(l2), 1e-10));
}

TEST_CASE("xsb_norm ignores b on the characteristic") {
    // t_width = pi gives integer tau lattice; alpha = 1 gives integer omega on integer xi.
    const auto st = make_space_time_grid(pi, 8, pi, 64);
    SpaceTimeField u{st, std::vector<cplx>(8 * 64)};
    for (long k = -1; k <= 2; ++k) u.at(st.space.slot(k), st.time.slot(static_cast<long>(dispersion(k, 1.0)))) = 1.0;
    const double base = xsb_norm(u, {0.0, 0.0, 2.0, 1.0});
    for (double b : {-0.4, 0.3, 2.0}) CHECK_THAT(xsb_norm(u, {0.0, b, 2.0, 1.0}), WithinRel(base, 1e-14));
}

TEST_CASE("mixed_norm constants and point masses") {
    const auto st = make_space_time_grid(2.5, 16, 1.5, 32);
    SpaceTimeSamples one{st, std::vector<cplx>(16 * 32, 1.0)};
    for (double q : {1.0, 2.0, 4.5, infinity})
        for (double p : {1.0, 3.0, infinity}) {
            const double expect = (std::isinf(q) ? 1.0 : std::pow(3.0, 1.0 / q)) *
                                  (std::isinf(p) ? 1.0 : std::pow(5.0, 1.0 / p));
            CHECK_THAT(mixed_norm(one, q, p), WithinRel(expect, 1e-12));
        }

    SpaceTimeSamples delta{st, std::vector<cplx>(16 * 32)};
    delta.at(5, 9) = 2.0;
    for (double q : {1.0, 2.5, infinity})
        for (double p : {1.5, infinity}) {
            const double expect = 2.0 * (std::isinf(q) ? 1.0 : std::pow(st.time.dx(), 1.0 / q)) *
                                  (std::isinf(p) ? 1.0 : std::pow(st.space.dx(), 1.0 / p));
            CHECK_THAT(mixed_norm(delta, q, p), WithinRel(expect, 1e-12));
        }
    CHECK_THROWS_AS(mixed_norm(one, 0.5, 2.0), ValidationError);
}

TEST_CASE("unitarity: L-inf_t L2_x of a free wave is the data norm") {
    const auto g = make_grid(8.0, 128);
    const auto phi = random_band_limited(g, 5.0, 3);
    const auto time = make_grid(1.0, 32);
    const auto u = free_evolution(phi, 0.7, time);
    const double data = fl_norm(phi, {0.0, 0.0, 2.0, 0.7}) / std::sqrt(2 * pi);
    CHECK_THAT(mixed_norm(u, infinity, 2.0), WithinRel(data, 1e-12));
    // every slice carries the same norm, so the q = 2 norm is the data norm times sqrt(2 t_width)
    CHECK_THAT(mixed_norm(u, 2.0, 2.0), WithinRel(data * std::sqrt(2.0), 1e-12));
}

TEST_CASE("smoothing_norm of x-independent data is the time FL norm") {
    const auto st = make_space_time_grid(2.0, 8, 3.0, 64);
    std::vector<double> gt(64);
    for (std::size_t m = 0; m < 64; ++m) gt[m] = std::exp(-st.time.x(m) * st.time.x(m)) * std::cos(2 * st.time.x(m));
    SpaceTimeSamples u{st, {}};
    for (std::size_t j = 0; j < 8; ++j)
        for (std::size_t m = 0; m < 64; ++m) u.values.push_back(gt[m]);
    const auto G = forward(st.time, gt);
    for (double r : {1.25, 2.0, 5.0}) CHECK_THAT(smoothing_norm(u, r), WithinRel(fl_norm(G, {0.0, 0.0, r, 1.0}), 1e-12));

    SpaceTimeSamples zero{st, std::vector<cplx>(8 * 64)};
    CHECK(smoothing_norm(zero, 2.0) == 0.0);
}

TEST_CASE("time spectrum of a free wave is x-independent") {
    // band [1, 2]; the window is long enough that truncation leakage sits below 1e-8
    const double alpha = 1.0, tw = 16.0;
    const auto g = smoothing_space_grid(2.0, alpha, tw);
    const auto phi = band_bump(g, 1.0, 2.0);
    const auto time = make_grid(tw, 256);
    const auto chk = local_smoothing_check(phi, 2.0, alpha, time);
    CHECK(chk.band > 1.0);
    CHECK(chk.spread < 1e-8);
}
