#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dgbo/dyadic.hpp"
#include "dgbo/errors.hpp"
#include "dgbo/linear.hpp"
#include "dgbo/probes.hpp"
#include "dgbo/solver.hpp"

using namespace dgbo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

SolveConfig smooth_config(double alpha) {
    SolveConfig c;
    c.alpha = alpha;
    c.half_width = 8 * pi;
    c.n_x = 128;
    c.T = 1.0;
    c.dt = 1e-3;
    return c;
}

SolveConfig picard_config() {
    SolveConfig c = smooth_config(1.0);
    c.r = 1.9;
    c.s = 0.0;
    c.T = 0.1;
    c.n_t = 256;
    return c;
}

double rel_l2(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] -= b.coeffs[i];
    return l2_norm(d) / l2_norm(b);
}

SpectralField field_from(const Grid1D& g, double (*f)(double)) {
    std::vector<double> v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) v[j] = f(g.x(j));
    return forward(g, v);
}

SpectralField times(SpectralField f, double c) {
    for (auto& v : f.coeffs) v *= c;
    return f;
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_NOTHROW(validate(SolveConfig{}));
    auto bad = [](auto mutate) {
        SolveConfig c;
        mutate(c);
        return c;
    };
    CHECK_THROWS_AS(validate(bad([](SolveConfig& c) { c.alpha = 1.5; })), ValidationError);
    CHECK_THROWS_AS(validate(bad([](SolveConfig& c) { c.alpha = 0.0; })), ValidationError);
    CHECK_THROWS_AS(validate(bad([](SolveConfig& c) { c.r = 1.0; })), ValidationError);
    CHECK_THROWS_AS(validate(bad([](SolveConfig& c) { c.dt = 0.0; })), ValidationError);
    CHECK_THROWS_AS(validate(bad([](SolveConfig& c) { c.epsilon = 0.0; })), ValidationError);
    CHECK_THROWS_AS(validate(bad([](SolveConfig& c) { c.n_t = 100; })), ValidationError);
    try {
        validate(bad([](SolveConfig& c) { c.alpha = 1.5; }));
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("(0, 1]") != std::string::npos);
    }
}

TEST_CASE("nonlinearity") {
    const auto g = make_grid(pi, 64);
    const auto c = field_from(g, [](double x) { return std::cos(x); });
    const auto want = field_from(g, [](double x) { return 0.5 * std::sin(2 * x); });
    for (bool dealias : {true, false}) {
        const auto n = nonlinearity(c, dealias);
        for (std::size_t i = 0; i < g.n; ++i) CHECK(std::abs(n.coeffs[i] - want.coeffs[i]) < 1e-13);
    }
    const auto k = field_from(g, [](double) { return 3.0; });
    for (auto v : nonlinearity(k).coeffs) CHECK(std::abs(v) < 1e-13);

    const auto phi = random_band_limited(g, 20.0, 4);
    for (bool dealias : {true, false}) {
        const auto n = nonlinearity(phi, dealias);
        CHECK(n.coeffs[0] == cplx(0.0));
        CHECK(is_real_field(n));
    }
    // dealiased output lives on |k| < n/3
    const auto n = nonlinearity(phi, true);
    for (std::size_t i = 0; i < g.n; ++i)
        if (3 * std::abs(g.wavenumber(i)) >= static_cast<long>(g.n)) CHECK(n.coeffs[i] == cplx(0.0));

    SpectralField cplx_field = phi;
    cplx_field.coeffs[g.slot(2)] += cplx(0.0, 1.0);
    CHECK_THROWS_AS(nonlinearity(cplx_field), ValidationError);
}

TEST_CASE("ifrk4 step") {
    const auto g = make_grid(8 * pi, 128);
    SpectralField zero{g, std::vector<cplx>(g.n)};
    for (auto v : step_ifrk4(zero, 0.01, 0.5).coeffs) CHECK(v == cplx(0.0));

    // nonlinear part is quadratic in the amplitude
    const auto phi = random_band_limited(g, 2.0, 1);
    const double dt = 0.01;
    auto defect = [&](double eps) {
        const auto u = times(phi, eps);
        return rel_l2(step_ifrk4(u, dt, 0.5), propagate(u, dt, 0.5)) * l2_norm(u);
    };
    const double d1 = defect(1e-2), d2 = defect(5e-3);
    CHECK_THAT(d1 / d2, WithinRel(4.0, 0.02));
    CHECK(d1 < 1.0 * 1e-4 * dt);

    SpectralField blow = phi;
    blow.coeffs[g.slot(1)] = cplx(NAN, 0.0);
    blow.coeffs[g.slot(-1)] = cplx(NAN, 0.0);
    CHECK_THROWS_AS(step_ifrk4(blow, dt, 0.5), RuntimeFailure);
}

TEST_CASE("ifrk4 is fourth order") {
    const auto g = make_grid(8 * pi, 128);
    const auto u0 = random_band_limited(g, 2.0, 6, 2.0);
    const double alpha = 0.5, T = 0.5;
    auto run = [&](int steps) {
        auto u = u0;
        for (int i = 0; i < steps; ++i) u = step_ifrk4(u, T / steps, alpha);
        return u;
    };
    const auto ref = run(640);
    const double e1 = rel_l2(run(20), ref), e2 = rel_l2(run(40), ref);
    INFO("errors " << e1 << " " << e2);
    CHECK(e1 / e2 > 8.0);
    CHECK(e1 / e2 < 32.0);
}

TEST_CASE("solve conserves mean, L2 and energy") {
    SolveConfig z = smooth_config(1.0);
    z.T = 0.1;
    const auto zero = solve(SpectralField{z.space(), std::vector<cplx>(z.n_x)}, z);
    for (const auto& u : zero.trajectory)
        for (auto v : u.coeffs) CHECK(v == cplx(0.0));

    for (double alpha : {0.5, 1.0}) {
        const auto cfg = smooth_config(alpha);
        auto u0 = random_band_limited(cfg.space(), 2.0, 3, 0.05);
        u0.coeffs[0] = 0.02;  // nonzero mean
        const auto res = solve(u0, cfg);
        REQUIRE(res.diagnostics.size() == cfg.n_samples + 1);
        CHECK(res.times.back() == cfg.T);
        const auto& d0 = res.diagnostics.front();
        for (const auto& d : res.diagnostics) {
            CHECK_THAT(d.mean, WithinAbs(d0.mean, 1e-12 * std::abs(d0.mean)));
            CHECK(std::abs(d.l2 - d0.l2) / d0.l2 < 1e-8);
            CHECK(std::abs(d.energy - d0.energy) / std::abs(d0.energy) < 1e-6);
        }
    }
}

TEST_CASE("energy has the conserved sign") {
    // E = 1/2 ||D^{(1+a)/2} u||^2 + 1/6 int u^3 for a single cosine plus a mean
    const auto g = make_grid(pi, 32);
    const auto u = field_from(g, [](double x) { return 0.5 + std::cos(x); });
    // int (0.5 + cos)^3 over [-pi, pi) = 2 pi (1/8 + 3 * 0.5 / 2)
    const double cubic = 2 * pi * (0.125 + 0.75);
    const double quad = 0.5 * pi;  // 1/2 int cos^2, |xi| = 1
    CHECK_THAT(energy(u, 0.7), WithinRel(quad + cubic / 6.0, 1e-12));
    CHECK_THAT(mean_value(u), WithinRel(0.5, 1e-12));
    CHECK_THAT(l2_norm(u), WithinRel(std::sqrt(2 * pi * 0.25 + pi), 1e-12));
}

TEST_CASE("picard: zero data and first iterate") {
    auto cfg = picard_config();
    const auto zero = picard_iterate(SpectralField{cfg.space(), std::vector<cplx>(cfg.n_x)}, cfg);
    CHECK(zero.converged);
    CHECK(zero.kappas.empty());
    CHECK(zero.iterates.size() <= 2);

    const auto u0 = random_band_limited(cfg.space(), 2.0, 8, 0.01);
    const auto res = picard_iterate(u0, cfg);
    REQUIRE(!res.iterates.empty());
    const auto want = cutoff_evolution(u0, cfg.alpha, cfg.picard_grid().time, 1.0);
    CHECK(res.iterates.front().data == want.data);
}

TEST_CASE("picard contracts above the threshold") {
    const auto cfg = picard_config();
    REQUIRE(cfg.s > threshold(cfg.alpha, cfg.r));
    const auto u0 = random_band_limited(cfg.space(), 2.0, 8, 0.01);
    const auto res = picard_iterate(u0, cfg);
    CHECK(res.converged);
    CHECK_FALSE(res.diverged);
    REQUIRE(!res.kappas.empty());
    for (double k : res.kappas) CHECK(k < 1.0);

    const auto small = picard_iterate(times(u0, 0.1), cfg);
    REQUIRE(!small.kappas.empty());
    CHECK(small.kappas.front() < res.kappas.front());

    const double gap = solve_picard_gap(u0, cfg, res);
    INFO("gap " << gap);
    CHECK(gap < 1e-4);
}

TEST_CASE("picard reports divergence instead of throwing") {
    auto cfg = picard_config();
    cfg.T = 0.5;
    cfg.max_picard_iters = 12;
    const auto u0 = random_band_limited(cfg.space(), 2.0, 8, 200.0);
    PicardResult res;
    REQUIRE_NOTHROW(res = picard_iterate(u0, cfg));
    CHECK_FALSE(res.converged);
    CHECK(res.diverged);
}

TEST_CASE("nonlinear estimate ratio") {
    const auto g = make_space_time_grid(8 * pi, 128, 4.0, 256);
    const auto u = random_space_time_field(g, 2.0, 4.0, 1.0, 5);
    const double base = nonlinear_estimate_ratio(u, 0.0, 1.9, 0.05, 1.0);
    CHECK(std::isfinite(base));
    CHECK(base > 0.0);
    SpaceTimeField cu = u;
    for (auto& v : cu.coeffs) v *= -3.5;
    CHECK_THAT(nonlinear_estimate_ratio(cu, 0.0, 1.9, 0.05, 1.0), WithinRel(base, 1e-10));

    SpaceTimeField zero{g, std::vector<cplx>(g.space.n * g.time.n)};
    CHECK_THROWS_AS(nonlinear_estimate_ratio(zero, 0.0, 1.9, 0.05, 1.0), ValidationError);
}

TEST_CASE("scaling symmetry") {
    auto cfg = smooth_config(1.0);
    cfg.T = 0.25;
    const auto u0 = random_band_limited(cfg.space(), 1.0, 12, 0.05);
    CHECK(scaling_check(u0, 1.0, cfg) == 0.0);
    const double gap = scaling_check(u0, 2.0, cfg);
    INFO("gap " << gap);
    CHECK(gap < 1e-4);

    CHECK(scaling_exponent(0.5) == 1.5);
    CHECK(critical_index(0.5) == -1.0);
    for (double a : {0.25, 1.0})
        for (double lam : {0.5, 2.0, 3.0}) {
            const auto v = rescale_data(u0, lam, scaling_exponent(a));
            CHECK_THAT(v.grid.half_width, WithinRel(cfg.half_width / lam, 1e-15));
            const NormParams p{critical_index(a), 0.0, 2.0, a};
            CHECK_THAT(fl_norm(v, p, true), WithinRel(fl_norm(u0, p, true), 1e-10));
        }
}
