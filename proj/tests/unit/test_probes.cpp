#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dgbo/errors.hpp"
#include "dgbo/probes.hpp"
#include "dgbo/seed.hpp"

using namespace dgbo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SweepSpec small_sweep() {
    SweepSpec s;
    s.base.half_width = 8 * std::numbers::pi;
    s.base.n_x = 128;
    s.base.n_t = 256;
    s.base.T = 0.1;
    s.amplitude = 0.01;
    s.seed = 3;
    return s;
}

ProbeSpec small_probe() {
    ProbeSpec p;
    p.Ns = {4, 8, 16, 32};
    p.alpha = 0.25;
    p.s = 0.0;
    p.rs = {1.2, 2.0};
    p.t = 1.0;
    p.seed = 11;
    p.points_per_unit = 8;
    return p;
}

}  // namespace

TEST_CASE("threshold values") {
    CHECK_THAT(threshold(0.5, 1.25), WithinAbs(0.3, 1e-15));
    CHECK_THAT(threshold(1.0, 1.5), WithinAbs(-1.0 / 3.0, 1e-15));
    CHECK_THAT(threshold(1.0, 2.0 - 1e-12), WithinAbs(-0.75, 1e-9));
    CHECK(threshold(1.0, 1.9) < 0.0);
    CHECK(threshold(0.5, 1.05) > 0.0);

    for (double a : {0.0, -0.1, 1.1, std::nan("")}) CHECK_THROWS_AS(threshold(a, 1.05), ValidationError);
    for (double r : {1.0, 2.0, 0.5}) CHECK_THROWS_AS(threshold(1.0, r), ValidationError);
    CHECK_THROWS_AS(threshold(0.5, 1.5), ValidationError);
    try {
        threshold(0.5, 1.6);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
    }
}

TEST_CASE("threshold is decreasing in r and alpha") {
    const double h = 1e-6;
    for (double a = 0.05; a <= 1.0; a += 0.05)
        for (double f = 0.05; f < 0.95; f += 0.05) {
            const double r = 1.0 + f * a;
            CHECK(threshold(a, r + h) < threshold(a, r));
            // analytic r-derivative against the difference
            const double fd = (threshold(a, r + h) - threshold(a, r - h)) / (2 * h);
            CHECK_THAT(fd, WithinRel(-(2.0 + a / 2.0) / (r * r), 1e-6));
            if (a + 0.01 <= 1.0) CHECK(threshold(a + 0.01, r) < threshold(a, r));
        }
}

TEST_CASE("sweep above the threshold contracts") {
    auto spec = small_sweep();
    spec.alphas = {1.0, 0.5};
    spec.rs = {1.2, 1.4};
    spec.s_offsets = {0.5};
    const auto recs = threshold_sweep(spec);
    REQUIRE(recs.size() == 4);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        INFO("alpha " << r.alpha << " r " << r.r << " " << r.error);
        CHECK(r.error.empty());
        CHECK(r.seed == derive_seed(spec.seed, i));
        CHECK_THAT(r.s, WithinAbs(threshold(r.alpha, r.r) + 0.5, 1e-15));
        CHECK(r.converged);
        CHECK_FALSE(r.diverged);
        REQUIRE(!r.kappas.empty());
        for (double k : r.kappas) CHECK(k < 1.0);
    }
    CHECK(recs[0].alpha == 1.0);
    CHECK(recs[0].r == 1.2);
    CHECK(recs[1].r == 1.4);
    CHECK(recs[2].alpha == 0.5);

    const auto again = threshold_sweep(spec);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(again[i].kappas == recs[i].kappas);
        CHECK(again[i].residual == recs[i].residual);
    }
}

TEST_CASE("sweep records failures per cell") {
    auto spec = small_sweep();
    CHECK(threshold_sweep(spec).empty());

    spec.alphas = {0.5};
    spec.rs = {1.9, 1.2};  // 1.9 is outside 1 < r < 1.5
    spec.s_offsets = {0.5};
    std::vector<SweepRecord> recs;
    REQUIRE_NOTHROW(recs = threshold_sweep(spec));
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].error.find("1 < r < 1 + alpha") != std::string::npos);
    CHECK(recs[1].error.empty());
}

TEST_CASE("probe table shape and labels") {
    const auto spec = small_probe();
    const auto recs = illposedness_probe(spec);
    REQUIRE(recs.size() == spec.Ns.size() * spec.rs.size());
    for (std::size_t ir = 0; ir < spec.rs.size(); ++ir)
        for (std::size_t iN = 0; iN < spec.Ns.size(); ++iN) {
            const auto& r = recs[ir * spec.Ns.size() + iN];
            CHECK(r.N == spec.Ns[iN]);
            CHECK(r.r == spec.rs[ir]);
            CHECK(r.space == (spec.rs[ir] == 2.0 ? "H" : "FL"));
            CHECK(std::isfinite(r.ratio));
            CHECK(r.ratio > 0.0);
            CHECK(r.data_norm > 0.0);
            CHECK_THAT(r.ratio, WithinRel(r.second_norm / (r.data_norm * r.data_norm), 1e-15));
            if (iN == 0)
                CHECK(r.growth == 0.0);
            else
                CHECK_THAT(r.growth, WithinRel(r.ratio / recs[ir * spec.Ns.size() + iN - 1].ratio, 1e-15));
        }

    const auto again = illposedness_probe(spec);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(again[i].ratio == recs[i].ratio);
        CHECK(again[i].monotone == recs[i].monotone);
    }
}

TEST_CASE("probe data norm at r = 2, s = 0") {
    // two orthogonal unit bumps; the r = 2 FL norm is sqrt(2 pi) times L2
    const double c = std::sqrt(2 * std::numbers::pi);
    auto spec = small_probe();
    spec.rs = {2.0};
    for (const auto& r : illposedness_probe(spec)) CHECK_THAT(r.data_norm, WithinRel(c * std::sqrt(2.0), 1e-12));
    spec.include_high = false;
    for (const auto& r : illposedness_probe(spec)) CHECK_THAT(r.data_norm, WithinRel(c, 1e-12));
}

TEST_CASE("probe trivial cases") {
    auto spec = small_probe();
    spec.include_high = false;
    const auto low = illposedness_probe(spec);
    for (std::size_t ir = 0; ir < spec.rs.size(); ++ir) {
        const double first = low[ir * spec.Ns.size()].ratio;
        for (std::size_t iN = 0; iN < spec.Ns.size(); ++iN) CHECK(low[ir * spec.Ns.size() + iN].ratio == first);
    }

    spec = small_probe();
    spec.t = 0.0;
    for (const auto& r : illposedness_probe(spec)) {
        CHECK(r.second_norm == 0.0);
        CHECK(r.ratio == 0.0);
        CHECK(r.growth == 0.0);
    }
}

TEST_CASE("probe preconditions") {
    auto bad = [](auto mutate) {
        auto p = small_probe();
        mutate(p);
        return p;
    };
    CHECK_THROWS_AS(illposedness_probe(bad([](ProbeSpec& p) { p.Ns = {2}; })), ValidationError);
    CHECK_THROWS_AS(illposedness_probe(bad([](ProbeSpec& p) { p.Ns = {12}; })), ValidationError);
    CHECK_THROWS_AS(illposedness_probe(bad([](ProbeSpec& p) { p.alpha = 0.0; })), ValidationError);
    CHECK_THROWS_AS(illposedness_probe(bad([](ProbeSpec& p) { p.t = -1.0; })), ValidationError);
    CHECK_THROWS_AS(illposedness_probe(bad([](ProbeSpec& p) { p.rs = {1.0}; })), ValidationError);
    CHECK_THROWS_AS(illposedness_probe(bad([](ProbeSpec& p) { p.points_per_unit = 2; })), ValidationError);
}
