#include "dgbo/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dgbo/dyadic.hpp"
#include "dgbo/errors.hpp"

namespace dgbo {
namespace {

double recip(double v) { return std::isinf(v) ? 0.0 : 1.0 / v; }

std::string num(double v) {
    if (std::isinf(v)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double peak_modulus(const std::vector<cplx>& c) {
    double m = 0.0;
    for (auto z : c) m = std::max(m, std::abs(z));
    return m;
}

void check_cutoff_window(const Grid1D& time, double T) {
    if (!(T > 0.0 && std::isfinite(T))) fail_validation(ErrorKind::Domain, "T must be positive, got " + num(T));
    if (1.25 * T >= time.half_width)
        fail_validation(ErrorKind::Grid, "time window [-" + num(time.half_width) + ", " + num(time.half_width) +
                                             ") does not contain the cutoff support |t| < " + num(1.25 * T));
}

double checked_ratio(double top, double bottom) {
    if (!(bottom > 0.0)) fail_validation(ErrorKind::Domain, "undefined ratio: denominator is zero");
    return top / bottom;
}

}  // namespace

std::string strichartz_violation(double q, double p, double r) {
    if (!(q >= 1.0) || !(p >= 1.0)) return "q and p must lie in [1, inf]";
    if (!(r > 1.0 && std::isfinite(r))) return "r must lie in (1, inf)";
    const double iq = recip(q), ip = recip(p);
    if (std::abs(2.0 * iq + ip - 1.0 / r) > 1e-12)
        return "2/q + 1/p = " + num(2.0 * iq + ip) + " differs from 1/r = " + num(1.0 / r);
    const bool c1 = q >= 4.0 && p > 4.0;
    const bool c2 = ip >= 0.25 && ip + iq < 0.5;
    const bool c3 = std::isinf(q) && p == 2.0;
    if (c1 || c2 || c3) return {};
    std::string why = "(q, p) = (" + num(q) + ", " + num(p) + ") meets no admissibility condition:";
    why += q < 4.0 ? " (1) needs q >= 4;" : " (1) needs p > 4;";
    why += ip < 0.25 ? " (2) needs 1/p >= 1/4;" : " (2) needs 1/p + 1/q < 1/2;";
    why += " (3) needs (q, p) = (inf, 2)";
    return why;
}

SpaceTimeSamples free_evolution(const SpectralField& phi, double alpha, const Grid1D& time) {
    check_alpha(alpha);
    SpaceTimeSamples out{SpaceTimeGrid{phi.grid, time}, std::vector<cplx>(phi.grid.n * time.n)};
    for (std::size_t m = 0; m < time.n; ++m) {
        const auto u = inverse(propagate(phi, time.x(m), alpha));
        for (std::size_t i = 0; i < phi.grid.n; ++i) out.at(i, m) = u[i];
    }
    return out;
}

double strichartz_ratio(const SpectralField& phi, double q, double p, double r, double alpha, const Grid1D& time) {
    if (auto why = strichartz_violation(q, p, r); !why.empty()) fail_validation(ErrorKind::Admissibility, why);
    check_alpha(alpha);
    const double gain = std::isinf(q) ? 0.0 : alpha / q;
    const double top = mixed_norm(free_evolution(abs_derivative(phi, gain), alpha, time), q, p);
    const double rc = r / (r - 1.0);
    const double bottom = std::pow(2.0 * std::numbers::pi, -1.0 / rc) * fl_norm(phi, NormParams{0.0, 0.0, r, alpha});
    return checked_ratio(top, bottom);
}

SmoothingCheck local_smoothing_check(const SpectralField& phi, double r, double alpha, const Grid1D& time) {
    check_alpha(alpha);
    validate(NormParams{0.0, 0.0, r, alpha});
    SmoothingCheck out;
    out.constant = std::pow(2.0 + alpha, -1.0 / r);
    const double peak = peak_modulus(phi.coeffs);
    if (peak == 0.0) return out;
    if (std::abs(phi.coeffs[0]) > 1e-13 * peak)
        fail_validation(ErrorKind::SingularSymbol, "local smoothing needs phi-hat to vanish at xi = 0");

    double lo = infinity, hi = 0.0;
    for (std::size_t i = 0; i < phi.grid.n; ++i) {
        if (std::abs(phi.coeffs[i]) <= 1e-12 * peak) continue;
        const double a = std::abs(phi.grid.xi(i));
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    const double v_min = std::abs(group_velocity(lo, alpha));
    const double v_max = std::abs(group_velocity(hi, alpha));
    const double tw = time.half_width;
    if (v_max * tw > 0.5 * phi.grid.half_width)
        fail_validation(ErrorKind::Grid, "packets wrap around: v_max * t_width = " + num(v_max * tw) +
                                             " exceeds half_width / 2 = " + num(0.5 * phi.grid.half_width));
    out.band = 0.25 * v_min * tw;

    const auto u = free_evolution(phi, alpha, time);
    std::vector<cplx> rows;
    for (std::size_t j = 0; j < phi.grid.n; ++j) {
        if (std::abs(phi.grid.x(j)) > out.band) continue;
        rows.insert(rows.end(), u.values.begin() + j * time.n, u.values.begin() + (j + 1) * time.n);
    }
    const auto prof = smoothing_profile(rows, time, r);
    const auto [mn, mx] = std::minmax_element(prof.begin(), prof.end());
    double mean = 0.0;
    for (double v : prof) mean += v;
    mean /= static_cast<double>(prof.size());
    out.lhs = *mx;
    out.spread = mean > 0.0 ? (*mx - *mn) / mean : 0.0;
    out.rhs = out.constant * fl_norm(phi, NormParams{-(1.0 + alpha) / r, 0.0, r, alpha}, true);
    out.rel_error = std::abs(out.lhs - out.rhs) / out.rhs;
    return out;
}

Grid1D smoothing_space_grid(double xi_hi, double alpha, double t_width) {
    check_alpha(alpha);
    if (!(xi_hi > 0.0) || !(t_width > 0.0)) fail_validation(ErrorKind::Domain, "xi_hi and t_width must be positive");
    const double L = 2.0 * std::abs(group_velocity(xi_hi, alpha)) * t_width;
    // xi_max = (n/2) pi / L >= 2 xi_hi
    std::size_t n = 8;
    while (static_cast<double>(n) < 4.0 * xi_hi * L / std::numbers::pi) n *= 2;
    return make_grid(L, n);
}

SpectralField band_bump(const Grid1D& grid, double lo, double hi) {
    if (!(lo > 0.0 && hi > lo)) fail_validation(ErrorKind::Domain, "band_bump needs 0 < lo < hi");
    const double c = 0.5 * (lo + hi), w = 0.5 * (hi - lo), sigma = 0.15 * (hi - lo);
    SpectralField out{grid, std::vector<cplx>(grid.n)};
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double y = (grid.xi(i) - c) / w;
        if (std::abs(y) >= 1.0) continue;
        const double d = grid.xi(i) - c;
        out.coeffs[i] = std::exp(1.0 - 1.0 / (1.0 - y * y)) * std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return out;
}

SpectralField random_band_limited(const Grid1D& grid, double xi_max, std::uint64_t seed, double l2) {
    const long kmax = std::min(static_cast<long>(std::floor(xi_max / grid.dxi())), static_cast<long>(grid.n / 2) - 1);
    if (kmax < 1) fail_validation(ErrorKind::Resolution, "band |xi| <= " + num(xi_max) + " holds no nonzero mode");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SpectralField out{grid, std::vector<cplx>(grid.n)};
    double sum = 0.0;
    for (long k = 1; k <= kmax; ++k) {
        const cplx z(g(rng), g(rng));
        out.coeffs[grid.slot(k)] = z;
        out.coeffs[grid.slot(-k)] = std::conj(z);
        sum += 2.0 * std::norm(z);
    }
    // Parseval: ||f||^2 = (1/2pi) sum |f^|^2 dxi
    const double norm = std::sqrt(sum * grid.dxi() / (2.0 * std::numbers::pi));
    for (auto& c : out.coeffs) c *= l2 / norm;
    return out;
}

SliceField duhamel_integral(const SliceField& forcing, double alpha) {
    check_alpha(alpha);
    const auto& g = forcing.grid;
    const std::size_t nx = g.space.n, nt = g.time.n, m0 = nt / 2;
    const double dt = g.time.dx();

    // Interaction picture: G(t) = int_0^t W(-s) F(s) ds, then W(t) G(t).
    SliceField pulled = make_slice_field(g);
    for (std::size_t m = 0; m < nt; ++m) {
        const double t = g.time.x(m);
        auto dst = pulled.slice(m);
        auto src = forcing.slice(m);
        for (std::size_t i = 0; i < nx; ++i) dst[i] = src[i] * std::polar(1.0, -t * dispersion(g.space.xi(i), alpha));
    }
    SliceField acc = make_slice_field(g);
    for (std::size_t m = m0 + 1; m < nt; ++m) {
        auto a = acc.slice(m);
        auto prev = acc.slice(m - 1);
        auto f0 = pulled.slice(m - 1), f1 = pulled.slice(m);
        for (std::size_t i = 0; i < nx; ++i) a[i] = prev[i] + 0.5 * dt * (f0[i] + f1[i]);
    }
    for (std::size_t m = m0; m-- > 0;) {
        auto a = acc.slice(m);
        auto next = acc.slice(m + 1);
        auto f0 = pulled.slice(m), f1 = pulled.slice(m + 1);
        for (std::size_t i = 0; i < nx; ++i) a[i] = next[i] - 0.5 * dt * (f0[i] + f1[i]);
    }
    for (std::size_t m = 0; m < nt; ++m) {
        const double t = g.time.x(m);
        auto a = acc.slice(m);
        for (std::size_t i = 0; i < nx; ++i) a[i] *= std::polar(1.0, t * dispersion(g.space.xi(i), alpha));
    }
    return acc;
}

void apply_time_cutoff(SliceField& u, double T) {
    for (std::size_t m = 0; m < u.grid.time.n; ++m) {
        const double w = bump_psi(u.grid.time.x(m) / T);
        for (auto& c : u.slice(m)) c *= w;
    }
}

SliceField cutoff_evolution(const SpectralField& phi, double alpha, const Grid1D& time, double T) {
    check_alpha(alpha);
    SliceField out = make_slice_field(SpaceTimeGrid{phi.grid, time});
    for (std::size_t m = 0; m < time.n; ++m) {
        const double t = time.x(m);
        const double w = bump_psi(t / T);
        auto dst = out.slice(m);
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < phi.grid.n; ++i)
            dst[i] = w * phi.coeffs[i] * std::polar(1.0, t * dispersion(phi.grid.xi(i), alpha));
    }
    return out;
}

std::string duhamel_hypothesis_violation(double b, double b_prime, double r) {
    if (!(r > 1.0 && std::isfinite(r))) return "r must lie in (1, inf)";
    const double rc = r / (r - 1.0);
    if (!(b_prime + 1.0 >= b)) return "needs b' + 1 >= b";
    if (!(b >= 0.0)) return "needs b >= 0";
    if (!(b_prime <= 0.0)) return "needs b' <= 0";
    if (!(b_prime > -1.0 / rc)) return "needs b' > -1/r' = " + num(-1.0 / rc);
    return {};
}

const char* to_string(LinearEstimate e) { return e == LinearEstimate::Homogeneous ? "homogeneous" : "duhamel"; }

double linear_estimates_check(LinearEstimate which, const LinearInputs& in, double s, double b, double b_prime,
                              double r, double T, double alpha) {
    check_alpha(alpha);
    const NormParams p{s, b, r, alpha};
    validate(p);
    if (which == LinearEstimate::Homogeneous) {
        check_cutoff_window(in.time, 1.0);
        const auto u = cutoff_evolution(in.phi, alpha, in.time, 1.0);
        return checked_ratio(xsb_norm(to_space_time(u), p), fl_norm(in.phi, p));
    }
    if (auto why = duhamel_hypothesis_violation(b, b_prime, r); !why.empty())
        fail_validation(ErrorKind::Hypothesis, "Duhamel estimate " + why);
    check_cutoff_window(in.forcing.grid.time, T);
    auto v = duhamel_integral(in.forcing, alpha);
    apply_time_cutoff(v, T);
    const double top = xsb_norm(to_space_time(v), p);
    const double bottom = std::pow(T, 1.0 + b_prime - b) * xsb_norm(to_space_time(in.forcing), NormParams{s, b_prime, r, alpha});
    return checked_ratio(top, bottom);
}

}  // namespace dgbo
