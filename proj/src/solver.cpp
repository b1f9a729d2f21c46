#include "dgbo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dgbo/errors.hpp"
#include "dgbo/linear.hpp"

namespace dgbo {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool kept(long k, std::size_t n) { return 3 * std::abs(k) < static_cast<long>(n); }

void truncate(SpectralField& f) {
    for (std::size_t i = 0; i < f.grid.n; ++i)
        if (!kept(f.grid.wavenumber(i), f.grid.n)) f.coeffs[i] = 0.0;
}

// e^{i h omega(xi)} per slot
std::vector<cplx> phase_factors(const Grid1D& g, double h, double alpha) {
    std::vector<cplx> e(g.n);
    for (std::size_t i = 0; i < g.n; ++i) e[i] = std::polar(1.0, h * dispersion(g.xi(i), alpha));
    return e;
}

SpectralField combine(const SpectralField& a, const std::vector<cplx>& ea, double cb, const SpectralField& b,
                      const std::vector<cplx>* eb = nullptr) {
    SpectralField out = a;
    for (std::size_t i = 0; i < a.grid.n; ++i) {
        const cplx bi = eb ? (*eb)[i] * b.coeffs[i] : b.coeffs[i];
        out.coeffs[i] = ea[i] * a.coeffs[i] + cb * bi;
    }
    return out;
}

double l2_of(std::span<const cplx> c, double dxi) {
    double s = 0.0;
    for (auto z : c) s += std::norm(z);
    return std::sqrt(s * dxi / two_pi);
}

SliceField nonlinear_slices(const SliceField& u, bool dealias) {
    SliceField out = make_slice_field(u.grid);
    SpectralField tmp{u.grid.space, std::vector<cplx>(u.grid.space.n)};
    for (std::size_t m = 0; m < u.grid.time.n; ++m) {
        auto src = u.slice(m);
        std::copy(src.begin(), src.end(), tmp.coeffs.begin());
        const auto nl = nonlinearity(tmp, dealias);
        std::copy(nl.coeffs.begin(), nl.coeffs.end(), out.slice(m).begin());
    }
    return out;
}

void check_grid(const SpectralField& u, const Grid1D& g) {
    if (!(u.grid == g)) fail_validation(ErrorKind::Grid, "data grid does not match the configured half_width and n_x");
}

}  // namespace

Grid1D SolveConfig::space() const { return make_grid(half_width, n_x); }

SpaceTimeGrid SolveConfig::picard_grid() const { return make_space_time_grid(half_width, n_x, 2.0 * T, n_t); }

void validate(const SolveConfig& c) {
    check_model_alpha(c.alpha);
    if (!(c.r > 1.0 && std::isfinite(c.r))) fail_validation(ErrorKind::Domain, "r must exceed 1");
    if (!(c.dt > 0.0 && std::isfinite(c.dt))) fail_validation(ErrorKind::Domain, "dt must be positive");
    if (!(c.T > 0.0 && std::isfinite(c.T))) fail_validation(ErrorKind::Domain, "T must be positive");
    if (!(c.epsilon > 0.0)) fail_validation(ErrorKind::Domain, "epsilon must be positive");
    if (!std::isfinite(c.s)) fail_validation(ErrorKind::Domain, "s must be finite");
    if (c.max_picard_iters < 1) fail_validation(ErrorKind::Config, "max_picard_iters must be at least 1");
    if (!(c.picard_tol > 0.0)) fail_validation(ErrorKind::Config, "picard_tol must be positive");
    if (c.n_t % 8 != 0) fail_validation(ErrorKind::Grid, "n_t must be divisible by 8");
    if (c.n_samples < 1) fail_validation(ErrorKind::Config, "n_samples must be at least 1");
    make_grid(c.half_width, c.n_x);
    make_grid(2.0 * c.T, c.n_t);
}

double mean_value(const SpectralField& u) { return u.coeffs[0].real() / (2.0 * u.grid.half_width); }

double l2_norm(const SpectralField& u) { return l2_of(u.coeffs, u.grid.dxi()); }

double energy(const SpectralField& u, double alpha) {
    double kin = 0.0;
    for (std::size_t i = 0; i < u.grid.n; ++i)
        kin += std::pow(std::abs(u.grid.xi(i)), 1.0 + alpha) * std::norm(u.coeffs[i]);
    kin *= u.grid.dxi() / two_pi;
    double cube = 0.0;
    for (double v : inverse_real(u)) cube += v * v * v;
    return 0.5 * kin + cube * u.grid.dx() / 6.0;
}

Diagnostics diagnose(const SpectralField& u, double t, double alpha) {
    return {t, mean_value(u), l2_norm(u), energy(u, alpha)};
}

SpectralField nonlinearity(const SpectralField& u, bool dealias) {
    if (hermitian_defect(u.coeffs) > 1e-10) fail_validation(ErrorKind::NotReal, "nonlinearity needs real data");
    SpectralField v = u;
    if (dealias) truncate(v);
    auto phys = inverse_real(v);
    for (auto& x : phys) x *= x;
    SpectralField out = forward(u.grid, std::span<const double>(phys));
    for (std::size_t i = 0; i < out.grid.n; ++i) out.coeffs[i] *= cplx(0.0, -0.5 * out.grid.xi(i));
    if (dealias) truncate(out);
    out.coeffs[out.grid.n / 2] = 0.0;
    return out;
}

SpectralField step_ifrk4(const SpectralField& u, double dt, double alpha, bool dealias) {
    check_model_alpha(alpha);
    const auto e_half = phase_factors(u.grid, 0.5 * dt, alpha);
    const auto e_full = phase_factors(u.grid, dt, alpha);

    const auto k1 = nonlinearity(u, dealias);
    // stage inputs are e^{..}(u + c k) in the interaction picture
    auto in2 = u;
    for (std::size_t i = 0; i < u.grid.n; ++i) in2.coeffs[i] = e_half[i] * (u.coeffs[i] + 0.5 * dt * k1.coeffs[i]);
    const auto k2 = nonlinearity(in2, dealias);
    const auto in3 = combine(u, e_half, 0.5 * dt, k2);
    const auto k3 = nonlinearity(in3, dealias);
    const auto in4 = combine(u, e_full, dt, k3, &e_half);
    const auto k4 = nonlinearity(in4, dealias);

    SpectralField out = u;
    for (std::size_t i = 0; i < u.grid.n; ++i) {
        out.coeffs[i] = e_full[i] * u.coeffs[i] +
                        dt / 6.0 *
                            (e_full[i] * k1.coeffs[i] + 2.0 * e_half[i] * (k2.coeffs[i] + k3.coeffs[i]) + k4.coeffs[i]);
        if (!std::isfinite(out.coeffs[i].real()) || !std::isfinite(out.coeffs[i].imag()))
            throw RuntimeFailure(ErrorKind::Instability, "non-finite coefficient at wavenumber " +
                                                             std::to_string(u.grid.wavenumber(i)));
    }
    return out;
}

SolveResult solve(const SpectralField& u0, const SolveConfig& cfg) {
    validate(cfg);
    check_grid(u0, cfg.space());
    if (!is_real_field(u0)) fail_validation(ErrorKind::NotReal, "initial data must be real");

    const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.T / cfg.dt - 1e-9)));
    const double h = cfg.T / static_cast<double>(steps);
    SolveResult res;
    auto record = [&](const SpectralField& u, double t) {
        res.times.push_back(t);
        res.trajectory.push_back(u);
        res.diagnostics.push_back(diagnose(u, t, cfg.alpha));
    };
    SpectralField u = u0;
    record(u, 0.0);
    std::size_t next = 1;
    for (std::size_t k = 1; k <= steps; ++k) {
        try {
            u = step_ifrk4(u, h, cfg.alpha, cfg.dealias);
        } catch (const RuntimeFailure& e) {
            throw RuntimeFailure(ErrorKind::Instability, "step " + std::to_string(k) + " of " +
                                                             std::to_string(steps) + ": " + e.what());
        }
        // sample j sits at step round(j * steps / n_samples)
        while (next <= cfg.n_samples &&
               static_cast<std::size_t>(std::llround(static_cast<double>(next * steps) / cfg.n_samples)) <= k) {
            if (res.times.back() != static_cast<double>(k) * h) record(u, static_cast<double>(k) * h);
            ++next;
        }
    }
    res.final_state = u;
    return res;
}

SpectralField slice_at(const SliceField& u, std::size_t m) {
    auto s = u.slice(m);
    return {u.grid.space, std::vector<cplx>(s.begin(), s.end())};
}

PicardResult picard_iterate(const SpectralField& u0, const SolveConfig& cfg) {
    validate(cfg);
    check_grid(u0, cfg.space());
    if (!is_real_field(u0)) fail_validation(ErrorKind::NotReal, "initial data must be real");
    const auto grid = cfg.picard_grid();
    const auto params = cfg.x_params();

    const SliceField base = cutoff_evolution(u0, cfg.alpha, grid.time, 1.0);
    PicardResult res;
    res.iterates.push_back(base);
    double prev_step = -1.0;
    int blowups = 0;
    for (int n = 0; n < cfg.max_picard_iters; ++n) {
        SliceField next = duhamel_integral(nonlinear_slices(res.iterates.back(), cfg.dealias), cfg.alpha);
        apply_time_cutoff(next, cfg.T);
        for (std::size_t j = 0; j < next.data.size(); ++j) next.data[j] += base.data[j];

        SliceField diff = next;
        for (std::size_t j = 0; j < diff.data.size(); ++j) diff.data[j] -= res.iterates.back().data[j];
        const double step = xsb_norm(to_space_time(diff), params);
        SliceField local = next;
        apply_time_cutoff(local, cfg.T);
        const double scale = xsb_norm(to_space_time(local), params);
        res.iterates.push_back(std::move(next));

        if (prev_step > 0.0) {
            const double kappa = step / prev_step;
            res.kappas.push_back(kappa);
            blowups = kappa > 10.0 ? blowups + 1 : 0;
        }
        prev_step = step;
        const double resid = step == 0.0 ? 0.0 : step / scale;
        res.residuals.push_back(resid);
        if (!std::isfinite(step) || !std::isfinite(resid) || blowups >= 3) {
            res.diverged = true;
            break;
        }
        if (resid <= cfg.picard_tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

double solve_picard_gap(const SpectralField& u0, const SolveConfig& cfg, const PicardResult& picard) {
    const auto grid = cfg.picard_grid();
    const std::size_t m0 = cfg.n_t / 2, intervals = cfg.n_t / 4;
    SolveConfig c = cfg;
    const auto per = static_cast<std::size_t>(std::ceil(cfg.T / (static_cast<double>(intervals) * cfg.dt) - 1e-9));
    c.dt = cfg.T / static_cast<double>(per * intervals);
    c.n_samples = intervals;
    const auto sol = solve(u0, c);
    if (sol.trajectory.size() != intervals + 1)
        throw RuntimeFailure(ErrorKind::Resolution, "solve samples do not align with the Picard lattice");
    const auto& last = picard.iterates.back();
    double gap = 0.0;
    for (std::size_t j = 0; j <= intervals; ++j) {
        const auto& a = sol.trajectory[j];
        const auto b = slice_at(last, m0 + j);
        std::vector<cplx> d(a.coeffs.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.coeffs[i] - b.coeffs[i];
        const double ref = l2_norm(a);
        const double err = l2_of(d, grid.space.dxi());
        gap = std::max(gap, ref > 0.0 ? err / ref : err);
    }
    return gap;
}

double nonlinear_estimate_ratio(const SpaceTimeField& u, double s, double r, double epsilon, double alpha,
                                bool dealias) {
    check_model_alpha(alpha);
    if (!(epsilon > 0.0)) fail_validation(ErrorKind::Domain, "epsilon must be positive");
    const double b = 1.0 / r + epsilon, bp = -(1.0 - 1.0 / r) + 2.0 * epsilon;
    const double den = xsb_norm(u, NormParams{s, b, r, alpha});
    if (!(den > 0.0)) fail_validation(ErrorKind::Domain, "undefined ratio: X^{s,b} norm of u is zero");
    const auto nl = to_space_time(nonlinear_slices(to_slices(u), dealias));
    return xsb_norm(nl, NormParams{s, bp, r, alpha}) / (den * den);
}

SpaceTimeField random_space_time_field(const SpaceTimeGrid& grid, double xi_max, double sigma_max, double alpha,
                                       std::uint64_t seed) {
    check_model_alpha(alpha);
    const auto& gx = grid.space;
    const auto& gt = grid.time;
    SpaceTimeField out{grid, std::vector<cplx>(gx.n * gt.n)};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (std::size_t i = 0; i < gx.n; ++i) {
        const long k = gx.wavenumber(i);
        if (k == -static_cast<long>(gx.n / 2) || std::abs(gx.xi(i)) > xi_max) continue;
        const double om = dispersion(gx.xi(i), alpha);
        for (std::size_t m = 0; m < gt.n; ++m) {
            const long j = gt.wavenumber(m);
            if (j == -static_cast<long>(gt.n / 2) || std::abs(gt.xi(m) - om) > sigma_max) continue;
            const std::size_t ip = gx.slot(-k), mp = gt.slot(-j);
            const std::size_t self = i * gt.n + m, mate = ip * gt.n + mp;
            if (mate < self) continue;
            const cplx z(g(rng), mate == self ? 0.0 : g(rng));
            out.coeffs[self] = z;
            out.coeffs[mate] = std::conj(z);
        }
    }
    const double nrm = xsb_norm(out, NormParams{0.0, 0.0, 2.0, alpha});
    if (!(nrm > 0.0)) fail_validation(ErrorKind::Resolution, "band holds no lattice point");
    for (auto& c : out.coeffs) c /= nrm;
    return out;
}

double scaling_exponent(double alpha) { return 1.0 + alpha; }

double critical_index(double alpha) { return -0.5 - alpha; }

SpectralField rescale_data(const SpectralField& u0, double lambda, double exponent) {
    if (!(lambda > 0.0 && std::isfinite(lambda))) fail_validation(ErrorKind::Domain, "lambda must be positive");
    SpectralField out{make_grid(u0.grid.half_width / lambda, u0.grid.n), u0.coeffs};
    const double f = std::pow(lambda, exponent - 1.0);
    for (auto& c : out.coeffs) c *= f;
    return out;
}

double scaling_check(const SpectralField& u0, double lambda, const SolveConfig& cfg, std::optional<double> exponent) {
    validate(cfg);
    const double a = exponent.value_or(scaling_exponent(cfg.alpha));
    const auto base = solve(u0, cfg).final_state;

    SolveConfig c = cfg;
    c.half_width = cfg.half_width / lambda;
    c.T = cfg.T / std::pow(lambda, 2.0 + cfg.alpha);
    const auto v0 = rescale_data(u0, lambda, a);
    if (c.T < 1e-3 * cfg.dt)
        fail_validation(ErrorKind::Resolution, "rescaled horizon is far below one step; lower lambda or dt");
    const auto v = solve(v0, c).final_state;

    const double back = std::pow(lambda, 1.0 - a);
    std::vector<cplx> d(base.coeffs.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = base.coeffs[i] - back * v.coeffs[i];
    const double ref = l2_norm(base);
    const double err = l2_of(d, base.grid.dxi());
    return ref > 0.0 ? err / ref : err;
}

}  // namespace dgbo
