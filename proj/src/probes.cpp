#include "dgbo/probes.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dgbo/dyadic.hpp"
#include "dgbo/errors.hpp"
#include "dgbo/linear.hpp"
#include "dgbo/parallel.hpp"
#include "dgbo/seed.hpp"

namespace dgbo {
namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Frequency lattice xi = k * h, stored densely on [-kmax, kmax].
struct Sparse {
    double h = 1.0;
    long kmax = 0;
    std::vector<cplx> c;

    Sparse(double h_, long kmax_) : h(h_), kmax(kmax_), c(static_cast<std::size_t>(2 * kmax_ + 1)) {}
    cplx& at(long k) { return c[static_cast<std::size_t>(k + kmax)]; }
    double xi(long k) const { return static_cast<double>(k) * h; }
};

double smooth_bump(double y) { return std::abs(y) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0; }

// Adds amp * bump centred at +-centre (half width 1/2) with phase e^{+-i theta}, unit L2 norm.
void add_bump(Sparse& f, double centre, double amp, double theta) {
    const long lo = static_cast<long>(std::floor((centre - 0.5) / f.h)), hi = static_cast<long>(std::ceil((centre + 0.5) / f.h));
    double sum = 0.0;
    for (long k = lo; k <= hi; ++k) sum += 2.0 * std::pow(smooth_bump((f.xi(k) - centre) / 0.5), 2);
    // ||f||_2^2 = (1/2pi) sum |f^|^2 dxi
    const double scale = amp / std::sqrt(sum * f.h / (2.0 * std::numbers::pi));
    const cplx ph = std::polar(1.0, theta);
    for (long k = lo; k <= hi; ++k) {
        const double v = scale * smooth_bump((f.xi(k) - centre) / 0.5);
        if (v == 0.0) continue;
        f.at(k) += v * ph;
        f.at(-k) += v * std::conj(ph);
    }
}

cplx duhamel_kernel(double t, double omega) {
    const double th = t * omega;
    if (std::abs(th) < 1e-6) return t * cplx(1.0, 0.5 * th);
    return (std::polar(1.0, th) - 1.0) / cplx(0.0, omega);
}

double weighted_norm(const Sparse& f, double s, double r) {
    const double rc = r / (r - 1.0);
    double sum = 0.0;
    for (long k = -f.kmax; k <= f.kmax; ++k) {
        const double a = std::abs(f.c[static_cast<std::size_t>(k + f.kmax)]);
        if (a != 0.0) sum += std::pow(std::pow(japanese(f.xi(k)), s) * a, rc);
    }
    return std::pow(sum * f.h, 1.0 / rc);
}

}  // namespace

double threshold(double alpha, double r) {
    if (!(alpha > 0.0 && alpha <= 1.0) || !(r > 1.0 && r < 1.0 + alpha))
        fail_validation(ErrorKind::Domain, "threshold needs 0 < alpha <= 1 and 1 < r < 1 + alpha, got alpha = " +
                                               num(alpha) + ", r = " + num(r));
    return -1.0 - alpha + 2.0 / r + alpha / (2.0 * r);
}

std::vector<SweepRecord> threshold_sweep(const SweepSpec& spec) {
    struct Cell {
        double alpha, r, offset;
    };
    std::vector<Cell> cells;
    for (double a : spec.alphas)
        for (double r : spec.rs)
            for (double o : spec.s_offsets) cells.push_back({a, r, o});

    std::vector<SweepRecord> out(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const auto& cell = cells[i];
        SweepRecord& rec = out[i];
        rec.alpha = cell.alpha;
        rec.r = cell.r;
        rec.T = spec.base.T;
        rec.amplitude = spec.amplitude;
        rec.seed = derive_seed(spec.seed, i);
        try {
            rec.s = threshold(cell.alpha, cell.r) + cell.offset;
            SolveConfig c = spec.base;
            c.alpha = cell.alpha;
            c.r = cell.r;
            c.s = rec.s;
            const auto u0 = random_band_limited(c.space(), spec.band, rec.seed, spec.amplitude);
            const auto res = picard_iterate(u0, c);
            rec.kappas = res.kappas;
            rec.converged = res.converged;
            rec.diverged = res.diverged;
            rec.residual = res.residuals.empty() ? 0.0 : res.residuals.back();
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    });
    return out;
}

std::vector<ProbeRecord> illposedness_probe(const ProbeSpec& spec) {
    check_model_alpha(spec.alpha);
    if (!std::isfinite(spec.s)) fail_validation(ErrorKind::Domain, "s must be finite");
    if (!(spec.t >= 0.0 && std::isfinite(spec.t))) fail_validation(ErrorKind::Domain, "t must be nonnegative");
    if (spec.points_per_unit < 4) fail_validation(ErrorKind::Resolution, "points_per_unit must be at least 4");
    for (double r : spec.rs)
        if (!(r > 1.0 && std::isfinite(r))) fail_validation(ErrorKind::Domain, "r must lie in (1, inf)");
    for (long N : spec.Ns) {
        check_dyadic(N);
        if (N < 4) fail_validation(ErrorKind::Resolution, "N = " + std::to_string(N) + " overlaps the low bump; use N >= 4");
    }

    const double h = 1.0 / spec.points_per_unit;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double theta = phase(rng);

    struct Row {
        double second_norm, data_norm;
    };
    // rows[iN][ir]
    std::vector<std::vector<Row>> rows(spec.Ns.size(), std::vector<Row>(spec.rs.size()));
    parallel_for(spec.Ns.size(), [&](std::size_t iN) {
        const long N = spec.Ns[iN];
        const long kmax_in = static_cast<long>(std::ceil((static_cast<double>(N) + 1.0) / h));
        Sparse phi(h, kmax_in);
        add_bump(phi, 1.0, 1.0, 0.0);
        if (spec.include_high) add_bump(phi, static_cast<double>(N), std::pow(static_cast<double>(N), -spec.s), theta);

        std::vector<long> support;
        for (long k = -kmax_in; k <= kmax_in; ++k)
            if (phi.at(k) != 0.0) support.push_back(k);

        Sparse a2(h, 2 * kmax_in);
        for (long k1 : support) {
            const double x1 = phi.xi(k1), w1 = dispersion(x1, spec.alpha);
            for (long k2 : support) {
                const double x2 = phi.xi(k2);
                const long k = k1 + k2;
                const double xi = a2.xi(k);
                const double om = w1 + dispersion(x2, spec.alpha) - dispersion(xi, spec.alpha);
                a2.at(k) += phi.at(k1) * phi.at(k2) * duhamel_kernel(spec.t, om);
            }
        }
        for (long k = -a2.kmax; k <= a2.kmax; ++k) {
            const double xi = a2.xi(k);
            a2.at(k) *= std::polar(1.0, spec.t * dispersion(xi, spec.alpha)) * cplx(0.0, -xi / (4.0 * std::numbers::pi)) * h;
        }
        for (std::size_t ir = 0; ir < spec.rs.size(); ++ir)
            rows[iN][ir] = {weighted_norm(a2, spec.s, spec.rs[ir]), weighted_norm(phi, spec.s, spec.rs[ir])};
    });

    std::vector<ProbeRecord> out;
    for (std::size_t ir = 0; ir < spec.rs.size(); ++ir) {
        const std::size_t first = out.size();
        bool monotone = true;
        for (std::size_t iN = 0; iN < spec.Ns.size(); ++iN) {
            ProbeRecord rec;
            rec.N = spec.Ns[iN];
            rec.alpha = spec.alpha;
            rec.s = spec.s;
            rec.r = spec.rs[ir];
            rec.t = spec.t;
            rec.seed = spec.seed;
            rec.space = spec.rs[ir] == 2.0 ? "H" : "FL";
            rec.second_norm = rows[iN][ir].second_norm;
            rec.data_norm = rows[iN][ir].data_norm;
            rec.ratio = rec.second_norm / (rec.data_norm * rec.data_norm);
            if (iN > 0) {
                const double prev = out.back().ratio;
                rec.growth = prev > 0.0 ? rec.ratio / prev : 0.0;
                if (rec.ratio < prev) monotone = false;
            }
            out.push_back(rec);
        }
        for (std::size_t i = first; i < out.size(); ++i) out[i].monotone = monotone;
    }
    return out;
}

}  // namespace dgbo
