#include "dgbo/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dgbo/errors.hpp"
#include "fft.hpp"

namespace dgbo {
namespace {

// Accumulates sum |v|^p with the sup norm as the p = inf limit.
class LpAccumulator {
public:
    explicit LpAccumulator(double p) : p_(p) {}
    void add(double v, double weight) {
        if (std::isinf(p_)) {
            sup_ = std::max(sup_, v);
        } else if (v != 0.0) {
            sum_ += std::pow(v, p_) * weight;
        }
    }
    double result() const { return std::isinf(p_) ? sup_ : std::pow(sum_, 1.0 / p_); }

private:
    double p_;
    double sum_ = 0.0;
    double sup_ = 0.0;
};

}  // namespace

void validate(const NormParams& p) {
    if (!(p.r > 1.0 && std::isfinite(p.r)))
        fail_validation(ErrorKind::Domain, "r must lie in (1, inf), got " + std::to_string(p.r));
    if (!std::isfinite(p.s) || !std::isfinite(p.b)) fail_validation(ErrorKind::Domain, "s and b must be finite");
}

double japanese(double x) { return std::sqrt(1.0 + x * x); }

double fl_norm(const SpectralField& f, const NormParams& p, bool homogeneous) {
    validate(p);
    const auto& g = f.grid;
    if (homogeneous && p.s < 0.0 && std::abs(f.coeffs[0]) != 0.0)
        fail_validation(ErrorKind::SingularSymbol, "homogeneous weight with s < 0 needs a zero coefficient at xi = 0");
    LpAccumulator acc(p.r_conj());
    const double dxi = g.dxi();
    for (std::size_t i = 0; i < g.n; ++i) {
        const double xi = g.xi(i);
        const double a = std::abs(f.coeffs[i]);
        if (a == 0.0) continue;
        const double w = homogeneous ? std::abs(xi) : japanese(xi);
        acc.add(a * std::pow(w, p.s), dxi);
    }
    return acc.result();
}

double xsb_norm(const SpaceTimeField& u, const NormParams& p) {
    validate(p);
    const auto& g = u.grid;
    const std::size_t nx = g.space.n, nt = g.time.n;
    const double weight = g.space.dxi() * g.time.dxi();
    const double rc = p.r_conj();
    double sum = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const double xi = g.space.xi(i);
        const double om = dispersion(xi, p.alpha);
        const double ws = std::pow(japanese(xi), p.s);
        for (std::size_t m = 0; m < nt; ++m) {
            const double a = std::abs(u.at(i, m));
            if (a == 0.0) continue;
            const double w = ws * std::pow(japanese(g.time.xi(m) - om), p.b);
            sum += std::pow(a * w, rc);
        }
    }
    return std::pow(sum * weight, 1.0 / rc);
}

double mixed_norm(const SpaceTimeSamples& u, double q, double p) {
    if (!(q >= 1.0) || !(p >= 1.0)) fail_validation(ErrorKind::Domain, "mixed_norm needs q, p >= 1");
    const auto& g = u.grid;
    const std::size_t nx = g.space.n, nt = g.time.n;
    LpAccumulator outer(q);
    for (std::size_t m = 0; m < nt; ++m) {
        LpAccumulator inner(p);
        for (std::size_t i = 0; i < nx; ++i) inner.add(std::abs(u.at(i, m)), g.space.dx());
        outer.add(inner.result(), g.time.dx());
    }
    return outer.result();
}

std::vector<double> smoothing_profile(std::span<const cplx> rows, const Grid1D& time, double r) {
    validate(NormParams{0.0, 0.0, r, 1.0});
    const std::size_t nt = time.n;
    if (rows.size() % nt != 0) fail_validation(ErrorKind::Grid, "row data is not a multiple of n_t");
    const std::size_t n_rows = rows.size() / nt;
    std::vector<cplx> buf(rows.begin(), rows.end());
    if (n_rows > 0) fft::transform_many(buf.data(), nt, n_rows, -1);
    const double rc = 1.0 / (1.0 - 1.0 / r);
    const double dt = time.dx(), dtau = time.dxi();
    std::vector<double> out(n_rows);
    for (std::size_t j = 0; j < n_rows; ++j) {
        double sum = 0.0;
        for (std::size_t m = 0; m < nt; ++m) {
            // The offset phase of t_0 = -t_width is unimodular and drops out.
            const double a = std::abs(buf[j * nt + m]) * dt;
            if (a != 0.0) sum += std::pow(a, rc);
        }
        out[j] = std::pow(sum * dtau, 1.0 / rc);
    }
    return out;
}

double smoothing_norm(const SpaceTimeSamples& u, double r) {
    auto prof = smoothing_profile(u.values, u.grid.time, r);
    return prof.empty() ? 0.0 : *std::max_element(prof.begin(), prof.end());
}

}  // namespace dgbo
