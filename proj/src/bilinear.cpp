#include "dgbo/bilinear.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <tuple>

#include <boost/math/tools/roots.hpp>

#include "dgbo/dyadic.hpp"
#include "dgbo/errors.hpp"
#include "dgbo/parallel.hpp"
#include "dgbo/seed.hpp"
#include "dgbo/spectral.hpp"

namespace dgbo {
namespace {

bool radial_member(long N, double a) {
    const double n = static_cast<double>(N);
    return N == 1 ? a <= 2.0 : (a > 0.5 * n && a <= 2.0 * n);
}

bool sign_ok(SignConstraint s, double xi) {
    switch (s) {
        case SignConstraint::Any: return true;
        case SignConstraint::Positive: return xi > 0.0;
        case SignConstraint::Negative: return xi < 0.0;
    }
    return true;
}

// Smooth positive bump on the radial range the block allows.
double radial_bump(long N, double y, SignConstraint sign) {
    const double n = static_cast<double>(N);
    double lo = N == 1 ? 0.0 : 0.5 * n, hi = 2.0 * n;
    double a = std::abs(y);
    if (N == 1 && sign == SignConstraint::Any) {
        lo = -2.0;
        a = y;
    }
    const double t = (a - 0.5 * (lo + hi)) / (0.5 * (hi - lo));
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double pw(long v, double e) { return std::pow(static_cast<double>(v), e); }

// (sum |<x>^b v|^q h)^{1/q}
double profile_norm(const Profile& p, double q, double b = 0.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double v = p.values[i];
        if (v == 0.0) continue;
        const double x = p.x(i);
        const double w = b == 0.0 ? 1.0 : std::pow(1.0 + x * x, 0.5 * b);
        s += std::pow(std::abs(v) * w, q);
    }
    return std::pow(s * p.h, 1.0 / q);
}

struct Atom {
    double pos, w;
};

std::vector<Atom> atoms(const Profile& p) {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p.values[i] != 0.0) out.push_back({p.x(i), p.values[i] * p.h});
    return out;
}

double sigma_node_sum(const std::vector<Atom>& s1, const std::vector<Atom>& s2, const Profile& b, double omega) {
    double s = 0.0;
    for (const Atom& a1 : s1)
        for (const Atom& a2 : s2) s += a1.w * a2.w * b(a1.pos + a2.pos + omega);
    return s;
}

// Uniform omega grid; positions are in node units.
struct OmegaGrid {
    double w0 = 0.0, h = 1.0;
    std::size_t n = 0;
    double pos(double omega) const { return (omega - w0) / h; }
};

// H(omega) = sum_{s1, s2} b1(s1) b2(s2) b(s1 + s2 + omega) h1 h2 at the grid
// nodes. The sum runs over the two finest lattices and the coarsest factor is
// interpolated (sigma = s1 + s2 + omega has unit Jacobian), so every factor
// is sampled at or below its own spacing.
std::vector<double> sigma_correlation(const Profile& b1, const Profile& b2, const Profile& b, const OmegaGrid& g) {
    std::vector<double> H(g.n, 0.0);
    const Profile* coarse = &b;
    std::vector<Atom> pairs;
    auto pair_up = [&](const Profile& p, const Profile& q, double sign_q) {
        for (const Atom& x : atoms(p))
            for (const Atom& y : atoms(q)) pairs.push_back({x.pos + sign_q * y.pos, x.w * y.w});
    };
    double sgn = 1.0;
    if (b.h >= b1.h && b.h >= b2.h) {
        pair_up(b1, b2, 1.0);  // b(s1 + s2 + omega)
    } else if (b1.h >= b2.h) {
        coarse = &b1;
        pair_up(b, b2, -1.0);  // b1(s - s2 - omega)
        sgn = -1.0;
    } else {
        coarse = &b2;
        pair_up(b, b1, -1.0);  // b2(s - s1 - omega)
        sgn = -1.0;
    }
    if (pairs.empty()) return H;

    // Sums of lattice points repeat when the lattices are commensurate.
    std::sort(pairs.begin(), pairs.end(), [](const Atom& x, const Atom& y) { return x.pos < y.pos; });
    const double tol = 1e-9 * std::min({b1.h, b2.h, b.h});
    std::vector<Atom> merged;
    for (const Atom& a : pairs) {
        if (!merged.empty() && a.pos - merged.back().pos <= tol)
            merged.back().w += a.w;
        else
            merged.push_back(a);
    }

    double clo, chi;
    if (!coarse->support(clo, chi)) return H;
    const double last = static_cast<double>(g.n - 1);
    for (const Atom& a : merged) {
        // argument = a.pos + sgn * (w0 + k h) must lie in (clo, chi)
        double k_lo, k_hi;
        if (sgn > 0) {
            k_lo = (clo - a.pos - g.w0) / g.h;
            k_hi = (chi - a.pos - g.w0) / g.h;
        } else {
            k_lo = (a.pos - chi - g.w0) / g.h;
            k_hi = (a.pos - clo - g.w0) / g.h;
        }
        const double lo = std::max(0.0, std::floor(k_lo)), hi = std::min(last, std::ceil(k_hi));
        for (double k = lo; k <= hi; k += 1.0) {
            const double om = g.w0 + k * g.h;
            H[static_cast<std::size_t>(k)] += a.w * (*coarse)(a.pos + sgn * om);
        }
    }
    return H;
}

// Frequency geometry: the outer variable u runs over the lattice cells of the
// larger input block with 3-point Gauss-Legendre; the inner variable v (the
// other input frequency; xi = u + v) is cut at the critical point of Omega,
// clipped to the omega window, split at every interpolation knot and then
// bisected until Omega is close to linear on each piece.
struct Segment {
    double va, vb, xa, xb;
};

struct OuterPoint {
    double u, w;
    std::size_t begin, end;
};

struct Geometry {
    bool inner_is_2 = true;
    std::vector<OuterPoint> outer;
    std::vector<Segment> segs;
};

constexpr double kLinearAbs = 1.0 / 32.0;  // grid cells
constexpr double kLinearRel = 1e-3;

Geometry build_geometry(const Profile& a1, const Profile& a2, const Profile& a, double alpha, const OmegaGrid& grid,
                        bool inner_is_2) {
    Geometry geo;
    geo.inner_is_2 = inner_is_2;
    const Profile& po = inner_is_2 ? a1 : a2;
    const Profile& pi = inner_is_2 ? a2 : a1;
    double U0, U1, V0, V1, A0, A1;
    if (!po.support(U0, U1) || !pi.support(V0, V1) || !a.support(A0, A1) || grid.n < 2) return geo;
    const double xmax = static_cast<double>(grid.n - 1);

    static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const long cells = std::lround((U1 - U0) / po.h);

    std::vector<double> knots;
    std::vector<double> knot_x;
    for (long c = 0; c < cells; ++c) {
        for (int q = 0; q < 3; ++q) {
            const double u = U0 + (static_cast<double>(c) + 0.5 + 0.5 * gx[q]) * po.h;
            const double w = 0.5 * gw[q] * po.h;
            const double lo = std::max(V0, A0 - u), hi = std::min(V1, A1 - u);
            if (!(lo < hi)) continue;
            auto X = [&](double v) { return grid.pos(resonance(u, v, alpha)); };

            OuterPoint op{u, w, geo.segs.size(), 0};
            std::vector<double> cuts{lo};
            const double vc = -0.5 * u;
            if (vc > lo && vc < hi) cuts.push_back(vc);
            cuts.push_back(hi);

            for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
                double p = cuts[piece], pq = cuts[piece + 1];
                double xp = X(p), xq = X(pq);
                if (std::max(xp, xq) <= 0.0 || std::min(xp, xq) >= xmax) continue;

                auto root = [&](double target, double fa_x, double fb_x) {
                    auto f = [&](double v) { return X(v) - target; };
                    boost::math::tools::eps_tolerance<double> tol(44);
                    std::uintmax_t iters = 200;
                    auto r = boost::math::tools::toms748_solve(f, p, pq, fa_x - target, fb_x - target, tol, iters);
                    return 0.5 * (r.first + r.second);
                };
                // Omega is monotone on the piece, so each window edge is crossed at most once.
                double np = p, nq = pq, nxp = xp, nxq = xq;
                if (xp < 0.0) { np = root(0.0, xp, xq); nxp = 0.0; }
                else if (xp > xmax) { np = root(xmax, xp, xq); nxp = xmax; }
                if (xq < 0.0) { nq = root(0.0, xp, xq); nxq = 0.0; }
                else if (xq > xmax) { nq = root(xmax, xp, xq); nxq = xmax; }
                if (!(np < nq)) continue;

                knots.clear();
                knots.push_back(np);
                auto add_lattice = [&](const Profile& prof, double shift) {
                    const double k0 = std::ceil((np + shift - prof.x0) / prof.h);
                    const double k1 = std::floor((nq + shift - prof.x0) / prof.h);
                    for (double k = k0; k <= k1; k += 1.0) {
                        const double v = prof.x0 + k * prof.h - shift;
                        if (v > np && v < nq) knots.push_back(v);
                    }
                };
                add_lattice(pi, 0.0);
                add_lattice(a, u);
                knots.push_back(nq);
                std::sort(knots.begin(), knots.end());
                const double eps = 1e-12 * (std::abs(nq) + std::abs(np) + pi.h);
                knots.erase(std::unique(knots.begin(), knots.end(), [&](double x, double y) { return y - x <= eps; }),
                            knots.end());
                knots.back() = nq;

                knot_x.resize(knots.size());
                knot_x.front() = nxp;
                knot_x.back() = nxq;
                for (std::size_t k = 1; k + 1 < knots.size(); ++k) knot_x[k] = X(knots[k]);

                auto refine = [&](auto&& self, double va, double vb, double xa, double xb, int depth) -> void {
                    const double vm = 0.5 * (va + vb);
                    const double xm = X(vm);
                    const double dev = std::abs(xm - 0.5 * (xa + xb));
                    if (depth >= 40 || dev <= std::max(kLinearAbs, kLinearRel * std::abs(xb - xa))) {
                        geo.segs.push_back({va, vb, xa, xb});
                        return;
                    }
                    self(self, va, vm, xa, xm, depth + 1);
                    self(self, vm, vb, xm, xb, depth + 1);
                };
                for (std::size_t k = 0; k + 1 < knots.size(); ++k)
                    refine(refine, knots[k], knots[k + 1], knot_x[k], knot_x[k + 1], 0);
            }
            op.end = geo.segs.size();
            if (op.end > op.begin) geo.outer.push_back(op);
        }
    }
    return geo;
}

// W_k = int phi_k(x) rho(x) dx for the hat functions phi_k of the omega grid,
// where rho is the frequency mass pushed forward by Omega. On a segment the
// mass density g(v) is quadratic (a product of two linear interpolants) and x
// is taken linear in v, so rho is quadratic in x: interior hats get
// rho(k) + rho''/12 through difference arrays, edge hats are integrated with
// Simpson's rule (exact for the cubic rho * phi).
class HatMoments {
public:
    explicit HatMoments(std::size_t n) : n_(n), w_(n), d0_(n + 1), d1_(n + 1), d2_(n + 1) {}

    void reset() {
        std::fill(w_.begin(), w_.end(), 0.0);
        std::fill(d0_.begin(), d0_.end(), 0.0);
        std::fill(d1_.begin(), d1_.end(), 0.0);
        std::fill(d2_.begin(), d2_.end(), 0.0);
    }

    // Segment from x = xa (t = 0) to x = xb (t = 1) carrying density
    // scale * g(t) dt with g through (g0, gm, g1) at t = 0, 1/2, 1.
    void add(double xa, double xb, double g0, double gm, double g1, double scale) {
        double D = xb - xa;
        if (std::abs(D) < 1e-6) {
            point(0.5 * (xa + xb), scale * (g0 + 4.0 * gm + g1) / 6.0);
            return;
        }
        if (D < 0.0) {
            std::swap(xa, xb);
            std::swap(g0, g1);
            D = -D;
        }
        const double k = scale / D;
        const double Q0 = k * g0;
        const double Q1 = k * (-3.0 * g0 + 4.0 * gm - g1) / D;
        const double Q2 = k * (2.0 * g0 - 4.0 * gm + 2.0 * g1) / (D * D);
        auto rho = [&](double x) {
            const double y = x - xa;
            return Q0 + y * (Q1 + y * Q2);
        };
        const long last = static_cast<long>(n_) - 1;
        const long first_node = std::max(0L, static_cast<long>(std::floor(xa - 1.0)) + 1);
        const long last_node = std::min(last, static_cast<long>(std::ceil(xb + 1.0)) - 1);
        long ilo = std::max(first_node, static_cast<long>(std::ceil(xa + 1.0)));
        long ihi = std::min(last_node, static_cast<long>(std::floor(xb - 1.0)));
        if (ilo <= ihi) {
            const double e2 = Q2, e1 = Q1 - 2.0 * Q2 * xa, e0 = Q0 - Q1 * xa + Q2 * xa * xa + Q2 / 6.0;
            d0_[static_cast<std::size_t>(ilo)] += e0;
            d1_[static_cast<std::size_t>(ilo)] += e1;
            d2_[static_cast<std::size_t>(ilo)] += e2;
            d0_[static_cast<std::size_t>(ihi + 1)] -= e0;
            d1_[static_cast<std::size_t>(ihi + 1)] -= e1;
            d2_[static_cast<std::size_t>(ihi + 1)] -= e2;
        } else {
            ilo = last_node + 1;
            ihi = last_node;
        }
        auto simpson = [](auto&& f, double a, double b) { return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b)); };
        auto edge = [&](long node) {
            const double c = static_cast<double>(node);
            const double lo = std::max(xa, c - 1.0), hi = std::min(xb, c + 1.0);
            double s = 0.0;
            if (lo < std::min(c, hi)) s += simpson([&](double x) { return rho(x) * (x - c + 1.0); }, lo, std::min(c, hi));
            if (std::max(c, lo) < hi) s += simpson([&](double x) { return rho(x) * (c + 1.0 - x); }, std::max(c, lo), hi);
            w_[static_cast<std::size_t>(node)] += s;
        };
        for (long node = first_node; node <= last_node && node < ilo; ++node) edge(node);
        for (long node = std::max(ihi + 1, first_node); node <= last_node; ++node) edge(node);
    }

    const std::vector<double>& finish() {
        double c0 = 0.0, c1 = 0.0, c2 = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            c0 += d0_[k];
            c1 += d1_[k];
            c2 += d2_[k];
            const double x = static_cast<double>(k);
            w_[k] += c0 + x * (c1 + x * c2);
        }
        return w_;
    }

private:
    void point(double x, double mass) {
        const double fl = std::floor(x);
        const double t = x - fl;
        const long i = static_cast<long>(fl);
        if (i >= 0 && i < static_cast<long>(n_)) w_[static_cast<std::size_t>(i)] += (1.0 - t) * mass;
        if (i + 1 >= 0 && i + 1 < static_cast<long>(n_)) w_[static_cast<std::size_t>(i + 1)] += t * mass;
    }

    std::size_t n_;
    std::vector<double> w_, d0_, d1_, d2_;
};

void accumulate(const Geometry& geo, const Profile& a1, const Profile& a2, const Profile& a, HatMoments& acc) {
    const Profile& po = geo.inner_is_2 ? a1 : a2;
    const Profile& pi = geo.inner_is_2 ? a2 : a1;
    for (const OuterPoint& op : geo.outer) {
        const double A = op.w * po(op.u);
        if (A == 0.0) continue;
        for (std::size_t s = op.begin; s < op.end; ++s) {
            const Segment& sg = geo.segs[s];
            const double vm = 0.5 * (sg.va + sg.vb);
            const double g0 = pi(sg.va) * a(op.u + sg.va);
            const double gm = pi(vm) * a(op.u + vm);
            const double g1 = pi(sg.vb) * a(op.u + sg.vb);
            acc.add(sg.xa, sg.xb, g0, gm, g1, A * (sg.vb - sg.va));
        }
    }
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

}  // namespace

const char* to_string(SignConstraint s) {
    switch (s) {
        case SignConstraint::Any: return "any";
        case SignConstraint::Positive: return "positive";
        case SignConstraint::Negative: return "negative";
    }
    return "?";
}

double Profile::operator()(double x) const {
    const double p = (x - x0) / h;
    if (!(p > -1.0 && p < static_cast<double>(values.size()))) return 0.0;
    const double fl = std::floor(p);
    const long i = static_cast<long>(fl);
    const double t = p - fl;
    const double lo = i >= 0 ? values[static_cast<std::size_t>(i)] : 0.0;
    const double hi = i + 1 < static_cast<long>(values.size()) ? values[static_cast<std::size_t>(i + 1)] : 0.0;
    return lo + t * (hi - lo);
}

bool Profile::support(double& lo, double& hi) const {
    std::size_t first = values.size(), last = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0.0) continue;
        if (first == values.size()) first = i;
        last = i;
    }
    if (first == values.size()) return false;
    lo = x(first) - h;
    hi = x(last) + h;
    return true;
}

bool in_block(const DyadicBlock& b, double xi, double sigma) {
    return radial_member(b.N, std::abs(xi)) && sign_ok(b.sign, xi) && radial_member(b.L, std::abs(sigma));
}

Profile make_block_profile(long N, SignConstraint sign, int resolution, std::uint64_t seed, TestProfile profile) {
    check_dyadic(N);
    if (resolution < 4)
        fail_validation(ErrorKind::Resolution, "block resolution must be >= 4 points per octave, got " +
                                                   std::to_string(resolution));
    Profile p;
    p.h = static_cast<double>(N) / resolution;
    p.x0 = -2.0 * static_cast<double>(N) + 0.5 * p.h;
    p.values.assign(4 * static_cast<std::size_t>(resolution), 0.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double x = p.x(i);
        if (!radial_member(N, std::abs(x)) || !sign_ok(sign, x)) continue;
        if (profile == TestProfile::Random) {
            const double re = gauss(rng), im = gauss(rng);
            p.values[i] = std::hypot(re, im);
        } else {
            p.values[i] = radial_bump(N, x, sign);
        }
    }
    return p;
}

BlockFunction make_test_function(const DyadicBlock& block, int resolution, std::uint64_t seed, TestProfile profile) {
    BlockFunction f;
    f.block = block;
    f.a = make_block_profile(block.N, block.sign, resolution, derive_seed(seed, 1), profile);
    f.b = make_block_profile(block.L, SignConstraint::Any, resolution, derive_seed(seed, 2), profile);
    return f;
}

double lp_norm(const BlockFunction& f, double p) { return profile_norm(f.a, p) * profile_norm(f.b, p); }

double xhat_norm(const BlockFunction& f, double b, double r) {
    const double rc = r / (r - 1.0);
    return profile_norm(f.a, rc) * profile_norm(f.b, rc, b);
}

BlockFunction scaled(const BlockFunction& f, double c) {
    BlockFunction out = f;
    for (double& v : out.a.values) v *= c;
    return out;
}

double j_lattice(const BlockFunction& f1, const BlockFunction& f2, const BlockFunction& f, double alpha) {
    check_alpha(alpha);
    const auto s1 = atoms(f1.b), s2 = atoms(f2.b);
    double total = 0.0;
    for (std::size_t i1 = 0; i1 < f1.a.size(); ++i1) {
        const double v1 = f1.a.values[i1];
        if (v1 == 0.0) continue;
        const double xi1 = f1.a.x(i1);
        for (std::size_t i2 = 0; i2 < f2.a.size(); ++i2) {
            const double v2 = f2.a.values[i2];
            if (v2 == 0.0) continue;
            const double xi2 = f2.a.x(i2);
            const double g = f.a(xi1 + xi2);
            if (g == 0.0) continue;
            total += v1 * v2 * g * sigma_node_sum(s1, s2, f.b, resonance(xi1, xi2, alpha));
        }
    }
    return total * f1.a.h * f2.a.h;
}

double j_functional(const BlockFunction& f1, const BlockFunction& f2, const BlockFunction& f, double alpha) {
    check_alpha(alpha);
    double lo, hi, reach = 0.0;
    for (const Profile* p : {&f1.b, &f2.b, &f.b}) {
        if (!p->support(lo, hi)) return 0.0;
        reach += std::max(std::abs(lo), std::abs(hi));
    }
    OmegaGrid grid;
    grid.h = std::max({f1.b.h, f2.b.h, f.b.h}) / 4.0;
    const long half = static_cast<long>(std::ceil(reach / grid.h)) + 2;
    grid.n = static_cast<std::size_t>(2 * half + 1);
    grid.w0 = -static_cast<double>(half) * grid.h;

    const auto H = sigma_correlation(f1.b, f2.b, f.b, grid);
    const auto geo = build_geometry(f1.a, f2.a, f.a, alpha, grid, f1.block.N >= f2.block.N);
    HatMoments acc(grid.n);
    accumulate(geo, f1.a, f2.a, f.a, acc);
    return dot(H, acc.finish());
}

const char* to_string(LemmaId id) {
    switch (id) {
        case LemmaId::L31: return "L31";
        case LemmaId::L32a: return "L32a";
        case LemmaId::L32b: return "L32b";
        case LemmaId::L33a_opp: return "L33a_opp";
        case LemmaId::L33a_same: return "L33a_same";
        case LemmaId::L33b: return "L33b";
    }
    return "?";
}

LemmaId parse_lemma(const std::string& s) {
    for (auto id : {LemmaId::L31, LemmaId::L32a, LemmaId::L32b, LemmaId::L33a_opp, LemmaId::L33a_same, LemmaId::L33b})
        if (s == to_string(id)) return id;
    fail_validation(ErrorKind::Domain, "unknown lemma id '" + s + "'");
}

std::string hypothesis_violation(LemmaId lemma, const Dims& d) {
    for (long v : {d.N1, d.N2, d.N, d.L1, d.L2, d.L})
        if (!is_dyadic(v)) return "block sizes must be dyadic";
    const long lmax = std::max({d.L1, d.L2, d.L});
    const bool high_low = much_larger(d.N1, d.N2) || much_larger(d.N2, d.N1);
    const bool high_high = comparable(d.N1, d.N2);
    switch (lemma) {
        case LemmaId::L31: return "";
        case LemmaId::L32a:
            if (!high_low) return "L32a needs N1 >> N2 or N2 >> N1";
            if (d.L != lmax) return "L32a needs L = L_max";
            return "";
        case LemmaId::L32b:
            if (!high_low) return "L32b needs N1 >> N2 or N2 >> N1";
            if (d.L1 != lmax && d.L2 != lmax) return "L32b needs L1 = L_max or L2 = L_max";
            return "";
        case LemmaId::L33a_opp:
            if (!high_high || d.N > kComparable * std::max(d.N1, d.N2)) return "L33a_opp needs N1 ~ N2 >~ N";
            if (d.L != lmax) return "L33a_opp needs L = L_max";
            return "";
        case LemmaId::L33a_same:
            if (!high_high || !comparable(d.N, d.N1) || !comparable(d.N, d.N2)) return "L33a_same needs N1 ~ N2 ~ N";
            if (d.L != lmax) return "L33a_same needs L = L_max";
            return "";
        case LemmaId::L33b:
            if (!high_high) return "L33b needs N1 ~ N2";
            if (d.L1 != lmax && d.L2 != lmax) return "L33b needs L1 = L_max or L2 = L_max";
            return "";
    }
    return "";
}

double dyadic_bound(LemmaId lemma, const Dims& d, double r, double alpha, std::optional<int> index) {
    if (!(r > 1.0)) fail_validation(ErrorKind::Domain, "r must exceed 1");
    if (auto why = hypothesis_violation(lemma, d); !why.empty()) fail_validation(ErrorKind::Hypothesis, why);
    const double ir = 1.0 / r, irc = 1.0 - 1.0 / r;
    const long nmax = std::max({d.N1, d.N2, d.N}), nmin = std::min({d.N1, d.N2, d.N});
    const long lmax = std::max({d.L1, d.L2, d.L}), lmin = std::min({d.L1, d.L2, d.L});

    auto indexed = [&](auto&& one) {
        if (index) {
            const long li = *index == 1 ? d.L1 : d.L2;
            if (*index != 1 && *index != 2) fail_validation(ErrorKind::Hypothesis, "index must be 1 or 2");
            if (li != lmax) fail_validation(ErrorKind::Hypothesis, "selected L_i is not L_max");
            return one(*index);
        }
        double best = 0.0;
        if (d.L1 == lmax) best = std::max(best, one(1));
        if (d.L2 == lmax) best = std::max(best, one(2));
        return best;
    };

    switch (lemma) {
        case LemmaId::L31: {
            const double A = pw(lmin, irc) * std::min(pw(d.L1, ir - irc), pw(d.L2, ir - irc));
            const double B = pw(nmin, irc) * std::min(pw(d.N1, ir - irc), pw(d.N2, ir - irc));
            return A * B;
        }
        case LemmaId::L32a:
            return pw(d.L1, ir) * pw(d.L2, ir) * pw(nmax, -(1.0 + alpha) * ir);
        case LemmaId::L32b:
            return indexed([&](int i) {
                const long Li = i == 1 ? d.L1 : d.L2, Ni = i == 1 ? d.N1 : d.N2;
                return pw(d.L1, ir) * pw(d.L2, ir) * pw(d.L, irc) * pw(Li, -ir) * pw(nmin, ir - irc) *
                       std::pow(pw(nmax, alpha) * static_cast<double>(Ni), -irc);
            });
        case LemmaId::L33a_opp:
            return pw(d.L1, ir) * pw(d.L2, ir) * std::pow(pw(nmax, alpha) * static_cast<double>(d.N), -ir);
        case LemmaId::L33a_same:
            return pw(nmax, -alpha / (2.0 * r));
        case LemmaId::L33b:
            return indexed([&](int j) {
                const long Lj = j == 1 ? d.L1 : d.L2;
                return pw(d.L1, ir) * pw(d.L2, ir) * pw(d.L, irc) * pw(Lj, -ir) * pw(nmax, ir - irc) *
                       pw(nmax, -(1.0 + alpha) * irc);
            });
    }
    return 1.0;
}

const std::vector<LemmaId>& all_lemmas() {
    static const std::vector<LemmaId> ids{LemmaId::L31,      LemmaId::L32a,      LemmaId::L32b,
                                          LemmaId::L33a_opp, LemmaId::L33a_same, LemmaId::L33b};
    return ids;
}

std::vector<CaseKind> lemma_cases(LemmaId lemma) {
    switch (lemma) {
        case LemmaId::L31: return {CaseKind::HighLow, CaseKind::HighHighOpposite, CaseKind::HighHighSame};
        case LemmaId::L32a:
        case LemmaId::L32b: return {CaseKind::HighLow};
        case LemmaId::L33a_opp: return {CaseKind::HighHighOpposite};
        case LemmaId::L33a_same: return {CaseKind::HighHighSame};
        case LemmaId::L33b: return {CaseKind::HighHighOpposite, CaseKind::HighHighSame};
    }
    return {};
}

namespace {

struct NShape {
    long N1, N2, N;
    SignConstraint s1, s2;
};

std::vector<NShape> n_shapes(CaseKind kind, long n) {
    std::vector<NShape> out;
    const auto any = SignConstraint::Any, pos = SignConstraint::Positive, neg = SignConstraint::Negative;
    switch (kind) {
        case CaseKind::HighLow:
            for (long m : {1L, n / kMuchLarger})
                if (m >= 1 && much_larger(n, m)) out.push_back({n, m, n, any, any});
            break;
        case CaseKind::HighHighOpposite:
            for (long k : {1L, n}) out.push_back({n, n, k, pos, neg});
            break;
        case CaseKind::HighHighSame:
            out.push_back({n, n, n, pos, pos});
            if (n >= 2) out.push_back({n / 2, n / 2, n, pos, pos});
            break;
    }
    std::vector<NShape> uniq;
    for (const auto& s : out) {
        bool dup = false;
        for (const auto& u : uniq) dup = dup || (u.N1 == s.N1 && u.N2 == s.N2 && u.N == s.N);
        if (!dup) uniq.push_back(s);
    }
    return uniq;
}

using LShape = std::array<long, 3>;

std::vector<LShape> l_shapes(long lam) {
    std::vector<LShape> out{{lam, lam, lam}, {1, 1, lam}, {lam, 1, 1}, {1, lam, 1}, {lam, 1, lam}, {1, lam, lam}};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<long> dyadics(long lo, long hi) {
    std::vector<long> v;
    for (long x = 1; x <= hi; x *= 2)
        if (x >= lo) v.push_back(x);
    return v;
}

// Omega window shared by every modulation shape with L_max = lam: the sigma
// supports reach 2L + 3h/2 each, so 6.5 lam covers any shape.
OmegaGrid level_grid(long lam, int resolution) {
    OmegaGrid g;
    g.h = static_cast<double>(lam) / (4.0 * resolution);
    const long half = std::lround(6.5 * static_cast<double>(lam) / g.h);
    g.n = static_cast<std::size_t>(2 * half + 1);
    g.w0 = -static_cast<double>(half) * g.h;
    return g;
}

void check_ranges(const SweepRanges& r) {
    if (r.n_max_lo < 1 || r.l_max_lo < 1 || r.n_max_lo > r.n_max_hi || r.l_max_lo > r.l_max_hi)
        fail_validation(ErrorKind::Domain, "empty sweep range");
    if (r.resolution < 4)
        fail_validation(ErrorKind::Resolution, "block resolution must be >= 4 points per octave, got " +
                                                   std::to_string(r.resolution));
}

}  // namespace

std::vector<SweepTuple> sweep_tuples(CaseKind kind, const SweepRanges& ranges) {
    check_ranges(ranges);
    std::vector<SweepTuple> out;
    for (long n : dyadics(ranges.n_max_lo, ranges.n_max_hi))
        for (const auto& ns : n_shapes(kind, n))
            for (long lam : dyadics(ranges.l_max_lo, ranges.l_max_hi))
                for (const auto& ls : l_shapes(lam))
                    out.push_back({{ns.N1, ns.N2, ns.N, ls[0], ls[1], ls[2]}, ns.s1, ns.s2, kind});
    return out;
}

std::vector<EstimateRatioRecord> certify(const CertifySpec& spec) {
    for (double a : spec.alphas) check_alpha(a);
    for (double r : spec.rs)
        if (!(r > 1.0)) fail_validation(ErrorKind::Domain, "r must exceed 1");
    if (spec.trials < 0) fail_validation(ErrorKind::Domain, "trials must be >= 0");
    check_ranges(spec.ranges);
    if (spec.trials == 0 || spec.lemmas.empty() || spec.rs.empty() || spec.alphas.empty()) return {};

    std::vector<CaseKind> kinds = spec.kinds;
    if (kinds.empty()) {
        for (auto k : {CaseKind::HighLow, CaseKind::HighHighOpposite, CaseKind::HighHighSame})
            for (auto l : spec.lemmas) {
                const auto c = lemma_cases(l);
                if (std::find(c.begin(), c.end(), k) != c.end()) {
                    kinds.push_back(k);
                    break;
                }
            }
    }
    const int res = spec.ranges.resolution;
    const auto trials = static_cast<std::size_t>(spec.trials);
    const std::size_t n_r = spec.rs.size();
    auto trial_seed = [&](std::size_t t) { return derive_seed(spec.seed, t); };

    // Modulation side: one sigma-correlation table per (shape, trial), shared
    // by every frequency shape and alpha.
    struct ModShape {
        LShape L;
        std::size_t level;
        std::vector<std::vector<double>> H;         // per trial
        std::vector<std::vector<double>> lp, xhat;  // per trial: [r][factor]
    };
    const auto levels = dyadics(spec.ranges.l_max_lo, spec.ranges.l_max_hi);
    std::vector<OmegaGrid> grids;
    std::vector<ModShape> mods;
    for (std::size_t li = 0; li < levels.size(); ++li) {
        grids.push_back(level_grid(levels[li], res));
        for (const auto& ls : l_shapes(levels[li])) mods.push_back({ls, li, {}, {}, {}});
    }
    for (auto& m : mods) {
        m.H.resize(trials);
        m.lp.resize(trials);
        m.xhat.resize(trials);
    }
    parallel_for(mods.size() * trials, [&](std::size_t job) {
        ModShape& m = mods[job / trials];
        const std::size_t t = job % trials;
        std::array<Profile, 3> b;
        for (std::size_t i = 0; i < 3; ++i)
            b[i] = make_block_profile(m.L[i], SignConstraint::Any, res,
                                      derive_seed(trial_seed(t), 2, m.L[0], m.L[1], m.L[2], i), spec.profile);
        m.H[t] = sigma_correlation(b[0], b[1], b[2], grids[m.level]);
        auto& lp = m.lp[t];
        auto& xh = m.xhat[t];
        for (double r : spec.rs) {
            const double rc = r / (r - 1.0), bexp = 1.0 / r + spec.b_epsilon;
            lp.insert(lp.end(), {profile_norm(b[0], rc), profile_norm(b[1], rc), profile_norm(b[2], r)});
            xh.insert(xh.end(), {profile_norm(b[0], rc, bexp), profile_norm(b[1], rc, bexp)});
        }
    });

    struct Job {
        CaseKind kind;
        NShape ns;
        double alpha;
    };
    std::vector<Job> jobs;
    for (auto k : kinds)
        for (double a : spec.alphas)
            for (long n : dyadics(spec.ranges.n_max_lo, spec.ranges.n_max_hi))
                for (const auto& ns : n_shapes(k, n)) jobs.push_back({k, ns, a});

    const std::size_t n_lemmas = spec.lemmas.size();
    std::vector<std::vector<std::vector<EstimateRatioRecord>>> out(jobs.size(),
                                                                   std::vector<std::vector<EstimateRatioRecord>>(n_lemmas));
    parallel_for(jobs.size(), [&](std::size_t ji) {
        const Job& job = jobs[ji];
        const NShape& ns = job.ns;
        std::vector<std::array<Profile, 3>> a(trials);
        std::vector<std::vector<double>> a_norms(trials);  // [r][factor]
        const std::array<long, 3> Ns{ns.N1, ns.N2, ns.N};
        const std::array<SignConstraint, 3> signs{ns.s1, ns.s2, SignConstraint::Any};
        for (std::size_t t = 0; t < trials; ++t) {
            for (std::size_t i = 0; i < 3; ++i)
                a[t][i] = make_block_profile(Ns[i], signs[i], res,
                                             derive_seed(trial_seed(t), 1, ns.N1, ns.N2, ns.N,
                                                         static_cast<int>(ns.s1), static_cast<int>(ns.s2), i),
                                             spec.profile);
            for (double r : spec.rs) {
                const double rc = r / (r - 1.0);
                a_norms[t].insert(a_norms[t].end(),
                                  {profile_norm(a[t][0], rc), profile_norm(a[t][1], rc), profile_norm(a[t][2], r)});
            }
        }
        const bool inner_is_2 = ns.N1 >= ns.N2;
        std::size_t mi = 0;
        for (std::size_t li = 0; li < levels.size(); ++li) {
            const OmegaGrid& grid = grids[li];
            const std::size_t m_begin = mi;
            while (mi < mods.size() && mods[mi].level == li) ++mi;
            // Supports depend only on the blocks, so trial 0 fixes the geometry.
            const Geometry geo = build_geometry(a[0][0], a[0][1], a[0][2], job.alpha, grid, inner_is_2);
            HatMoments acc(grid.n);
            std::vector<std::vector<double>> J(mi - m_begin, std::vector<double>(trials, 0.0));
            for (std::size_t t = 0; t < trials; ++t) {
                acc.reset();
                accumulate(geo, a[t][0], a[t][1], a[t][2], acc);
                const auto& W = acc.finish();
                for (std::size_t m = m_begin; m < mi; ++m) J[m - m_begin][t] = dot(mods[m].H[t], W);
            }
            for (std::size_t m = m_begin; m < mi; ++m) {
                const ModShape& mod = mods[m];
                const Dims d{ns.N1, ns.N2, ns.N, mod.L[0], mod.L[1], mod.L[2]};
                for (std::size_t lk = 0; lk < n_lemmas; ++lk) {
                    const LemmaId lemma = spec.lemmas[lk];
                    const auto cases = lemma_cases(lemma);
                    if (std::find(cases.begin(), cases.end(), job.kind) == cases.end()) continue;
                    if (!hypothesis_violation(lemma, d).empty()) continue;
                    for (std::size_t t = 0; t < trials; ++t) {
                        for (std::size_t ri = 0; ri < n_r; ++ri) {
                            const double r = spec.rs[ri];
                            const double* an = &a_norms[t][3 * ri];
                            const double* bn = &mod.lp[t][3 * ri];
                            const double* xn = &mod.xhat[t][2 * ri];
                            EstimateRatioRecord rec;
                            rec.lemma = to_string(lemma);
                            rec.case_kind = to_string(job.kind);
                            rec.N1 = d.N1; rec.N2 = d.N2; rec.N = d.N;
                            rec.L1 = d.L1; rec.L2 = d.L2; rec.L = d.L;
                            rec.r = r;
                            rec.alpha = job.alpha;
                            rec.trial = static_cast<long>(t);
                            rec.seed = trial_seed(t);
                            rec.j_value = J[m - m_begin][t];
                            rec.bound = dyadic_bound(lemma, d, r, job.alpha);
                            if (lemma == LemmaId::L33a_same)
                                rec.norm_product = an[0] * xn[0] * an[1] * xn[1] * an[2] * bn[2];
                            else
                                rec.norm_product = an[0] * bn[0] * an[1] * bn[1] * an[2] * bn[2];
                            rec.ratio = rec.j_value / (rec.bound * rec.norm_product);
                            out[ji][lk].push_back(std::move(rec));
                        }
                    }
                }
            }
        }
    });

    std::vector<EstimateRatioRecord> records;
    for (std::size_t lk = 0; lk < n_lemmas; ++lk)
        for (auto& per_job : out)
            for (auto& rec : per_job[lk]) records.push_back(std::move(rec));
    return records;
}

std::vector<EstimateRatioRecord> certify_case(LemmaId lemma, CaseKind kind, const SweepRanges& ranges, int trials,
                                              const std::vector<double>& rs, double alpha, std::uint64_t seed,
                                              double b_epsilon) {
    const auto cases = lemma_cases(lemma);
    if (std::find(cases.begin(), cases.end(), kind) == cases.end())
        fail_validation(ErrorKind::Hypothesis, std::string(to_string(lemma)) + " is not certified on " + to_string(kind));
    CertifySpec spec;
    spec.lemmas = {lemma};
    spec.kinds = {kind};
    spec.alphas = {alpha};
    spec.rs = rs;
    spec.ranges = ranges;
    spec.trials = trials;
    spec.seed = seed;
    spec.b_epsilon = b_epsilon;
    return certify(spec);
}

SlopeFit worst_case_slope(const std::vector<EstimateRatioRecord>& records, SlopeAxis axis, double r) {
    std::map<long, double> worst;
    for (const auto& rec : records) {
        if (rec.r != r) continue;
        const long x = axis == SlopeAxis::NMax ? std::max({rec.N1, rec.N2, rec.N}) : std::max({rec.L1, rec.L2, rec.L});
        auto& w = worst[x];
        w = std::max(w, rec.ratio);
    }
    SlopeFit fit;
    for (auto [x, w] : worst) {
        if (w <= 0.0) continue;
        fit.x.push_back(static_cast<double>(x));
        fit.worst.push_back(w);
    }
    auto ls = [&](std::size_t start) {
        const std::size_t n = fit.x.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(n - start);
        for (std::size_t i = start; i < n; ++i) {
            const double lx = std::log2(fit.x[i]), ly = std::log2(fit.worst[i]);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    const std::size_t n = fit.x.size();
    fit.points = n;
    if (n < 2) return fit;
    fit.slope = ls(0);
    fit.tail_slope = ls(n >= 4 ? n / 2 : 0);
    return fit;
}

}  // namespace dgbo
