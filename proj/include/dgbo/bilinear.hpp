#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgbo/resonance.hpp"

namespace dgbo {

enum class SignConstraint { Any, Positive, Negative };

const char* to_string(SignConstraint s);

// D_{N,L}: N/2 < |xi| <= 2N and L/2 < |sigma| <= 2L; index 1 is the low block
// |.| <= 2 including the origin.
struct DyadicBlock {
    long N = 1;
    long L = 1;
    SignConstraint sign = SignConstraint::Any;
};

enum class TestProfile { Random, Smooth };

// Uniform node lattice x_i = x0 + i*h, i < n. The function is the piecewise
// linear interpolant of `values` with implicit zero nodes at i = -1 and i = n.
struct Profile {
    double x0 = 0.0, h = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
    double operator()(double x) const;
    // Support of the interpolant; false if every node value is zero.
    bool support(double& lo, double& hi) const;
};

// Cell-centred nodes over [-2N, 2N] with spacing N/resolution; values vanish
// off the annulus (and off the sign constraint). Random values are moduli of
// complex Gaussians, Smooth values a fixed bump across the annulus.
Profile make_block_profile(long N, SignConstraint sign, int resolution, std::uint64_t seed, TestProfile profile);

// Separable nonnegative block function f(xi, sigma) = a(xi) b(sigma).
struct BlockFunction {
    DyadicBlock block;
    Profile a;  // frequency factor
    Profile b;  // modulation factor

    double at(std::size_t i, std::size_t j) const { return a.values[i] * b.values[j]; }
};

bool in_block(const DyadicBlock& b, double xi, double sigma);

// resolution = lattice cells on the octave [N, 2N] (resp. [L, 2L]); >= 4.
BlockFunction make_test_function(const DyadicBlock& block, int resolution, std::uint64_t seed,
                                 TestProfile profile = TestProfile::Random);

// Node-sum norms: (sum |v|^p hxi hsig)^{1/p} and (sum |<sigma>^b v|^{r'} hxi hsig)^{1/r'}.
double lp_norm(const BlockFunction& f, double p);
double xhat_norm(const BlockFunction& f, double b, double r);

BlockFunction scaled(const BlockFunction& f, double c);

// J(f1, f2, f) = int f1(xi1, s1) f2(xi2, s2) f(xi1 + xi2, s1 + s2 + Omega(xi1, xi2)).
//
// j_lattice is the plain node sum over (xi1, s1, xi2, s2) with f interpolated.
// It cannot see resonant strips thinner than the xi spacing.
//
// j_functional keeps node sums in the modulations (over the two finest
// lattices, with the coarsest factor interpolated) but integrates the frequency
// variables of the piecewise linear interpolants: the sigma part is tabulated
// as a function of Omega, and the frequency mass is carried along the level
// sets of Omega onto that table, so strips of any width are integrated.
double j_lattice(const BlockFunction& f1, const BlockFunction& f2, const BlockFunction& f, double alpha);
double j_functional(const BlockFunction& f1, const BlockFunction& f2, const BlockFunction& f, double alpha);

enum class LemmaId { L31, L32a, L32b, L33a_opp, L33a_same, L33b };

const char* to_string(LemmaId id);
LemmaId parse_lemma(const std::string& s);
const std::vector<LemmaId>& all_lemmas();

struct Dims {
    long N1 = 1, N2 = 1, N = 1;
    long L1 = 1, L2 = 1, L = 1;
};

// Closed-form bound factor. For L32b and L33b `index` picks which of L1, L2
// is maximal; when omitted every maximal index is evaluated and the larger
// bound is returned.
double dyadic_bound(LemmaId lemma, const Dims& d, double r, double alpha, std::optional<int> index = std::nullopt);

// Empty string if d satisfies the lemma's hypotheses.
std::string hypothesis_violation(LemmaId lemma, const Dims& d);

// Frequency configurations each lemma is certified on.
std::vector<CaseKind> lemma_cases(LemmaId lemma);

struct EstimateRatioRecord {
    std::string lemma;
    std::string case_kind;
    long N1 = 1, N2 = 1, N = 1, L1 = 1, L2 = 1, L = 1;
    double r = 2.0;
    double alpha = 1.0;
    long trial = 0;
    std::uint64_t seed = 0;
    double j_value = 0.0;
    double bound = 0.0;
    double norm_product = 0.0;
    double ratio = 0.0;

    bool operator==(const EstimateRatioRecord&) const = default;
};

struct SweepRanges {
    long n_max_lo = 2, n_max_hi = 256;
    long l_max_lo = 1, l_max_hi = 1024;
    int resolution = 16;
};

struct SweepTuple {
    Dims dims;
    SignConstraint sign1 = SignConstraint::Any;
    SignConstraint sign2 = SignConstraint::Any;
    CaseKind kind = CaseKind::HighLow;
};

// Tuples for one interaction case: for each N_max the case's frequency
// shapes, crossed with modulation shapes (l,l,l), (1,1,l), (l,1,1), (1,l,1),
// (l,1,l), (1,l,l) for each L_max = l.
std::vector<SweepTuple> sweep_tuples(CaseKind kind, const SweepRanges& ranges);

struct CertifySpec {
    std::vector<LemmaId> lemmas;
    std::vector<CaseKind> kinds;  // empty: every case any requested lemma uses
    std::vector<double> alphas{1.0};
    std::vector<double> rs{2.0};
    SweepRanges ranges;
    int trials = 32;
    std::uint64_t seed = 0;
    double b_epsilon = 0.05;
    TestProfile profile = TestProfile::Random;
};

// J is evaluated once per (tuple, trial, alpha) and shared by every lemma whose
// case list and hypotheses admit the tuple, and by every r. Frequency factors
// are seeded from (trial, N-shape), modulation factors from (trial, L-shape).
// Records are ordered by lemma, then case, alpha, tuple, trial, r.
std::vector<EstimateRatioRecord> certify(const CertifySpec& spec);

std::vector<EstimateRatioRecord> certify_case(LemmaId lemma, CaseKind kind, const SweepRanges& ranges, int trials,
                                              const std::vector<double>& rs, double alpha, std::uint64_t seed,
                                              double b_epsilon = 0.05);

struct SlopeFit {
    double slope = 0.0;       // least squares over every populated abscissa
    double tail_slope = 0.0;  // upper half of the abscissae (all of them below 4)
    std::size_t points = 0;
    std::vector<double> x;      // dyadic abscissa
    std::vector<double> worst;  // worst-case ratio at x
};

enum class SlopeAxis { NMax, LMax };

// Worst-case ratio per N_max (or L_max) for one r, then least-squares slopes
// of log(worst) against log(x). Abscissae whose worst ratio is 0 (no
// resonant overlap anywhere) are excluded.
SlopeFit worst_case_slope(const std::vector<EstimateRatioRecord>& records, SlopeAxis axis, double r);

}  // namespace dgbo
