#include "dgbo/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dgbo/dyadic.hpp"
#include "dgbo/errors.hpp"
#include "dgbo/spectral.hpp"

namespace dgbo {
namespace {

double signed_pow(double y, double alpha) { return y * std::pow(std::abs(y), 1.0 + alpha); }

double omega_prime(double xi, double alpha) { return group_velocity(xi, alpha); }

struct Shell {
    double lo, hi;
};

// Index 1 samples (1/2, 2] so that the low block never straddles 0.
Shell shell(long N, double margin) {
    const double n = static_cast<double>(N);
    return {0.5 * n + margin, 2.0 * n - margin};
}

}  // namespace

const char* to_string(CaseKind k) {
    switch (k) {
        case CaseKind::HighLow: return "high_low";
        case CaseKind::HighHighOpposite: return "high_high_opposite";
        case CaseKind::HighHighSame: return "high_high_same";
    }
    return "?";
}

CaseKind parse_case_kind(const std::string& s) {
    if (s == "high_low") return CaseKind::HighLow;
    if (s == "high_high_opposite") return CaseKind::HighHighOpposite;
    if (s == "high_high_same") return CaseKind::HighHighSame;
    fail_validation(ErrorKind::Domain, "unknown interaction case '" + s + "'");
}

bool much_larger(long a, long b) { return a >= kMuchLarger * b; }

bool comparable(long a, long b) { return a <= kComparable * b && b <= kComparable * a; }

void validate(const InteractionCase& c) {
    if (!is_dyadic(c.N1) || !is_dyadic(c.N2) || !is_dyadic(c.N))
        fail_validation(ErrorKind::Region, "block sizes must be dyadic");
    switch (c.kind) {
        case CaseKind::HighLow:
            if (!much_larger(c.N1, c.N2) || !comparable(c.N, c.N1))
                fail_validation(ErrorKind::Region, "high_low needs N ~ N1 >> N2");
            break;
        case CaseKind::HighHighOpposite:
            if (!comparable(c.N1, c.N2) || c.N > kComparable * std::max(c.N1, c.N2))
                fail_validation(ErrorKind::Region, "high_high_opposite needs N1 ~ N2 >~ N");
            break;
        case CaseKind::HighHighSame:
            if (!comparable(c.N1, c.N2) || !comparable(c.N, c.N1) || !comparable(c.N, c.N2))
                fail_validation(ErrorKind::Region, "high_high_same needs N1 ~ N2 ~ N");
            break;
    }
}

double resonance(double xi1, double xi2, double alpha) {
    return dispersion(xi1, alpha) + dispersion(xi2, alpha) - dispersion(xi1 + xi2, alpha);
}

double modulation_identity_residual(double tau1, double tau2, double xi1, double xi2, double alpha) {
    const double sigma1 = tau1 - dispersion(xi1, alpha);
    const double sigma2 = tau2 - dispersion(xi2, alpha);
    const double sigma = (tau1 + tau2) - dispersion(xi1 + xi2, alpha);
    return sigma - (sigma1 + sigma2 + resonance(xi1, xi2, alpha));
}

double jacobian_factor(double xi1, double xi2, double alpha, JacobianKind which) {
    if (which == JacobianKind::OmegaPrimeDiff) return std::abs(omega_prime(xi2, alpha) - omega_prime(xi1, alpha));
    return std::abs(omega_prime(xi1, alpha) - omega_prime(xi1 + xi2, alpha));
}

HValue h_function(double x, double xi, double alpha) {
    const double c = 0.5 * xi;
    const double base = signed_pow(c, alpha);
    const double h = (signed_pow(c + x, alpha) - base) + (signed_pow(c - x, alpha) - base);
    const double hp = (2.0 + alpha) * (std::pow(std::abs(c + x), 1.0 + alpha) - std::pow(std::abs(c - x), 1.0 + alpha));
    return {h, hp};
}

double case_bound(const InteractionCase& c, double alpha) {
    const double hi = static_cast<double>(std::max(c.N1, c.N2));
    switch (c.kind) {
        case CaseKind::HighLow:
            return std::pow(hi, 1.0 + alpha) * static_cast<double>(std::min(c.N1, c.N2));
        case CaseKind::HighHighOpposite:
            return std::pow(hi, 1.0 + alpha) * static_cast<double>(c.N);
        case CaseKind::HighHighSame:
            return std::pow(hi, 2.0 + alpha);
    }
    return 1.0;
}

ResonanceStats resonance_bound_ratio(const InteractionCase& c, double alpha, std::size_t n_samples,
                                     std::uint64_t seed) {
    check_alpha(alpha);
    validate(c);
    if (n_samples == 0) fail_validation(ErrorKind::Domain, "n_samples must be >= 1");

    const double margin = static_cast<double>(std::min({c.N1, c.N2, c.N})) / 100.0;
    const Shell s1 = shell(c.N1, margin), s2 = shell(c.N2, margin), s = shell(c.N, margin);
    const double bound = case_bound(c, alpha);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u1(s1.lo, s1.hi), u2(s2.lo, s2.hi);
    std::bernoulli_distribution coin(0.5);

    ResonanceStats st;
    st.min = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    const std::size_t max_attempts = 1000 * n_samples + 100000;
    std::size_t attempts = 0;
    while (st.n < n_samples) {
        if (++attempts > max_attempts) {
            fail_validation(ErrorKind::Region, st.n == 0 ? "case region is empty on the sampled shells"
                                                         : "case region too thin to sample");
        }
        double xi1 = u1(rng), xi2 = u2(rng);
        switch (c.kind) {
            case CaseKind::HighLow:
                if (coin(rng)) xi1 = -xi1;
                if (coin(rng)) xi2 = -xi2;
                break;
            case CaseKind::HighHighOpposite:
                xi2 = -xi2;
                if (coin(rng)) { xi1 = -xi1; xi2 = -xi2; }
                break;
            case CaseKind::HighHighSame:
                if (coin(rng)) { xi1 = -xi1; xi2 = -xi2; }
                break;
        }
        const double a = std::abs(xi1 + xi2);
        if (!(a > s.lo && a < s.hi)) continue;
        const double ratio = std::abs(resonance(xi1, xi2, alpha)) / bound;
        st.min = std::min(st.min, ratio);
        st.max = std::max(st.max, ratio);
        sum += ratio;
        ++st.n;
    }
    st.mean = sum / static_cast<double>(st.n);
    return st;
}

}  // namespace dgbo
