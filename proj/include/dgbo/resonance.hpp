#pragma once

#include <cstdint>
#include <string>

namespace dgbo {

enum class CaseKind { HighLow, HighHighOpposite, HighHighSame };

const char* to_string(CaseKind k);
CaseKind parse_case_kind(const std::string& s);

// "much larger" means a factor >= 16, "comparable" within a factor 4.
inline constexpr long kMuchLarger = 16;
inline constexpr long kComparable = 4;

bool much_larger(long a, long b);
bool comparable(long a, long b);

struct InteractionCase {
    CaseKind kind = CaseKind::HighLow;
    long N1 = 1, N2 = 1, N = 1;
};

// Throws Region errors for non-dyadic or contradictory blocks.
void validate(const InteractionCase& c);

double resonance(double xi1, double xi2, double alpha);

double modulation_identity_residual(double tau1, double tau2, double xi1, double xi2, double alpha);

enum class JacobianKind { OmegaPrimeDiff, ShiftedDiff };
// |omega'(xi2) - omega'(xi1)| or |omega'(xi1) - omega'(xi1 + xi2)|.
double jacobian_factor(double xi1, double xi2, double alpha, JacobianKind which);

struct HValue {
    double h;
    double h_prime;
};
HValue h_function(double x, double xi, double alpha);

struct ResonanceStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    std::size_t n = 0;
};

// Case lower bound: N1^{1+a} N2, N1^{1+a} N, N1^{2+a} (N1 the high block).
double case_bound(const InteractionCase& c, double alpha);

// |Omega| / case_bound over uniform samples of the case region.
ResonanceStats resonance_bound_ratio(const InteractionCase& c, double alpha, std::size_t n_samples,
                                     std::uint64_t seed);

}  // namespace dgbo
