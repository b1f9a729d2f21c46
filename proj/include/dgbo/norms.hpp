#pragma once

#include <limits>
#include <vector>

#include "dgbo/spectral.hpp"

namespace dgbo {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct NormParams {
    double s = 0.0;
    double b = 0.0;
    double r = 2.0;
    double alpha = 1.0;

    double r_conj() const { return r / (r - 1.0); }
};

// Checks r in (1, inf) and finite s, b.
void validate(const NormParams& p);

double japanese(double x);

// (sum_k |w(xi_k)^s f^(xi_k)|^{r'} dxi)^{1/r'}, w = <xi> or |xi|.
double fl_norm(const SpectralField& f, const NormParams& p, bool homogeneous = false);

// (sum |<xi>^s <tau - omega(xi)>^b u^|^{r'} dxi dtau)^{1/r'}
double xsb_norm(const SpaceTimeField& u, const NormParams& p);

// L^q_t L^p_x with dx, dt weights; pass `infinity` for the sup norm.
double mixed_norm(const SpaceTimeSamples& u, double q, double p);

// Per-x time-Fourier norms (sum_m |F_t u(x_j, tau_m)|^{r'} dtau)^{1/r'}.
// rows holds n_rows consecutive time series of length time.n.
std::vector<double> smoothing_profile(std::span<const cplx> rows, const Grid1D& time, double r);

// sup_x of smoothing_profile.
double smoothing_norm(const SpaceTimeSamples& u, double r);

}  // namespace dgbo
