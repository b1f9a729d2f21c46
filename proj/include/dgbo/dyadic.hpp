#pragma once

#include "dgbo/spectral.hpp"

namespace dgbo {

// Smooth even cutoff: 1 on [-1, 1], 0 outside (-5/4, 5/4).
double bump_psi(double xi);
// chi(xi) = psi(xi) - psi(2 xi), supported in 1/2 < |xi| < 5/4.
double bump_chi(double xi);
// psi for N = 1, chi(xi / N) otherwise.
double dyadic_multiplier(double xi, long N);

bool is_dyadic(long N);
void check_dyadic(long N);

SpectralField project_frequency(const SpectralField& f, long N);
SpaceTimeField project_modulation(const SpaceTimeField& u, long L, double alpha);

}  // namespace dgbo
