#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dgbo::fft {

// Unnormalised in-place DFTs. sign = -1 forward, +1 backward.
void transform_1d(std::vector<std::complex<double>>& data, int sign);
void transform_1d(std::complex<double>* data, std::size_t n, int sign);
// Row-major n0 x n1.
void transform_2d(std::complex<double>* data, std::size_t n0, std::size_t n1, int sign);
// howmany contiguous transforms of length n, stride 1, distance n.
void transform_many(std::complex<double>* data, std::size_t n, std::size_t howmany, int sign);

}  // namespace dgbo::fft
