#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hardy::fft {

using cplx = std::complex<double>;

// Fourier coefficients of grid samples, c_p = (1/N) sum_j f(t_j) t_j^{-p},
// returned in transform order (coefficient p sits at index p mod N).
std::vector<cplx> coefficients(std::span<const cplx> samples);

// Grid samples f(t_j) = sum_p c_p t_j^p from coefficients in transform order.
std::vector<cplx> samples(std::span<const cplx> coeffs);

}  // namespace hardy::fft
