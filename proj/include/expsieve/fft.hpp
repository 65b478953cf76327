#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace expsieve {

using cplx = std::complex<double>;

// In-place iterative radix-2 FFT, n a power of two.
// sign=+1 evaluates sum_k x_k exp(+2*pi*i*jk/n), sign=-1 the conjugate kernel.
void fft_pow2(std::vector<cplx>& a, int sign);

// Arbitrary-length transform X_j = sum_k x_k exp(+2*pi*i*jk/m) via Bluestein's
// chirp: jk = (j^2 + k^2 - (j-k)^2)/2 turns the sum into one linear
// convolution of chirped inputs, done with zero-padded power-of-two FFTs.
std::vector<cplx> czt_eplus(const std::vector<cplx>& x);

} // namespace expsieve
