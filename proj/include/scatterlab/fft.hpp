#pragma once
#include "scatterlab/common.hpp"

namespace scatterlab {

// In-place radix-2 FFT, power-of-two lengths only. Forward is unnormalized,
// inverse carries the 1/n factor. Single-threaded and free of any runtime
// dispatch so results are bit-reproducible across thread counts.
void fft(cvec& a);
void ifft(cvec& a);

cvec fft_of(const cvec& x);
cvec fft_of(const rvec& x);
cvec ifft_of(const cvec& x);

// ifft(F .* h) for a real spectral multiplier h (filter application).
cvec apply_filter(const cvec& F, const rvec& h);
cvec apply_filter(const cvec& F, const cvec& h);
// |ifft(F .* h)| as a complex vector with zero imaginary part, ready to be
// pushed through the next cascade layer.
cvec modulus_filter(const cvec& F, const rvec& h);
// ||ifft(F .* h)||^2 without leaving the frequency domain.
double filtered_energy(const cvec& F, const rvec& h);

}  // namespace scatterlab
