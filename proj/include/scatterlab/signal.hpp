#pragma once
#include "scatterlab/common.hpp"

namespace scatterlab {

// Random band-limited test signal: Hermitian Gaussian-tapered spectrum with
// cutoff kc (defaults to n/8), empty Nyquist bin, normalized to unit l2 norm.
rvec smooth_signal(int n, std::uint64_t seed, int kc = 0);

rvec dirac(int n);

template <class V>
V circshift(const V& x, long s) {
    const long n = long(x.size());
    V out(x.size());
    s = ((s % n) + n) % n;
    for (long i = 0; i < n; ++i) out[(i + s) % n] = x[i];
    return out;
}

// Periodic Catmull-Rom interpolation of f at positions x_i - tau_i.
rvec warp_samples(const rvec& f, const rvec& tau);
// Uniform fractional shift by c samples (same kernel).
rvec catmull_rom_shift(const rvec& f, double c);
cvec catmull_rom_shift(const cvec& f, double c);
// Exact band-limited shift: phase ramp exp(-i*omega*c) with the Nyquist bin
// set to cos(pi*c) so real signals stay real.
rvec spectral_shift(const rvec& f, double c);

// Wrapped digital frequency of bin k: 2*pi*k/n mapped to (-pi, pi].
rvec wrapped_grid(int n);

}  // namespace scatterlab
