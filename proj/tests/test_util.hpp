#pragma once
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "scatterlab/common.hpp"
#include "scatterlab/fft.hpp"
#include "scatterlab/rng.hpp"

namespace testsig {

// Hermitian spectrum with unit-magnitude bins 1..kc and zero elsewhere.
// Quadratic phase spreads the signal in time; fully deterministic.
inline scatterlab::rvec chirp(int n, int kc) {
    scatterlab::cvec F(n, {0.0, 0.0});
    for (int k = 1; k <= kc; ++k) {
        F[k] = std::polar(1.0, scatterlab::kPi * double(k) * double(k) / double(kc));
        F[n - k] = std::conj(F[k]);
    }
    scatterlab::rvec f = scatterlab::real_part(scatterlab::ifft_of(F));
    const double s = std::sqrt(scatterlab::norm_sq(f));
    for (double& v : f) v /= s;
    return f;
}

// Random hermitian spectrum with a hard cutoff at kc, unit norm.
inline scatterlab::rvec bandlimited(int n, std::uint64_t seed, int kc) {
    scatterlab::Rng rng(seed);
    scatterlab::cvec F(n, {0.0, 0.0});
    for (int k = 1; k <= kc; ++k) {
        const std::complex<double> a(rng.normal(), rng.normal());
        F[k] = a;
        F[n - k] = std::conj(a);
    }
    scatterlab::rvec f = scatterlab::real_part(scatterlab::ifft_of(F));
    const double s = std::sqrt(scatterlab::norm_sq(f));
    for (double& v : f) v /= s;
    return f;
}

}  // namespace testsig
