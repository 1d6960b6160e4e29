#include "scatterlab/signal.hpp"

#include <stdexcept>

#include "scatterlab/fft.hpp"
#include "scatterlab/rng.hpp"

namespace scatterlab {

rvec smooth_signal(int n, std::uint64_t seed, int kc) {
    if (!is_pow2(n) || n < 4) throw std::invalid_argument("smooth_signal: bad n");
    if (kc <= 0) kc = n / 8;
    Rng rng(seed);
    const int half = n / 2;
    rvec re = rng.normals(half - 1), im = rng.normals(half - 1);
    cvec F(n, cd(0.0, 0.0));
    for (int k = 1; k < half; ++k) {
        const double t = double(k) / double(kc);
        const cd g = cd(re[k - 1], im[k - 1]) * std::exp(-t * t);
        F[k] = g;
        F[n - k] = std::conj(g);
    }
    F[0] = cd(rng.normal(), 0.0);
    ifft(F);
    rvec f = real_part(F);
    const double nrm = l2_norm(f);
    for (double& v : f) v /= nrm;
    return f;
}

rvec dirac(int n) {
    rvec f(n, 0.0);
    f[0] = 1.0;
    return f;
}

namespace {
rvec catmull_rom_eval(const rvec& f, const rvec& pos) {
    const long n = long(f.size());
    rvec out(f.size());
    for (long i = 0; i < n; ++i) {
        double x = std::fmod(pos[i], double(n));
        if (x < 0) x += double(n);
        const double fl = std::floor(x);
        const double t = x - fl;
        const long i1 = long(fl) % n;
        const long i0 = (i1 - 1 + n) % n, i2 = (i1 + 1) % n, i3 = (i1 + 2) % n;
        const double a = f[i0], b = f[i1], c = f[i2], d = f[i3];
        out[i] = b + 0.5 * t * (c - a + t * (2 * a - 5 * b + 4 * c - d + t * (3 * (b - c) + d - a)));
    }
    return out;
}
}  // namespace

rvec warp_samples(const rvec& f, const rvec& tau) {
    rvec pos(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) pos[i] = double(i) - tau[i];
    return catmull_rom_eval(f, pos);
}

rvec catmull_rom_shift(const rvec& f, double c) {
    rvec pos(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) pos[i] = double(i) - c;
    return catmull_rom_eval(f, pos);
}

cvec catmull_rom_shift(const cvec& f, double c) {
    rvec re(f.size()), im(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        re[i] = f[i].real();
        im[i] = f[i].imag();
    }
    const rvec sre = catmull_rom_shift(re, c), sim = catmull_rom_shift(im, c);
    cvec out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = cd(sre[i], sim[i]);
    return out;
}

rvec spectral_shift(const rvec& f, double c) {
    const int n = int(f.size());
    cvec F = fft_of(f);
    const cd nyq = F[n / 2];
    const rvec w = wrapped_grid(n);
    for (int k = 0; k < n; ++k) F[k] *= std::polar(1.0, -w[k] * c);
    F[n / 2] = nyq * std::cos(kPi * c);
    ifft(F);
    return real_part(F);
}

rvec wrapped_grid(int n) {
    rvec w(n);
    for (int k = 0; k < n; ++k) {
        w[k] = kTwoPi * double(k) / double(n);
        if (w[k] > kPi) w[k] -= kTwoPi;
    }
    return w;
}

}  // namespace scatterlab
