#include "scatterlab/fft.hpp"

#include <stdexcept>
#include <unordered_map>

namespace scatterlab {
namespace {

// Twiddle cache per transform size: w[k] = exp(-2*pi*i*k/n), k < n/2.
// Values come from std::polar on the exact angle (no recurrences), which keeps
// the transform accurate to ~1e-15 relative at the sizes used here.
const cvec& twiddles(std::size_t n) {
    thread_local std::unordered_map<std::size_t, cvec> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    cvec w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = std::polar(1.0, -kTwoPi * double(k) / double(n));
    return cache.emplace(n, std::move(w)).first->second;
}

void transform(cvec& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const cvec& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1, step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cd tw = w[k * step];
                if (inverse) tw = std::conj(tw);
                const cd u = a[i + k];
                const cd v = a[i + k + half] * tw;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / double(n);
        for (cd& v : a) v *= inv;
    }
}

}  // namespace

void fft(cvec& a) { transform(a, false); }
void ifft(cvec& a) { transform(a, true); }

cvec fft_of(const cvec& x) { cvec a = x; fft(a); return a; }
cvec fft_of(const rvec& x) { cvec a = to_cvec(x); fft(a); return a; }
cvec ifft_of(const cvec& x) { cvec a = x; ifft(a); return a; }

cvec apply_filter(const cvec& F, const rvec& h) {
    cvec a(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) a[i] = F[i] * h[i];
    ifft(a);
    return a;
}

cvec apply_filter(const cvec& F, const cvec& h) {
    cvec a(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) a[i] = F[i] * h[i];
    ifft(a);
    return a;
}

cvec modulus_filter(const cvec& F, const rvec& h) {
    cvec a = apply_filter(F, h);
    for (cd& v : a) v = cd(std::abs(v), 0.0);
    return a;
}

double filtered_energy(const cvec& F, const rvec& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) s += std::norm(F[i]) * h[i] * h[i];
    return s / double(F.size());
}

}  // namespace scatterlab
