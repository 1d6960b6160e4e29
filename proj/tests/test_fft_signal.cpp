#include "test_util.hpp"

#include <cmath>

#include "scatterlab/signal.hpp"

using namespace scatterlab;

TEST_CASE("fft roundtrip and unitarity") {
    Rng rng(1);
    for (int n : {256, 1024, 4096}) {
        cvec x(n);
        for (auto& v : x) v = cd(rng.normal(), rng.normal());
        cvec F = fft_of(x);
        cvec back = ifft_of(F);
        double err = 0.0;
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(back[i] - x[i]));
        CHECK(err < 1e-12);
        CHECK(norm_sq(F) / n == doctest::Approx(norm_sq(x)).epsilon(1e-12));
    }
}

TEST_CASE("fft matches direct dft") {
    const int n = 256;
    Rng rng(2);
    cvec x(n);
    for (auto& v : x) v = cd(rng.normal(), rng.normal());
    cvec F = fft_of(x);
    for (int k = 0; k < n; k += 37) {
        cd acc = 0.0;
        for (int i = 0; i < n; ++i) acc += x[i] * std::polar(1.0, -kTwoPi * k * i / n);
        CHECK(std::abs(F[k] - acc) < 1e-9);
    }
}

TEST_CASE("fft rejects non power of two") {
    cvec x(300);
    CHECK_THROWS_AS(fft(x), std::invalid_argument);
}

TEST_CASE("filtered_energy equals spatial norm") {
    const int n = 512;
    rvec f = smooth_signal(n, 3);
    rvec h(n, 0.0);
    for (int k = 40; k < 90; ++k) h[k] = 1.0 - 0.01 * (k - 40);
    cvec F = fft_of(f);
    cvec y = apply_filter(F, h);
    CHECK(filtered_energy(F, h) == doctest::Approx(norm_sq(y) * n).epsilon(1e-12));
}

TEST_CASE("rng stream is deterministic") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
    Rng c(42);
    CHECK(c.uniform() == doctest::Approx(0.7551555329545390).epsilon(1e-15));
}

TEST_CASE("smooth_signal is unit norm, hermitian, nyquist-free") {
    const int n = 1024;
    rvec f = smooth_signal(n, 7);
    CHECK(norm_sq(f) == doctest::Approx(1.0).epsilon(1e-12));
    cvec F = fft_of(f);
    CHECK(std::abs(F[n / 2]) < 1e-12);
    rvec g = smooth_signal(n, 7);
    for (int i = 0; i < n; ++i) CHECK(f[i] == g[i]);
    CHECK(smooth_signal(n, 8)[0] != f[0]);
}

TEST_CASE("dirac and circshift") {
    rvec d = dirac(8);
    CHECK(d[0] == 1.0);
    CHECK(norm_sq(d) == 1.0);
    rvec s = circshift(d, 3);
    CHECK(s[3] == 1.0);
    CHECK(circshift(s, -3)[0] == 1.0);
}

TEST_CASE("spectral_shift exactness") {
    const int n = 512;
    rvec f = smooth_signal(n, 5);

    SUBCASE("integer shift equals circshift") {
        rvec s = spectral_shift(f, 3.0);
        rvec c = circshift(f, 3);
        double err = 0.0;
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(s[i] - c[i]));
        CHECK(err < 1e-12);
    }
    SUBCASE("shifts compose") {
        rvec a = spectral_shift(spectral_shift(f, 0.7), 0.8);
        rvec b = spectral_shift(f, 1.5);
        double err = 0.0;
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(a[i] - b[i]));
        CHECK(err < 1e-12);
    }
    SUBCASE("output stays real for signals with nyquist content") {
        rvec g = f;
        for (int i = 0; i < n; ++i) g[i] += 0.1 * ((i % 2) ? -1.0 : 1.0);
        rvec s = spectral_shift(g, 0.5);
        CHECK(norm_sq(s) > 0.0);
    }
}

TEST_CASE("catmull_rom_shift approximates spectral shift on smooth signals") {
    const int n = 1024;
    rvec f = smooth_signal(n, 9, n / 32);
    rvec a = catmull_rom_shift(f, 1.5);
    rvec b = spectral_shift(f, 1.5);
    double err = 0.0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(a[i] - b[i]));
    CHECK(err < 1e-4);

    rvec c = catmull_rom_shift(f, 2.0);
    rvec d = circshift(f, 2);
    err = 0.0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(c[i] - d[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("wrapped_grid covers (-pi, pi] with nyquist at +pi") {
    rvec w = wrapped_grid(8);
    CHECK(w[0] == 0.0);
    CHECK(w[4] == doctest::Approx(kPi));
    CHECK(w[5] == doctest::Approx(-3.0 * kPi / 4.0));
    CHECK(w[7] == doctest::Approx(-kPi / 4.0));
}
