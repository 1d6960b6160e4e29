#include "test_util.hpp"

#include <algorithm>
#include <cmath>

#include "scatterlab/signal.hpp"
#include "scatterlab/stability.hpp"

using namespace scatterlab;

TEST_CASE("make_deformation computes the size functionals") {
    DeformationField d = make_deformation({0.0, 1.0, 0.0, -1.0});
    CHECK(d.sup_tau == 1.0);
    CHECK(d.sup_grad == 1.0);
    CHECK(d.sup_hess == 2.0);
    CHECK(d.sup_incr == 2.0);
}

TEST_CASE("random smooth field hits the requested gradient and is reproducible") {
    Rng rng(13);
    DeformationField d = random_smooth_field(1024, 64.0, 0.05, rng);
    CHECK(d.sup_grad == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(d.sup_tau == doctest::Approx(7.892997).epsilon(1e-4));
    CHECK(d.sup_hess == doctest::Approx(0.001187).epsilon(1e-2));
}

TEST_CASE("warp is exact on constant integer fields") {
    rvec f = smooth_signal(1024, 3);
    rvec w0 = warp(f, make_deformation(rvec(1024, 0.0)));
    rvec w3 = warp(f, make_deformation(rvec(1024, 3.0)));
    rvec c3 = circshift(f, 3);
    for (int i = 0; i < 1024; ++i) {
        CHECK(w0[i] == doctest::Approx(f[i]).epsilon(1e-12));
        CHECK(w3[i] == doctest::Approx(c3[i]).epsilon(1e-12));
    }
}

TEST_CASE("warp rejects fields that fold") {
    rvec f = smooth_signal(256, 1);
    rvec tau(256);
    for (int i = 0; i < 256; ++i) tau[i] = 3.0 * std::sin(kTwoPi * i / 16.0);
    CHECK_THROWS_AS(warp(f, make_deformation(tau)), std::domain_error);
}

TEST_CASE("k_tau respects its two forms") {
    DeformationField d = make_deformation({0.0, 1.0, 0.0, -1.0});
    const double k1 = k_tau(d, 3);
    const double k2 = k_tau(d, 3, true);
    CHECK(k1 - k2 == doctest::Approx(std::ldexp(d.sup_tau, -3) -
                                     std::ldexp(d.sup_tau * d.sup_tau, -6)).epsilon(1e-12));
    CHECK(k_tau(make_deformation(rvec(8, 0.0)), 3) == 0.0);
    CHECK(k_tau(d, 5) < k_tau(d, 3));
}

TEST_CASE("translation decay across bank scales") {
    std::vector<FilterBank> banks;
    for (int J = 3; J <= 7; ++J) banks.push_back(build_filter_bank(1024, J));
    rvec f = smooth_signal(1024, 7);
    TranslationDecay td = translation_decay(f, banks, 1.5, 3);
    REQUIRE(td.points.size() == 5);
    CHECK(td.slope == doctest::Approx(-1.217203).epsilon(1e-4));
    CHECK(td.slope > -1.4);
    CHECK(td.slope < -0.6);
    for (std::size_t i = 0; i + 1 < td.points.size(); ++i)
        CHECK(td.points[i + 1].value < td.points[i].value);
}

TEST_CASE("integer shifts are covariant on the grid") {
    std::vector<FilterBank> one;
    one.push_back(build_filter_bank(1024, 5));
    TranslationDecay cov = translation_decay(smooth_signal(1024, 7), one, 2.0, 3,
                                             Policy::All, true);
    CHECK(cov.points[0].value <= 1e-10);
    CHECK_THROWS_AS(translation_decay(smooth_signal(1024, 7), one, 1.5, 3,
                                      Policy::All, true),
                    std::invalid_argument);
}

TEST_CASE("gabor benchmark separates fourier from scattering sensitivity") {
    FilterBank fb = build_filter_bank(1024, 5);

    SUBCASE("frozen high-frequency pair") {
        GaborReport r = gabor_benchmark(19.0, -0.1, fb);
        CHECK(r.fourier_C == doctest::Approx(10.3363).epsilon(1e-3));
        CHECK(r.scatter_C == doctest::Approx(1.4190).epsilon(1e-3));
        CHECK(r.scatter_C / r.fourier_C <= 0.25);
        CHECK(r.fourier_C / r.scatter_C >= 4.0);
    }
    SUBCASE("fourier constant tracks the carrier, scattering does not") {
        GaborReport lo = gabor_benchmark(4.0, -0.1, fb);
        GaborReport hi = gabor_benchmark(8.0, -0.1, fb);
        const double fr = hi.fourier_C / lo.fourier_C;
        const double sr = hi.scatter_C / lo.scatter_C;
        CHECK(fr >= 1.4);
        CHECK(fr <= 2.6);
        CHECK(sr >= 0.5);
        CHECK(sr <= 1.5);
    }
    SUBCASE("degenerate and aliasing inputs") {
        GaborReport z = gabor_benchmark(19.0, 0.0, fb);
        CHECK(z.fourier_C == 0.0);
        CHECK(z.scatter_C == 0.0);
        CHECK_THROWS_AS(gabor_benchmark(90.0, -0.1, fb), std::domain_error);
    }
}

TEST_CASE("first-order taylor residual of the shift") {
    FilterBank fb = build_filter_bank(1024, 6);
    for (std::uint64_t seed : {400, 401, 402}) {
        rvec f = smooth_signal(1024, seed, 32);
        TaylorResidual half = first_order_residual(f, 0.5, fb);
        TaylorResidual quarter = first_order_residual(f, 0.25, fb);
        CHECK(half.second / half.first <= 0.2);
        CHECK(quarter.second / half.second == doctest::Approx(0.25).epsilon(0.3));
        CHECK(quarter.first / half.first == doctest::Approx(0.5).epsilon(0.1));
    }
}

TEST_CASE("scattering gradient") {
    FilterBank fb = build_filter_bank(1024, 5);
    rvec f = smooth_signal(1024, 4);

    SUBCASE("coefficient derivatives are mean free") {
        auto grad = scattering_gradient(scatter(f, fb, 2));
        CHECK(grad.size() == 31);
        for (const auto& [p, gp] : grad) {
            cd s(0.0, 0.0);
            for (const cd& z : gp) s += z;
            CHECK(std::abs(s) < 1e-12);
        }
    }
    SUBCASE("critically sampled outputs are rejected") {
        ScatteringOutput crit = scatter(f, fb, 2, Policy::All, Oversampling::Critical);
        CHECK_THROWS_AS(scattering_gradient(crit), std::invalid_argument);
    }
}

TEST_CASE("lipschitz ratios stay in a narrow family band") {
    FilterBank fb = build_filter_bank(1024, 6);
    rvec f = smooth_signal(1024, 7, 32);
    rvec ratios;
    for (int i = 0; i < 10; ++i) {
        const double amp = 0.01 * std::pow(30.0, i / 9.0);
        Rng rng(1007 + i);
        DeformationField field = random_smooth_field(1024, 64.0, amp, rng);
        ratios.push_back(lipschitz_ratio(f, field, fb, 3));
    }
    std::sort(ratios.begin(), ratios.end());
    CHECK(ratios.back() < 0.5);
    CHECK(ratios.back() / ratios[ratios.size() / 2] <= 10.0);
}

TEST_CASE("scattering distance dominates the norm change under dilation") {
    const int n = 1024;
    FilterBank fb = build_filter_bank(n, 6);
    rvec f(n);
    for (int k = 0; k < n; ++k) {
        const double x = (k - 512) / 32.0;
        f[k] = std::exp(-0.5 * x * x) * std::cos(3.0 * x);
    }
    const double s = 0.05;
    rvec tau(n);
    for (int k = 0; k < n; ++k)
        tau[k] = s * (n / kTwoPi) * std::sin(kTwoPi * (k - 512) / n);
    rvec g = warp(f, make_deformation(tau));

    const double dnorm = std::abs(l2_norm(g) - l2_norm(f));
    CHECK(dnorm == doctest::Approx(0.5 * s * l2_norm(f)).epsilon(0.1));
    const double d = scattering_distance(scatter(f, fb, 2), scatter(g, fb, 2));
    CHECK(d >= dnorm);
    CHECK(d == doctest::Approx(0.526422).epsilon(1e-3));
}

TEST_CASE("displacement estimation recovers shifts and smooth fields") {
    FilterBank fb = build_filter_bank(1024, 6);
    rvec f = smooth_signal(1024, 12);

    SUBCASE("identical inputs give a zero field") {
        DisplacementEstimate est = estimate_displacement(f, f, fb);
        for (int k = 0; k < 1024; ++k)
            if (est.valid[k]) CHECK(std::abs(est.tau_hat[k]) < 1e-8);
    }
    SUBCASE("global shift by two samples") {
        DisplacementEstimate est = estimate_displacement(f, circshift(f, 2), fb);
        rvec vals;
        for (int k = 0; k < 1024; ++k)
            if (est.valid[k]) vals.push_back(est.tau_hat[k]);
        REQUIRE(!vals.empty());
        std::sort(vals.begin(), vals.end());
        CHECK(vals[vals.size() / 2] == doctest::Approx(2.0).epsilon(0.15));
    }
    SUBCASE("smooth synthetic field, well-conditioned samples") {
        Rng rng(13);
        DeformationField field = random_smooth_field(1024, 64.0, 0.05, rng);
        rvec g = warp(f, field);
        DisplacementEstimate est = estimate_displacement(f, g, fb);

        auto grad = scattering_gradient(scatter(f, fb, 2, Policy::All));
        rvec den(1024, 0.0);
        for (const auto& [p, gp] : grad)
            for (int i = 0; i < 1024; ++i) den[i] += gp[i].real() * gp[i].real();
        rvec sorted = den;
        std::sort(sorted.begin(), sorted.end());
        const double pct20 = sorted[1024 / 5];

        double num = 0.0, denom = 0.0;
        int used = 0;
        for (int i = 0; i < 1024; ++i) {
            if (!est.valid[i] || den[i] < pct20) continue;
            num += (est.tau_hat[i] - field.tau[i]) * (est.tau_hat[i] - field.tau[i]);
            denom += field.tau[i] * field.tau[i];
            ++used;
        }
        CHECK(used > 700);
        CHECK(std::sqrt(num / denom) <= 0.25);
    }
    SUBCASE("featureless input is fully masked") {
        rvec flat(1024, 0.0);
        CHECK_THROWS_AS(estimate_displacement(flat, flat, fb), std::runtime_error);
    }
}
