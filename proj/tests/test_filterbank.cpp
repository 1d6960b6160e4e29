#include "test_util.hpp"

#include <cmath>

#include "scatterlab/filterbank.hpp"

using namespace scatterlab;

TEST_CASE("mother wavelet pointwise values") {
    CHECK(bl::psi_hat_sq(kTwoPi) == doctest::Approx(0.999845).epsilon(1e-4));
    CHECK(bl::psi_hat_sq(-1.0) == 0.0);
    CHECK(bl::psi_hat_sq(0.0) == 0.0);
    CHECK(bl::phi_sq(kPi) == doctest::Approx(0.999845).epsilon(1e-4));
    CHECK(bl::phi_sq(kTwoPi) == doctest::Approx(0.499922).epsilon(1e-4));
    CHECK(bl::phi_sq(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bl::rho_hat(kPi) == doctest::Approx(std::pow(2.0 / kPi, 4)).epsilon(1e-12));
    CHECK(bl::rho_hat(0.0) == 1.0);
}

TEST_CASE("phi closed form matches truncated dyadic sum") {
    for (double w : {0.3, 1.0, 2.5, 3.14, 5.0}) {
        CHECK(bl::phi_sq(w) == doctest::Approx(bl::phi_sq_sum(w)).epsilon(1e-10));
    }
}

TEST_CASE("mother peak location") {
    double arg = 0.0, peak = 0.0;
    mother_peak(&arg, &peak);
    CHECK(arg == doctest::Approx(4.272903).epsilon(1e-5));
    CHECK(peak == doctest::Approx(1.409003).epsilon(1e-5));
}

TEST_CASE("bank construction validates input") {
    CHECK_THROWS_AS(build_filter_bank(300, 5), std::invalid_argument);
    CHECK_THROWS_AS(build_filter_bank(128, 5), std::invalid_argument);
    CHECK_THROWS_AS(build_filter_bank(1024, 5, -5), std::invalid_argument);
}

TEST_CASE("bank scale layout") {
    FilterBank fb = build_filter_bank(1024, 5);
    CHECK(fb.scales == std::vector<int>{0, -1, -2, -3, -4});
    CHECK(fb.has_completion_label(0));
    CHECK_FALSE(fb.has_completion_label(-1));
    FilterBank nc = build_filter_bank(1024, 5, -1, false);
    CHECK(nc.scales == std::vector<int>{-1, -2, -3, -4});
    CHECK_THROWS_AS(fb.psi(7), std::out_of_range);
}

TEST_CASE("littlewood-paley partition of unity") {
    FilterBank fb = build_filter_bank(1024, 5);
    CHECK(littlewood_paley_deviation(fb) < 1e-10);
    FilterBank fb2 = build_filter_bank(4096, 7);
    CHECK(littlewood_paley_deviation(fb2) < 1e-10);

    FilterBank nc = build_filter_bank(1024, 5, -1, false);
    CHECK(littlewood_paley_deviation_resolved(nc) < 1e-3);
}

TEST_CASE("partition sum is exact at every positive bin including nyquist") {
    FilterBank fb = build_filter_bank(512, 4);
    const int n = fb.n;
    for (int k = 1; k <= n / 2; ++k) {
        const double bk = (k == n / 2) ? 1.0 : fb.beta;
        double s = fb.phi_hat[k] * fb.phi_hat[k];
        for (int j : fb.scales) s += bk * fb.psi(j)[k] * fb.psi(j)[k];
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("per-bin energy weight of the one-sided bank on real signals") {
    // A real input's spectrum visits interior bins twice (k and n-k) and the
    // nyquist bin once. Summing phi^2 + sum_j psi_j^2 over each bin pair must
    // give exactly 2 per pair and exactly 1 at nyquist, which is what makes
    // the scattering energy ledger exact.
    FilterBank fb = build_filter_bank(512, 4);
    const int n = fb.n;
    auto bin_weight = [&](int k) {
        double w = fb.phi_hat[k] * fb.phi_hat[k];
        for (int j : fb.scales) w += fb.psi(j)[k] * fb.psi(j)[k];
        return w;
    };
    for (int k = 1; k < n / 2; ++k) {
        CHECK(std::abs(bin_weight(k) + bin_weight(n - k) - 2.0) < 1e-12);
    }
    CHECK(std::abs(bin_weight(n / 2) - 1.0) < 1e-12);
}

TEST_CASE("filters are one-sided") {
    FilterBank fb = build_filter_bank(512, 4);
    for (int j : fb.scales) {
        const rvec& p = fb.psi(j);
        for (int k = 0; k < fb.n; ++k) {
            if (fb.omega[k] <= 0.0) CHECK(p[k] == 0.0);
        }
    }
}

TEST_CASE("scale covariance on nested grids") {
    FilterBank fb = build_filter_bank(1024, 6, -1, false);
    for (std::size_t s = 0; s + 1 < fb.scales.size(); ++s) {
        const int j = fb.scales[s];
        const rvec& fine = fb.psi(j);
        const rvec& coarse = fb.psi(j - 1);
        for (int k = 0; k < fb.n / 4; ++k) {
            CHECK(coarse[k] == fine[2 * k]);
        }
    }
}

TEST_CASE("admissibility constant") {
    FilterBank fb = build_filter_bank(1024, 5);
    AdmissibilityReport rep = admissibility_alpha(fb);
    CHECK(rep.converged);
    CHECK(rep.alpha == doctest::Approx(0.291788).epsilon(1e-4));
    CHECK(std::abs(rep.alpha - 0.2766) <= 0.02);
    CHECK(rep.alpha_arg == doctest::Approx(1.6040).epsilon(1e-3));
    CHECK(rep.domination_ok);
    CHECK(rep.domination_margin <= 1e-6);

    SUBCASE("constant rho gives the full littlewood-paley mass") {
        AdmissibilityReport flat = admissibility_alpha(fb, [](double) { return 1.0; }, fb.eta);
        CHECK(flat.alpha == doctest::Approx(4.0).epsilon(1e-6));
    }
    SUBCASE("eta = pi is inadmissible for the box spline") {
        AdmissibilityReport bad = admissibility_alpha(fb, bl::rho_hat, kPi);
        CHECK(bad.alpha < 0.0);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(admissibility_alpha(fb, bl::rho_hat, fb.eta, 10), std::invalid_argument);
        CHECK_THROWS_AS(admissibility_alpha(fb, bl::rho_hat, fb.eta, 40, 100), std::invalid_argument);
    }
}

TEST_CASE("completion filter covers the residual band") {
    FilterBank with = build_filter_bank(1024, 5);
    FilterBank without = build_filter_bank(1024, 5, -1, false);
    // Non-completion scales agree between the two banks.
    for (int j : without.scales) {
        const rvec& a = with.psi(j);
        const rvec& b = without.psi(j);
        for (int k = 0; k < 1024; ++k) CHECK(a[k] == b[k]);
    }
    // The completion filter carries mass near nyquist where psi(-1) rolls off.
    const rvec& c = with.psi(0);
    CHECK(c[512] > 0.1);
    CHECK(norm_sq(c) > 0.0);
}
