#include "scatterlab/filterbank.hpp"

#include <algorithm>
#include <stdexcept>

namespace scatterlab {
namespace bl {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

namespace {
inline double ipow8(double x) {
    const double x2 = x * x, x4 = x2 * x2;
    return x4 * x4;
}
}  // namespace

double s8_reg(double u, double* wrapped) {
    const double d = u - kTwoPi * std::round(u / kTwoPi);
    if (wrapped) *wrapped = d;
    double acc = 0.0;
    for (int k = 1; k <= 64; ++k) {
        acc += 1.0 / ipow8(d + kTwoPi * k) + 1.0 / ipow8(d - kTwoPi * k);
    }
    return acc;
}

// Q(u) = sin^8(u/2) * sum_k (u + 2*pi*k)^-8. The k matching the wrap of u is
// pulled out as 2^-8 sinc^8(d/2), which removes the 0/0 cancellation near the
// multiples of 2*pi; the rest of the sum is regular there.
double q(double u) {
    double d = 0.0;
    const double reg = s8_reg(u, &d);
    const double s = std::sin(d / 2), sc = sinc(d / 2);
    return ipow8(sc) / 256.0 + ipow8(s) * reg;
}

double psi_tilde_sq(double u) {
    const double a = sinc(u / 4), b = std::sin(u / 4);
    return ipow8(a) / 256.0 * ipow8(b) * q(u / 2 + kPi) / (q(u) * q(u / 2));
}

double psi_hat_sq(double w) { return w > 0.0 ? 2.0 * psi_tilde_sq(w) : 0.0; }

double phi_bl_sq(double w) { return ipow8(sinc(w / 2)) / 256.0 / q(w); }

double phi_sq(double w) {
    w = std::abs(w);
    return phi_bl_sq(w) + psi_tilde_sq(w);
}

double phi_sq_sum(double w, int j_min) {
    w = std::abs(w);
    if (w == 0.0) return 1.0;
    double acc = 0.0;
    for (int j = 0; j >= j_min; --j) acc += psi_tilde_sq(std::ldexp(w, -j));
    return acc;
}

double rho_hat(double u) {
    const double s = sinc(u / 2);
    return s * s * s * s;
}

}  // namespace bl

int FilterBank::scale_index(int j) const {
    for (std::size_t i = 0; i < scales.size(); ++i)
        if (scales[i] == j) return int(i);
    throw std::out_of_range("FilterBank: unknown scale label");
}

const rvec& FilterBank::psi(int j) const { return psi_hat[scale_index(j)]; }

FilterBank build_filter_bank(int n, int J, int j_max, bool completion) {
    if (!is_pow2(n) || n < 256) throw std::invalid_argument("build_filter_bank: n must be a power of two >= 256");
    if (j_max <= -J) throw std::invalid_argument("build_filter_bank: empty scale range (need -J < j_max)");
    FilterBank fb;
    fb.n = n;
    fb.J = J;
    fb.completion = completion;
    fb.omega.resize(n);
    for (int k = 0; k < n; ++k) {
        double w = kTwoPi * double(k) / double(n);
        if (w > kPi) w -= kTwoPi;
        fb.omega[k] = w;
    }
    for (int j = j_max; j > -J; --j) fb.scales.push_back(j);
    for (int j : fb.scales) {
        rvec p(n);
        for (int k = 0; k < n; ++k) p[k] = std::sqrt(bl::psi_hat_sq(std::ldexp(fb.omega[k], -j)));
        // The Nyquist bin pairs with itself, so the one-sided doubling that
        // makes the real-input energy ledger exact must not apply there.
        p[n / 2] *= std::sqrt(0.5);
        fb.psi_hat.push_back(std::move(p));
    }
    fb.phi_hat.resize(n);
    for (int k = 0; k < n; ++k)
        fb.phi_hat[k] = std::sqrt(bl::phi_sq(std::ldexp(std::abs(fb.omega[k]), J)));
    fb.phi_hat[0] = 1.0;

    if (completion) {
        rvec c(n, 0.0);
        for (int k = 0; k < n; ++k) {
            if (fb.omega[k] <= 0.0) continue;
            const double bk = (k == n / 2) ? 1.0 : fb.beta;
            double s = fb.phi_hat[k] * fb.phi_hat[k];
            for (const rvec& p : fb.psi_hat) s += bk * p[k] * p[k];
            const double resid = 1.0 - s;
            if (resid < -1e-8) throw std::runtime_error("build_filter_bank: partition sum exceeds 1, completion impossible");
            c[k] = std::sqrt(std::max(resid, 0.0) / bk);
        }
        fb.scales.insert(fb.scales.begin(), j_max + 1);
        fb.psi_hat.insert(fb.psi_hat.begin(), std::move(c));
    }
    return fb;
}

rvec build_battle_lemarie_mother(int n_samples) {
    if (!is_pow2(n_samples) || n_samples < 256)
        throw std::invalid_argument("build_battle_lemarie_mother: grid must be a power of two >= 256");
    rvec m(n_samples);
    for (int k = 0; k < n_samples; ++k)
        m[k] = std::sqrt(bl::psi_hat_sq(kTwoPi * double(k) / double(n_samples)));
    return m;
}

void mother_peak(double* arg_max, double* peak_value) {
    // |psi_hat| is unimodal on [4, 4.6]; golden-section search.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 4.0, b = 4.6;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = bl::psi_hat_sq(c), fd = bl::psi_hat_sq(d);
    for (int it = 0; it < 200; ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = bl::psi_hat_sq(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = bl::psi_hat_sq(d);
        }
    }
    const double x = (a + b) / 2;
    if (arg_max) *arg_max = x;
    if (peak_value) *peak_value = std::sqrt(bl::psi_hat_sq(x));
}

namespace {
double lp_deviation_on(const FilterBank& fb, double w_lo, double w_hi) {
    double dev = 0.0;
    for (int k = 1; k <= fb.n / 2; ++k) {
        const double w = fb.omega[k];
        if (w < w_lo || w > w_hi) continue;
        const double bk = (k == fb.n / 2) ? 1.0 : fb.beta;
        double s = fb.phi_hat[k] * fb.phi_hat[k];
        for (const rvec& p : fb.psi_hat) s += bk * p[k] * p[k];
        dev = std::max(dev, std::abs(s - 1.0));
    }
    return dev;
}
}  // namespace

double littlewood_paley_deviation(const FilterBank& fb) {
    return lp_deviation_on(fb, 0.0, kPi);
}

double littlewood_paley_deviation_resolved(const FilterBank& fb) {
    return lp_deviation_on(fb, std::ldexp(kPi, 2 - fb.J), kPi / 2);
}

rvec box_spline_rho(int n_samples) {
    rvec r(n_samples);
    for (int k = 0; k < n_samples; ++k) r[k] = bl::rho_hat(kTwoPi * double(k) / double(n_samples));
    return r;
}

AdmissibilityReport admissibility_alpha(const FilterBank& fb,
                                        const std::function<double(double)>& rho_hat,
                                        double eta, int k_max, int probe_pts) {
    if (k_max < 20) throw std::invalid_argument("admissibility_alpha: k_max >= 20 required");
    if (probe_pts < 1000) throw std::invalid_argument("admissibility_alpha: probe grid too coarse");
    (void)fb;  // the infimum is dilation-invariant, so the analytic mother is probed directly

    auto Psi = [&](double w) {
        const double u = w - eta;
        const double r0 = rho_hat(u);
        double acc = r0 * r0;
        for (int k = 1; k <= k_max; ++k) {
            const double rk = rho_hat(std::ldexp(u, -k));
            acc -= double(k) * (1.0 - rk * rk);
        }
        return acc;
    };

    AdmissibilityReport rep;
    rep.grid_step = 1.0 / double(probe_pts);

    // k-tail convergence: the largest argument fed to Psi is 2^14 * 2.
    {
        const double u_max = std::ldexp(2.0, 14);
        const double rk = rho_hat(std::ldexp(u_max, -k_max));
        if (double(k_max) * (1.0 - rk * rk) > 1e-8) rep.converged = false;
    }

    double best = 0.0, best_w = 0.0;
    bool first = true;
    for (int i = 0; i < probe_pts; ++i) {
        const double w = 1.0 + double(i) / double(probe_pts);
        double total = 0.0;
        for (int j = -14; j <= 14; ++j) {
            const double arg = std::ldexp(w, -j);
            // amplitude-2 analytic mother: |psi_hat|^2 = 4 * psi_tilde_sq
            const double p2 = 2.0 * bl::psi_hat_sq(arg);
            if (p2 > 1e-18) total += Psi(arg) * p2;
        }
        if (first || total < best) {
            best = total;
            best_w = w;
            first = false;
        }
    }
    rep.alpha = best;
    rep.alpha_arg = best_w;

    double margin = -1e300;
    for (int i = 1; i <= 20000; ++i) {
        const double w = kPi * double(i) / 20000.0;
        margin = std::max(margin, std::abs(rho_hat(w)) - std::sqrt(bl::phi_sq(2.0 * w)));
    }
    rep.domination_margin = margin;
    rep.domination_ok = margin <= 1e-6;
    return rep;
}

AdmissibilityReport admissibility_alpha(const FilterBank& fb) {
    return admissibility_alpha(fb, [](double u) { return bl::rho_hat(u); }, fb.eta, 40, 4096);
}

}  // namespace scatterlab
