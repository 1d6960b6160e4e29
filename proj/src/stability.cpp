#include "scatterlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scatterlab/fft.hpp"
#include "scatterlab/signal.hpp"

namespace scatterlab {

DeformationField make_deformation(rvec tau) {
    const long n = static_cast<long>(tau.size());
    DeformationField d;
    double lo = tau.empty() ? 0.0 : tau[0], hi = lo;
    for (long i = 0; i < n; ++i) {
        const double tp = tau[(i + 1) % n], tm = tau[(i - 1 + n) % n];
        d.sup_tau = std::max(d.sup_tau, std::abs(tau[i]));
        d.sup_grad = std::max(d.sup_grad, std::abs(0.5 * (tp - tm)));
        d.sup_hess = std::max(d.sup_hess, std::abs(tp - 2.0 * tau[i] + tm));
        lo = std::min(lo, tau[i]);
        hi = std::max(hi, tau[i]);
    }
    d.sup_incr = hi - lo;
    d.tau = std::move(tau);
    return d;
}

DeformationField random_smooth_field(int n, double ell, double amp, Rng& rng) {
    cvec W = fft_of(rng.normals(n));
    for (int k = 0; k < n; ++k) {
        const double kt = k <= n / 2 ? k : k - n;
        W[k] *= std::exp(-(kt * ell / n) * (kt * ell / n) * 2.0 * kPi * kPi);
    }
    ifft(W);
    DeformationField d = make_deformation(real_part(W));
    if (d.sup_grad == 0.0) throw std::runtime_error("degenerate deformation draw");
    const double s = amp / d.sup_grad;
    for (double& v : d.tau) v *= s;
    return make_deformation(std::move(d.tau));
}

rvec warp(const rvec& f, const DeformationField& tau) {
    if (f.size() != tau.tau.size()) throw std::invalid_argument("field grid does not match signal");
    if (tau.sup_grad >= 1.0) throw std::domain_error("warp needs sup|grad tau| < 1");
    return warp_samples(f, tau.tau);
}

double k_tau(const DeformationField& tau, int J, bool second_order) {
    const double lead = second_order ? std::ldexp(tau.sup_tau * tau.sup_tau, -2 * J)
                                     : std::ldexp(tau.sup_tau, -J);
    double grad_term = 0.0;
    if (tau.sup_grad > 0.0)
        grad_term = tau.sup_grad * std::max(std::log(tau.sup_incr / tau.sup_grad), 1.0);
    return lead + grad_term + tau.sup_hess;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TranslationDecay translation_decay(const rvec& f, const std::vector<FilterBank>& banks,
                                   double c, int m_max, Policy policy, bool covariance_check) {
    const double fn = l2_norm(f);
    long ci = std::lround(c);
    if (covariance_check && c != static_cast<double>(ci))
        throw std::invalid_argument("covariance check needs an integer shift");

    TranslationDecay out;
    std::vector<double> xs, ys;
    for (const FilterBank& fb : banks) {
        ScatteringOutput sf = scatter(f, fb, m_max, policy);
        double d;
        if (covariance_check) {
            ScatteringOutput sg = scatter(circshift(f, ci), fb, m_max, policy);
            ScatteringOutput shifted = sf;
            for (auto& [p, pd] : shifted.coeffs) pd.s_signal = circshift(pd.s_signal, ci);
            d = scattering_distance(sg, shifted);
        } else {
            d = scattering_distance(scatter(catmull_rom_shift(f, c), fb, m_max, policy), sf);
        }
        const double v = fn > 0.0 ? d / fn : 0.0;
        out.points.push_back({fb.J, v});
        if (v > 0.0) {
            xs.push_back(fb.J);
            ys.push_back(std::log2(v));
        }
    }
    out.slope = fit_slope(xs, ys);
    return out;
}

double lipschitz_ratio(const rvec& f, const DeformationField& tau, const FilterBank& fb,
                       int m_max, Policy policy) {
    if (tau.sup_grad > 0.5) throw std::domain_error("lipschitz ratio needs sup|grad tau| <= 1/2");
    const double K = k_tau(tau, fb.J, false);
    if (K == 0.0) throw std::invalid_argument("K(tau) vanishes");
    const double d =
        scattering_distance(scatter(warp(f, tau), fb, m_max, policy), scatter(f, fb, m_max, policy));
    return d / (m_max * l2_norm(f) * K);
}

GaborReport gabor_benchmark(double xi, double s, const FilterBank& fb) {
    GaborReport r;
    if (s == 0.0) return r;
    if (std::abs(s) >= 1.0) throw std::invalid_argument("gabor benchmark needs |s| < 1");
    const double step = 1.0 / 32.0;
    if (xi * (1.0 + std::abs(s)) * step >= 0.95 * kPi)
        throw std::domain_error("gabor carrier too close to the Nyquist frequency");

    const int n = fb.n;
    cvec f2(n), f3(n);
    for (int k = 0; k < n; ++k) {
        const double x = (k - n / 2) * step;
        const double xs = (1.0 - s) * x;
        f2[k] = std::polar(std::exp(-0.5 * x * x), xi * x);
        f3[k] = std::polar(std::exp(-0.5 * xs * xs), xi * xs);
    }
    const double den = std::abs(s) * l2_norm(f2);

    cvec F2 = fft_of(f2), F3 = fft_of(f3);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double d = std::abs(F2[k]) - std::abs(F3[k]);
        acc += d * d;
    }
    r.fourier_C = std::sqrt(acc / n) / den;
    r.scatter_C =
        scattering_distance(scatter(f2, fb, 2, Policy::Dec), scatter(f3, fb, 2, Policy::Dec)) / den;
    return r;
}

std::map<Path, cvec> scattering_gradient(const ScatteringOutput& out) {
    if (out.oversampling != Oversampling::Full)
        throw std::invalid_argument("gradient needs full-resolution coefficients");
    const rvec w = wrapped_grid(out.n);
    std::map<Path, cvec> g;
    for (const auto& [p, pd] : out.coeffs) {
        cvec G = fft_of(pd.s_signal);
        for (int k = 0; k < out.n; ++k) G[k] *= cd(0.0, k == out.n / 2 ? 0.0 : w[k]);
        ifft(G);
        g.emplace(p, std::move(G));
    }
    return g;
}

TaylorResidual first_order_residual(const rvec& f, double c, const FilterBank& fb, int m_max) {
    ScatteringOutput sf = scatter(f, fb, m_max, Policy::All);
    ScatteringOutput sg = scatter(spectral_shift(f, c), fb, m_max, Policy::All);
    std::map<Path, cvec> grad = scattering_gradient(sf);
    double acc1 = 0.0, acc2 = 0.0;
    for (const auto& [p, pf] : sf.coeffs) {
        const cvec& sgp = sg.coeffs.at(p).s_signal;
        const cvec& gp = grad.at(p);
        for (int i = 0; i < fb.n; ++i) {
            const cd d = sgp[i] - pf.s_signal[i];
            acc1 += std::norm(d);
            acc2 += std::norm(d + c * gp[i]);
        }
    }
    return {std::sqrt(acc1), std::sqrt(acc2)};
}

DisplacementEstimate estimate_displacement(const rvec& f, const rvec& g,
                                           const FilterBank& fb, int m_max) {
    ScatteringOutput sf = scatter(f, fb, m_max, Policy::All);
    ScatteringOutput sg = scatter(g, fb, m_max, Policy::All);
    std::map<Path, cvec> grad = scattering_gradient(sf);

    const int n = fb.n;
    rvec num(n, 0.0), den(n, 0.0);
    for (const auto& [p, pf] : sf.coeffs) {
        const cvec& sgp = sg.coeffs.at(p).s_signal;
        const cvec& gp = grad.at(p);
        for (int i = 0; i < n; ++i) {
            const double d = pf.s_signal[i].real() - sgp[i].real();
            const double dg = gp[i].real();
            num[i] += d * dg;
            den[i] += dg * dg;
        }
    }
    DisplacementEstimate est;
    est.tau_hat.assign(n, 0.0);
    est.valid.assign(n, 0);
    bool any = false;
    for (int i = 0; i < n; ++i) {
        if (den[i] < 1e-12) continue;
        est.tau_hat[i] = num[i] / den[i];
        est.valid[i] = 1;
        any = true;
    }
    if (!any) throw std::runtime_error("displacement system degenerate at every sample");
    return est;
}

}  // namespace scatterlab
