#include "scatterlab/rotation.hpp"

#include <cmath>
#include <stdexcept>

#include "scatterlab/fft.hpp"
#include "scatterlab/filterbank.hpp"
#include "scatterlab/signal.hpp"

namespace scatterlab {

int PeriodizedFilterBank::scale_index(int j) const {
    for (std::size_t i = 0; i < scales.size(); ++i)
        if (scales[i] == j) return static_cast<int>(i);
    throw std::out_of_range("scale not in periodized bank");
}

const rvec& PeriodizedFilterBank::psi(int j) const { return psi_hat[scale_index(j)]; }

PeriodizedFilterBank periodized_filter_bank(int n, int L, bool completion) {
    if (L != 0) throw std::invalid_argument("only L = 0 rotation scattering is supported");
    if (!is_pow2(static_cast<std::size_t>(n)) || n < (1 << (L + 2)))
        throw std::invalid_argument("periodized bank: bad n");

    PeriodizedFilterBank fb;
    fb.n = n;
    fb.L = L;
    fb.completion = completion;
    fb.j_min = -3;
    fb.j_max = static_cast<int>(std::floor(std::log2(n / (8.0 * kPi))));
    if (fb.j_max < fb.j_min) throw std::invalid_argument("periodized bank: n too small");

    for (int j = fb.j_max; j >= fb.j_min; --j) {
        rvec h(n, 0.0);
        for (int k = 0; k < n; ++k) {
            const int kt = k <= n / 2 ? k : k - n;
            if (kt > 0) h[k] = std::sqrt(bl::psi_hat_sq(std::ldexp(static_cast<double>(kt), -j)));
        }
        // Self-paired Nyquist harmonic: drop the one-sided doubling there.
        h[n / 2] *= std::sqrt(0.5);
        fb.scales.push_back(j);
        fb.psi_hat.push_back(std::move(h));
    }
    if (completion) {
        rvec c(n, 0.0);
        for (int k = 0; k < n; ++k) {
            const int kt = k <= n / 2 ? k : k - n;
            if (kt <= 0) continue;
            const double bk = (k == n / 2) ? 1.0 : 0.5;
            double resid = 1.0;
            for (const rvec& h : fb.psi_hat) resid -= bk * h[k] * h[k];
            if (resid < -1e-9) throw std::runtime_error("periodized partition sum exceeds 1");
            c[k] = std::sqrt(std::max(resid, 0.0) / bk);
        }
        fb.scales.insert(fb.scales.begin(), fb.j_max + 1);
        fb.psi_hat.insert(fb.psi_hat.begin(), std::move(c));
    }
    return fb;
}

double rotation_lp_deviation(const PeriodizedFilterBank& fb) {
    double dev = 0.0;
    for (int k = 0; k < fb.n; ++k) {
        const int kt = k <= fb.n / 2 ? k : k - fb.n;
        if (kt <= 0) continue;
        const double bk = (k == fb.n / 2) ? 1.0 : 0.5;
        double s = 0.0;
        for (const rvec& h : fb.psi_hat) s += bk * h[k] * h[k];
        dev = std::max(dev, std::abs(s - 1.0));
    }
    return dev;
}

double RotationScattering::captured(int depth) const {
    if (input_norm_sq == 0.0) return 1.0;
    int last = static_cast<int>(layer_energy.size()) - 1;
    if (depth >= 0 && depth < last) last = depth;
    double s = 0.0;
    for (int m = 0; m <= last; ++m) s += layer_energy[m];
    return s / input_norm_sq;
}

RotationScattering rotation_scatter(const cvec& f, const PeriodizedFilterBank& fb, int m_max,
                                    Policy policy) {
    if (static_cast<int>(f.size()) != fb.n) throw std::invalid_argument("signal length does not match bank");
    if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");

    RotationScattering out;
    out.n = fb.n;
    out.m_max = m_max;
    out.policy = policy;
    out.layer_energy.assign(m_max + 1, 0.0);
    out.residual_energy.assign(m_max + 2, 0.0);
    out.input_norm_sq = norm_sq(f);
    out.residual_energy[0] = out.input_norm_sq;

    struct Node {
        Path p;
        cvec u;
    };
    std::vector<Node> layer;
    layer.push_back({{}, f});
    for (int m = 0; m <= m_max; ++m) {
        std::vector<Node> next;
        for (Node& node : layer) {
            cvec F = fft_of(node.u);
            const cd mean = F[0] / static_cast<double>(fb.n);
            out.layer_energy[m] += fb.n * std::norm(mean);
            double kid_e = 0.0;
            for (int j : fb.scales) {
                if (policy != Policy::All && !node.p.empty() &&
                    (policy == Policy::Dec ? j > node.p.back() : j >= node.p.back()))
                    continue;
                if (m < m_max) {
                    cvec child = modulus_filter(F, fb.psi(j));
                    kid_e += norm_sq(child);
                    Path cp = node.p;
                    cp.push_back(j);
                    next.push_back({std::move(cp), std::move(child)});
                } else {
                    kid_e += filtered_energy(F, fb.psi(j));
                }
            }
            out.residual_energy[m + 1] += kid_e;
            out.coeffs.emplace(std::move(node.p), RotationCoeff{mean, l2_norm(node.u)});
        }
        layer = std::move(next);
    }
    return out;
}

RotationScattering rotation_scatter(const rvec& f, const PeriodizedFilterBank& fb, int m_max,
                                    Policy policy) {
    return rotation_scatter(to_cvec(f), fb, m_max, policy);
}

double rotation_invariance_check(const cvec& f, const PeriodizedFilterBank& fb, int m_max,
                                 const std::vector<double>& shifts) {
    RotationScattering base = rotation_scatter(f, fb, m_max);
    double dev = 0.0;
    for (double s : shifts) {
        const long si = std::lround(s);
        const cvec g = (s == static_cast<double>(si)) ? circshift(f, si) : catmull_rom_shift(f, s);
        RotationScattering rs = rotation_scatter(g, fb, m_max);
        for (const auto& [p, c] : base.coeffs)
            dev = std::max(dev, std::abs(rs.coeffs.at(p).s_mean - c.s_mean));
    }
    return dev;
}

PoissonReport poisson_periodization_check() {
    const double dw = kTwoPi / 64.0;
    const int nw = 64 * 64;  // covers [-64*pi, 64*pi)
    rvec w(nw), spec(nw);
    for (int i = 0; i < nw; ++i) {
        w[i] = -64.0 * kPi + i * dw;
        spec[i] = std::sqrt(std::max(bl::phi_bl_sq(w[i]), 0.0));
    }
    const int xs = 64;
    double lo = 0.0, hi = 0.0, sum = 0.0;
    for (int t = 0; t < xs; ++t) {
        const double x = static_cast<double>(t) / xs;
        double v = 0.0;
        for (int m = -20; m <= 20; ++m) {
            const double y = x + m;
            double acc = 0.0;
            for (int i = 0; i < nw; ++i) acc += spec[i] * std::cos(w[i] * y);
            v += acc * dw / kTwoPi;
        }
        if (t == 0) { lo = hi = v; }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    return {hi - lo, sum / xs};
}

}  // namespace scatterlab
