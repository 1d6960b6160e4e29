#include "scatterlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scatterlab/fft.hpp"

namespace scatterlab {

ProcessModel gaussian_white(double sigma) {
    ProcessModel m;
    m.kind = ProcessModel::Kind::GaussianWhite;
    m.sigma = sigma;
    return m;
}

ProcessModel moving_average_gaussian() {
    ProcessModel m;
    m.kind = ProcessModel::Kind::MovingAverageGaussian;
    m.kernel.resize(16);
    const double w = 16.0 / 5.0;
    for (int i = 0; i < 16; ++i) {
        const double k = i - 7.5;
        m.kernel[i] = std::exp(-k * k / (2.0 * w * w));
    }
    const double nrm = l2_norm(m.kernel);
    for (double& v : m.kernel) v /= nrm;  // unit output variance from white input
    return m;
}

ProcessModel bernoulli(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("bernoulli parameter must be in (0,1)");
    ProcessModel m;
    m.kind = ProcessModel::Kind::Bernoulli;
    m.p = p;
    return m;
}

ProcessModel deformed(ProcessModel base, double tau_amp, double tau_ell) {
    ProcessModel m;
    m.kind = ProcessModel::Kind::Deformed;
    m.base = std::make_shared<ProcessModel>(std::move(base));
    m.tau_amp = tau_amp;
    m.tau_ell = tau_ell;
    return m;
}

rvec sample_with(const ProcessModel& model, int n, Rng& rng) {
    switch (model.kind) {
        case ProcessModel::Kind::GaussianWhite: {
            rvec x = rng.normals(n);
            for (double& v : x) v *= model.sigma;
            return x;
        }
        case ProcessModel::Kind::MovingAverageGaussian: {
            rvec w = rng.normals(n);
            rvec kpad(n, 0.0);
            for (std::size_t i = 0; i < model.kernel.size(); ++i) kpad[i] = model.kernel[i];
            cvec prod = fft_of(w);
            const cvec K = fft_of(kpad);
            for (int k = 0; k < n; ++k) prod[k] *= K[k];
            ifft(prod);
            return real_part(prod);
        }
        case ProcessModel::Kind::Bernoulli: {
            const double p = model.p, s = std::sqrt(p * (1.0 - p));
            rvec x(n);
            for (double& v : x) v = ((rng.uniform() < p ? 1.0 : 0.0) - p) / s;
            return x;
        }
        case ProcessModel::Kind::Deformed: {
            rvec x = sample_with(*model.base, n, rng);
            DeformationField tau = random_smooth_field(n, model.tau_ell, model.tau_amp, rng);
            return warp(x, tau);
        }
    }
    throw std::logic_error("unreachable");
}

rvec sample(const ProcessModel& model, int n, std::uint64_t seed) {
    if (!is_pow2(static_cast<std::size_t>(n))) throw std::invalid_argument("n must be a power of two");
    Rng rng(seed);
    return sample_with(model, n, rng);
}

namespace {

double spatial_mean_re(const cvec& s) {
    double acc = 0.0;
    for (const cd& v : s) acc += v.real();
    return acc / static_cast<double>(s.size());
}

// Window-averaged coefficients of one realization, keyed by path.
std::map<Path, double> window_means(const rvec& x, const FilterBank& fb, int m_max, Policy policy) {
    ScatteringOutput out = scatter(x, fb, m_max, policy);
    std::map<Path, double> m;
    for (const auto& [p, pd] : out.coeffs) m.emplace(p, spatial_mean_re(pd.s_signal));
    return m;
}

}  // namespace

ScatteringSpectrumEstimate expected_scattering(const ProcessModel& model, const FilterBank& fb,
                                               int m_max, int realizations, std::uint64_t seed,
                                               Policy policy) {
    if (realizations < 1) throw std::invalid_argument("need at least one realization");
    ScatteringSpectrumEstimate est;
    est.J = fb.J;
    est.m_max = m_max;
    est.n = fb.n;
    est.realizations = realizations;
    est.seed = seed;
    est.policy = policy;

    std::vector<std::map<Path, double>> slots(realizations);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < realizations; ++r)
        slots[r] = window_means(sample(model, fb.n, seed + r), fb, m_max, policy);

    for (const auto& [p, v] : slots[0]) {
        SpectrumRecord rec;
        rec.count = realizations;
        est.records.emplace(p, rec);
    }
    for (int r = 0; r < realizations; ++r)
        for (const auto& [p, v] : slots[r]) est.records.at(p).mean += v;
    for (auto& [p, rec] : est.records) rec.mean /= realizations;
    if (realizations > 1) {
        for (int r = 0; r < realizations; ++r)
            for (const auto& [p, v] : slots[r]) {
                const double d = v - est.records.at(p).mean;
                est.records.at(p).variance += d * d;
            }
        for (auto& [p, rec] : est.records) rec.variance /= (realizations - 1);
    }
    return est;
}

ConsistencyCurve consistency_curve(const ProcessModel& model, const std::vector<FilterBank>& banks,
                                   int m_max, int realizations, std::uint64_t seed) {
    if (realizations < 1) throw std::invalid_argument("need at least one realization");
    ConsistencyCurve curve;
    std::vector<double> xs, ys;
    for (const FilterBank& fb : banks) {
        const int R_o = 4 * realizations;
        std::vector<std::map<Path, double>> omeans(R_o);
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < R_o; ++r)
            omeans[r] = window_means(sample(model, fb.n, seed + 1000000 + r), fb, m_max, Policy::Dec);
        std::map<Path, double> sbar = omeans[0];
        for (auto& [p, v] : sbar) v = 0.0;
        for (int r = 0; r < R_o; ++r)
            for (const auto& [p, v] : omeans[r]) sbar.at(p) += v;
        for (auto& [p, v] : sbar) v /= R_o;

        rvec errs(realizations, 0.0);
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < realizations; ++r) {
            ScatteringOutput out =
                scatter(sample(model, fb.n, seed + r), fb, m_max, Policy::Dec);
            double e = 0.0;
            for (const auto& [p, pd] : out.coeffs) {
                const double ref = sbar.at(p);
                double acc = 0.0;
                for (const cd& v : pd.s_signal) {
                    const double d = v.real() - ref;
                    acc += d * d;
                }
                e += acc / fb.n;
            }
            errs[r] = e;
        }
        double mean_err = 0.0;
        for (double e : errs) mean_err += e;
        mean_err /= realizations;
        const double v = std::log2(mean_err);
        curve.points.push_back({fb.J, v});
        xs.push_back(fb.J);
        ys.push_back(v);
    }
    curve.slope = fit_slope(xs, ys);
    return curve;
}

std::vector<CurveRecord> power_spectrum_curve(const rvec& x, const FilterBank& fb,
                                              const PathMeasureTable& table, int m_max) {
    if (m_max > table.m_max) throw std::invalid_argument("curve depth exceeds table depth");
    std::map<Path, double> means = window_means(x, fb, m_max, Policy::Dec);
    std::vector<CurveRecord> recs;
    for (const auto& [p, v] : means) {
        if (p.empty()) continue;
        const PathMeasureEntry& e = table.at(p);
        if (!e.has_interval) throw std::logic_error("q map not built");
        // Truncation stub: the parent interval minus its children, which is
        // where the neighborhood C_J(p) lives on the q axis.
        double stub_right = e.b;
        for (int j : table.scales) {
            Path c = p;
            c.push_back(j);
            auto it = table.entries.find(c);
            if (it != table.entries.end() && it->second.has_interval)
                stub_right = std::min(stub_right, it->second.a);
        }
        CurveRecord r;
        r.omega_start = e.a;
        r.omega_end = stub_right;
        r.value = v * v / std::max(e.mu_J, 1e-30);
        r.path = p;
        r.length = static_cast<int>(p.size());
        recs.push_back(std::move(r));
    }
    std::sort(recs.begin(), recs.end(), [](const CurveRecord& a, const CurveRecord& b) {
        if (a.omega_start != b.omega_start) return a.omega_start < b.omega_start;
        if (a.length != b.length) return a.length < b.length;
        return a.path < b.path;
    });
    return recs;
}

double random_deformation_ratio(const ProcessModel& model, double tau_amp, double tau_ell,
                                const FilterBank& fb, int m_max, int realizations,
                                std::uint64_t seed) {
    if (realizations < 1) throw std::invalid_argument("need at least one realization");
    double num = 0.0, ex2 = 0.0, ksum = 0.0;
    int accepted = 0, attempts = 0;
    const int max_attempts = 2 * realizations;
    std::uint64_t s = seed;
    while (accepted < realizations && attempts < max_attempts) {
        Rng rng(s++);
        ++attempts;
        rvec x = sample_with(model, fb.n, rng);
        DeformationField tau = random_smooth_field(fb.n, tau_ell, tau_amp, rng);
        if (tau.sup_grad > 0.5) continue;
        ScatteringOutput sx = scatter(x, fb, m_max, Policy::Dec);
        ScatteringOutput sy = scatter(warp(x, tau), fb, m_max, Policy::Dec);
        double acc = 0.0;
        for (const auto& [p, pd] : sx.coeffs) acc += dist_sq(sy.coeffs.at(p).s_signal, pd.s_signal);
        num += acc / fb.n;
        ex2 += norm_sq(x) / fb.n;
        const double K = k_tau(tau, fb.J, false);
        ksum += K * K;
        ++accepted;
    }
    if (accepted < realizations) throw std::runtime_error("deformation rejection rate above 50%");
    const double den = (m_max + 1) * (ex2 / accepted) * (ksum / accepted);
    if (den == 0.0) throw std::invalid_argument("degenerate deformation family");
    return (num / accepted) / den;
}

}  // namespace scatterlab
