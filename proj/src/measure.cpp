#include "scatterlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scatterlab/fft.hpp"
#include "scatterlab/signal.hpp"

namespace scatterlab {

const PathMeasureEntry& PathMeasureTable::at(const Path& p) const {
    auto it = entries.find(p);
    if (it == entries.end()) throw std::out_of_range("path not in table: " + path_to_string(p));
    return it->second;
}

Path PathMeasureTable::path_at(double omega) const {
    Path cur;
    for (int depth = 1; depth <= m_max; ++depth) {
        bool found = false;
        for (int j : scales) {
            Path c = cur;
            c.push_back(j);
            auto it = entries.find(c);
            if (it == entries.end() || !it->second.has_interval) continue;
            if (omega >= it->second.a && omega < it->second.b) {
                cur = std::move(c);
                found = true;
                break;
            }
        }
        if (!found) break;  // deficit stub or outside every level-1 interval
    }
    return cur;
}

PathMeasureTable dirac_measures(const FilterBank& fb, int m_max) {
    if (m_max > 4) throw std::invalid_argument("dirac table limited to m_max <= 4");
    ScatteringOutput out = scatter(dirac(fb.n), fb, m_max, Policy::All);
    PathMeasureTable t;
    t.J = fb.J;
    t.m_max = m_max;
    t.psi_norm_sq = fb.psi_norm_sq;
    t.scales = fb.scales;
    for (const auto& [p, pd] : out.coeffs) {
        PathMeasureEntry e;
        e.mu = pd.u_norm * pd.u_norm;
        e.mu_J = pd.s_norm * pd.s_norm;
        t.entries.emplace(p, e);
    }
    return t;
}

void build_q_map(PathMeasureTable& t) {
    for (auto& [p, e] : t.entries) {
        if (p.size() != 1) continue;
        e.a = std::ldexp(t.psi_norm_sq, p[0]);
        e.b = std::ldexp(t.psi_norm_sq, p[0] + 1);
        e.has_interval = true;
    }
    for (int depth = 1; depth < t.m_max; ++depth) {
        for (auto& [p, e] : t.entries) {
            if (static_cast<int>(p.size()) != depth || !e.has_interval) continue;
            double r = e.b;
            double total = 0.0;
            for (int j : t.scales) {
                Path c = p;
                c.push_back(j);
                auto it = t.entries.find(c);
                if (it == t.entries.end()) continue;
                const double w = it->second.mu;
                it->second.b = r;
                it->second.a = r - w;
                it->second.has_interval = true;
                r -= w;
                total += w;
            }
            // Compare masses, not realized widths: packing a microscopic child
            // at an O(1) position rounds a = r - w back to r, so b - a can
            // collapse to zero even though the masses nest correctly.
            if (total > e.mu * (1.0 + 1e-6) + 1e-12)
                throw std::runtime_error("interval overflow under path " + path_to_string(p));
        }
    }
}

double truncation_deficit(const PathMeasureTable& t, const Path& p) {
    double d = t.at(p).mu;
    for (int j : t.scales) {
        Path c = p;
        c.push_back(j);
        auto it = t.entries.find(c);
        if (it != t.entries.end()) d -= it->second.mu;
    }
    return d;
}

double path_distance(const PathMeasureTable& t, const Path& q1, const Path& q2) {
    t.at(q1);
    t.at(q2);
    if (q1 == q2) return 0.0;
    std::size_t i = 0;
    while (i < q1.size() && i < q2.size() && q1[i] == q2[i]) ++i;
    Path pbar(q1.begin(), q1.begin() + i);
    int jm;
    if (i < q1.size() && i < q2.size()) jm = std::max(q1[i], q2[i]);
    else jm = i < q1.size() ? q1[i] : q2[i];
    double d = t.at(pbar).mu;
    for (int j : t.scales) {
        if (j <= jm) continue;
        Path c = pbar;
        c.push_back(j);
        d -= t.at(c).mu;
    }
    return d;
}

std::vector<CurveRecord> normalized_scattering_curve(const cvec& f, const FilterBank& fb,
                                                     const PathMeasureTable& t, int m_max) {
    if (m_max > t.m_max) throw std::invalid_argument("curve depth exceeds table depth");
    bool mapped = false;
    for (const auto& [p, e] : t.entries)
        if (p.size() == 1 && e.has_interval) { mapped = true; break; }
    if (!mapped) throw std::logic_error("q map not built");

    ScatteringOutput out = scatter(f, fb, m_max, Policy::All);
    std::vector<CurveRecord> recs;
    for (const auto& [p, pd] : out.coeffs) {
        if (p.empty()) continue;
        const PathMeasureEntry& e = t.at(p);
        CurveRecord r;
        r.omega_start = e.a;
        r.omega_end = e.b;
        r.value = pd.s_norm / std::sqrt(std::max(e.mu_J, 1e-30));
        r.path = p;
        r.length = static_cast<int>(p.size());
        recs.push_back(std::move(r));
    }
    std::sort(recs.begin(), recs.end(), [](const CurveRecord& x, const CurveRecord& y) {
        if (x.omega_start != y.omega_start) return x.omega_start < y.omega_start;
        if (x.length != y.length) return x.length < y.length;
        return x.path < y.path;
    });
    return recs;
}

std::pair<double, double> band_energy_equivalence(const cvec& f, const FilterBank& fb,
                                                  const PathMeasureTable& t, int j) {
    CaptureLedger L = energy_capture_subtree(f, fb, j, t.m_max, Policy::All);
    double scatter_side = 0.0;
    for (int m = 1; m <= t.m_max; ++m) scatter_side += L.layer_energy[m];
    double fourier_side = filtered_energy(fft_of(f), fb.psi(j));
    return {scatter_side, fourier_side};
}

double scattering_shape_divergence(const cvec& f, const FilterBank& fb, int m_max) {
    ScatteringOutput sf = scatter(f, fb, m_max, Policy::All);
    ScatteringOutput sd = scatter(dirac(fb.n), fb, m_max, Policy::All);
    double sup = 0.0;
    for (const auto& [p, pf] : sf.coeffs) {
        const PathData& pdel = sd.coeffs.at(p);
        if (pf.s_norm <= 0.0 || pdel.s_norm <= 0.0) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < pf.s_signal.size(); ++i)
            acc += std::norm(pf.s_signal[i] / pf.s_norm - pdel.s_signal[i] / pdel.s_norm);
        sup = std::max(sup, std::sqrt(acc));
    }
    return sup;
}

}  // namespace scatterlab
