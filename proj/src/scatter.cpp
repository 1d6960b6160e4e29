#include "scatterlab/scatter.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "scatterlab/fft.hpp"

namespace scatterlab {

std::string path_to_string(const Path& p) {
    if (p.empty()) return "∅";
    std::ostringstream os;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << '/';
        os << p[i];
    }
    return os.str();
}

Path path_from_string(const std::string& s) {
    Path p;
    if (s.empty() || s == "∅") return p;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, '/')) {
        if (tok.empty()) throw std::invalid_argument("malformed path string: " + s);
        p.push_back(std::stoi(tok));
    }
    return p;
}

namespace {

bool scale_allowed(Policy policy, const Path& p, int j) {
    if (policy == Policy::All || p.empty()) return true;
    return policy == Policy::Dec ? j <= p.back() : j < p.back();
}

int critical_stride(const FilterBank& fb) { return 1 << (fb.J - 1); }

cvec stride_signal(const cvec& s, int stride) {
    cvec o(s.size() / static_cast<std::size_t>(stride));
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = s[i * static_cast<std::size_t>(stride)];
    return o;
}

void validate_input(const cvec& f, const FilterBank& fb, int m_max, Oversampling os) {
    if (static_cast<int>(f.size()) != fb.n) throw std::invalid_argument("signal length does not match bank");
    if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");
    if (os == Oversampling::Critical && critical_stride(fb) > fb.n)
        throw std::invalid_argument("critical stride exceeds signal length");
}

ScatteringOutput make_header(const FilterBank& fb, int m_max, Policy policy, Oversampling os) {
    ScatteringOutput out;
    out.n = fb.n;
    out.J = fb.J;
    out.m_max = m_max;
    out.policy = policy;
    out.oversampling = os;
    out.layer_energy.assign(m_max + 1, 0.0);
    out.residual_energy.assign(m_max + 2, 0.0);
    return out;
}

struct Node {
    Path p;
    cvec u;
};

struct Slot {
    cvec s;
    double s_norm_sq = 0.0;
    double u_norm = 0.0;
    double kid_energy = 0.0;
    std::vector<int> kid_scales;
    std::vector<cvec> kids;
};

// Shared per-node kernel: fills the slot from U[p]. Both implementations call
// this, so their per-node floating point streams are identical.
void process_node(const Node& node, int m, const FilterBank& fb, int m_max,
                  Policy policy, Oversampling os, Slot& sl) {
    cvec F = fft_of(node.u);
    cvec s = apply_filter(F, fb.phi_hat);
    sl.s_norm_sq = norm_sq(s);
    sl.u_norm = l2_norm(node.u);
    sl.s = (os == Oversampling::Critical) ? stride_signal(s, critical_stride(fb)) : std::move(s);
    for (int j : fb.scales) {
        if (!scale_allowed(policy, node.p, j)) continue;
        if (m < m_max) {
            cvec child = modulus_filter(F, fb.psi(j));
            sl.kid_energy += norm_sq(child);
            sl.kid_scales.push_back(j);
            sl.kids.push_back(std::move(child));
        } else {
            // last layer: children are only needed for the residual ledger
            sl.kid_energy += filtered_energy(F, fb.psi(j));
        }
    }
}

// Folds a finished slot into the output. Reduction happens in node order in
// both implementations, so the summation tree is the same.
void fold_slot(Node& node, Slot& sl, int m, ScatteringOutput& out, std::vector<Node>& next) {
    out.layer_energy[m] += sl.s_norm_sq;
    out.residual_energy[m + 1] += sl.kid_energy;
    for (std::size_t k = 0; k < sl.kids.size(); ++k) {
        Path cp = node.p;
        cp.push_back(sl.kid_scales[k]);
        next.push_back({std::move(cp), std::move(sl.kids[k])});
    }
    PathData pd;
    pd.s_signal = std::move(sl.s);
    pd.s_norm = std::sqrt(sl.s_norm_sq);
    pd.u_norm = sl.u_norm;
    out.coeffs.emplace(std::move(node.p), std::move(pd));
}

}  // namespace

ScatteringOutput scatter(const cvec& f, const FilterBank& fb, int m_max,
                         Policy policy, Oversampling os) {
    validate_input(f, fb, m_max, os);
    ScatteringOutput out = make_header(fb, m_max, policy, os);
    out.input_norm_sq = norm_sq(f);
    out.residual_energy[0] = out.input_norm_sq;

    std::vector<Node> layer;
    layer.push_back({{}, f});
    for (int m = 0; m <= m_max; ++m) {
        const std::ptrdiff_t cnt = static_cast<std::ptrdiff_t>(layer.size());
        std::vector<Slot> slots(layer.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < cnt; ++i)
            process_node(layer[i], m, fb, m_max, policy, os, slots[i]);
        std::vector<Node> next;
        for (std::ptrdiff_t i = 0; i < cnt; ++i) fold_slot(layer[i], slots[i], m, out, next);
        layer = std::move(next);
    }
    return out;
}

ScatteringOutput scatter(const rvec& f, const FilterBank& fb, int m_max,
                         Policy policy, Oversampling os) {
    return scatter(to_cvec(f), fb, m_max, policy, os);
}

ScatteringOutput scatter_serial(const cvec& f, const FilterBank& fb, int m_max,
                                Policy policy, Oversampling os) {
    validate_input(f, fb, m_max, os);
    ScatteringOutput out = make_header(fb, m_max, policy, os);
    out.input_norm_sq = norm_sq(f);
    out.residual_energy[0] = out.input_norm_sq;

    std::vector<Node> layer;
    layer.push_back({{}, f});
    for (int m = 0; m <= m_max; ++m) {
        std::vector<Node> next;
        for (Node& node : layer) {
            Slot sl;
            process_node(node, m, fb, m_max, policy, os, sl);
            fold_slot(node, sl, m, out, next);
        }
        layer = std::move(next);
    }
    return out;
}

double CaptureLedger::captured(int depth) const {
    if (input_norm_sq == 0.0) return 1.0;
    int last = static_cast<int>(layer_energy.size()) - 1;
    if (depth >= 0 && depth < last) last = depth;
    double s = 0.0;
    for (int m = 0; m <= last; ++m) s += layer_energy[m];
    return s / input_norm_sq;
}

namespace {

// Depth-first ledger walk; all energies taken on the frequency side.
void capture_dfs(const cvec& u, int m, int last, const FilterBank& fb, int m_max,
                 Policy policy, CaptureLedger& L) {
    cvec F = fft_of(u);
    L.layer_energy[m] += filtered_energy(F, fb.phi_hat);
    for (int j : fb.scales) {
        if (policy != Policy::All && (policy == Policy::Dec ? j > last : j >= last)) continue;
        L.residual_energy[m + 1] += filtered_energy(F, fb.psi(j));
        if (m < m_max) capture_dfs(modulus_filter(F, fb.psi(j)), m + 1, j, fb, m_max, policy, L);
    }
}

struct CaptureRoot {
    int last = 0;
    cvec u;
};

// Runs the per-root walks (parallel over roots) and merges the slots in root
// order, so thread count never changes the result.
void run_capture_roots(std::vector<CaptureRoot>& roots, int depth, const FilterBank& fb,
                       int m_max, Policy policy, bool parallel, CaptureLedger& L) {
    const std::ptrdiff_t cnt = static_cast<std::ptrdiff_t>(roots.size());
    std::vector<CaptureLedger> slots(roots.size());
    for (auto& sl : slots) {
        sl.layer_energy.assign(m_max + 1, 0.0);
        sl.residual_energy.assign(m_max + 2, 0.0);
    }
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = 0; i < cnt; ++i)
        capture_dfs(roots[i].u, depth, roots[i].last, fb, m_max, policy, slots[i]);
    for (std::ptrdiff_t i = 0; i < cnt; ++i) {
        for (std::size_t m = 0; m < L.layer_energy.size(); ++m)
            L.layer_energy[m] += slots[i].layer_energy[m];
        for (std::size_t m = 0; m < L.residual_energy.size(); ++m)
            L.residual_energy[m] += slots[i].residual_energy[m];
    }
}

}  // namespace

CaptureLedger energy_capture(const cvec& f, const FilterBank& fb, int m_max,
                             Policy policy, bool parallel) {
    validate_input(f, fb, m_max, Oversampling::Full);
    CaptureLedger L;
    L.layer_energy.assign(m_max + 1, 0.0);
    L.residual_energy.assign(m_max + 2, 0.0);
    L.input_norm_sq = norm_sq(f);
    L.residual_energy[0] = L.input_norm_sq;

    cvec F0 = fft_of(f);
    L.layer_energy[0] += filtered_energy(F0, fb.phi_hat);
    for (int j : fb.scales) L.residual_energy[1] += filtered_energy(F0, fb.psi(j));
    if (m_max == 0) return L;

    std::vector<CaptureRoot> roots;
    for (int j1 : fb.scales) {
        cvec u1 = modulus_filter(F0, fb.psi(j1));
        cvec F1 = fft_of(u1);
        L.layer_energy[1] += filtered_energy(F1, fb.phi_hat);
        for (int j2 : fb.scales) {
            if (policy != Policy::All && (policy == Policy::Dec ? j2 > j1 : j2 >= j1)) continue;
            L.residual_energy[2] += filtered_energy(F1, fb.psi(j2));
            if (m_max >= 2) roots.push_back({j2, modulus_filter(F1, fb.psi(j2))});
        }
    }
    if (m_max >= 2) run_capture_roots(roots, 2, fb, m_max, policy, parallel, L);
    return L;
}

CaptureLedger energy_capture_subtree(const cvec& f, const FilterBank& fb, int j0,
                                     int m_max, Policy policy) {
    validate_input(f, fb, m_max, Oversampling::Full);
    if (m_max < 1) throw std::invalid_argument("subtree ledger needs m_max >= 1");
    fb.scale_index(j0);
    CaptureLedger L;
    L.layer_energy.assign(m_max + 1, 0.0);
    L.residual_energy.assign(m_max + 2, 0.0);
    L.input_norm_sq = norm_sq(f);
    L.residual_energy[0] = L.input_norm_sq;

    cvec F0 = fft_of(f);
    L.residual_energy[1] = filtered_energy(F0, fb.psi(j0));
    cvec u1 = modulus_filter(F0, fb.psi(j0));
    cvec F1 = fft_of(u1);
    L.layer_energy[1] += filtered_energy(F1, fb.phi_hat);

    std::vector<CaptureRoot> roots;
    for (int j2 : fb.scales) {
        if (policy != Policy::All && (policy == Policy::Dec ? j2 > j0 : j2 >= j0)) continue;
        L.residual_energy[2] += filtered_energy(F1, fb.psi(j2));
        if (m_max >= 2) roots.push_back({j2, modulus_filter(F1, fb.psi(j2))});
    }
    if (m_max >= 2) run_capture_roots(roots, 2, fb, m_max, policy, true, L);
    return L;
}

cvec one_step_propagator(const cvec& u, const FilterBank& fb, int j) {
    if (static_cast<int>(u.size()) != fb.n) throw std::invalid_argument("signal length does not match bank");
    return modulus_filter(fft_of(u), fb.psi(j));
}

cvec u_path(const cvec& f, const FilterBank& fb, const Path& p) {
    if (static_cast<int>(f.size()) != fb.n) throw std::invalid_argument("signal length does not match bank");
    cvec u = f;
    for (int j : p) u = modulus_filter(fft_of(u), fb.psi(j));
    return u;
}

EnergyBudget energy_budget(const ScatteringOutput& out) {
    if (out.policy != Policy::All) throw std::invalid_argument("energy budget requires the full path set");
    EnergyBudget b;
    if (out.input_norm_sq == 0.0) {
        b.captured_fraction = 1.0;
        return b;
    }
    double cap = 0.0;
    for (int m = 0; m <= out.m_max; ++m) {
        double defect = out.residual_energy[m] - out.layer_energy[m] - out.residual_energy[m + 1];
        b.max_rel_violation = std::max(b.max_rel_violation, std::abs(defect) / out.input_norm_sq);
        cap += out.layer_energy[m];
    }
    b.captured_fraction = cap / out.input_norm_sq;
    return b;
}

double log_sobolev_norm(const cvec& f, const FilterBank& fb, int j_cap) {
    if (static_cast<int>(f.size()) != fb.n) throw std::invalid_argument("signal length does not match bank");
    cvec F = fft_of(f);
    double acc = 0.0;
    for (int j : fb.scales) {
        int i = j + fb.J - 1;  // 0 at the coarsest wavelet above the averaging
        if (i < 0 || i > j_cap) continue;
        acc += static_cast<double>(i) * filtered_energy(F, fb.psi(j));
    }
    return std::sqrt(acc);
}

std::vector<double> arrival_logfreq_profile(const cvec& f, const FilterBank& fb, int m_max) {
    ScatteringOutput out = scatter(f, fb, m_max, Policy::All);
    std::vector<double> num(m_max + 1, 0.0), den(m_max + 1, 0.0);
    for (const auto& [p, pd] : out.coeffs) {
        if (p.empty()) continue;
        int m = static_cast<int>(p.size());
        double e = pd.u_norm * pd.u_norm;
        num[m] += static_cast<double>(p.back()) * e;
        den[m] += e;
    }
    std::vector<double> a(m_max, 0.0);
    for (int m = 1; m <= m_max; ++m)
        a[m - 1] = den[m] > 0.0 ? num[m] / den[m] : std::numeric_limits<double>::quiet_NaN();
    return a;
}

double scattering_distance(const ScatteringOutput& a, const ScatteringOutput& b) {
    if (a.n != b.n || a.J != b.J || a.m_max != b.m_max || a.policy != b.policy ||
        a.oversampling != b.oversampling)
        throw std::invalid_argument("scattering outputs have mismatched metadata");
    if (a.oversampling != Oversampling::Full)
        throw std::invalid_argument("scattering distance needs full oversampling");
    double acc = 0.0;
    auto ia = a.coeffs.begin();
    auto ib = b.coeffs.begin();
    while (ia != a.coeffs.end() || ib != b.coeffs.end()) {
        if (ib == b.coeffs.end() || (ia != a.coeffs.end() && ia->first < ib->first)) {
            acc += ia->second.s_norm * ia->second.s_norm;
            ++ia;
        } else if (ia == a.coeffs.end() || ib->first < ia->first) {
            acc += ib->second.s_norm * ib->second.s_norm;
            ++ib;
        } else {
            acc += dist_sq(ia->second.s_signal, ib->second.s_signal);
            ++ia;
            ++ib;
        }
    }
    return std::sqrt(acc);
}

double l1_scattering_norm(const ScatteringOutput& out) {
    std::vector<double> layer(out.m_max + 1, 0.0);
    for (const auto& [p, pd] : out.coeffs) layer[p.size()] += pd.u_norm * pd.u_norm;
    double acc = 0.0;
    for (double e : layer) acc += std::sqrt(e);
    return acc;
}

namespace {

ModulusBoundReport modulus_report(const cvec& f, const rvec& h_spatial, const cvec& h_mod_hat) {
    const std::size_t n = f.size();
    rvec absf(n);
    for (std::size_t i = 0; i < n; ++i) absf[i] = std::abs(f[i]);
    cvec lhs = apply_filter(fft_of(absf), fft_of(h_spatial));
    cvec rhs = apply_filter(fft_of(f), h_mod_hat);
    ModulusBoundReport r;
    r.min_violation = std::numeric_limits<double>::infinity();
    r.kernel_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        r.min_violation = std::min(r.min_violation, lhs[i].real() - std::abs(rhs[i]));
        r.kernel_min = std::min(r.kernel_min, h_spatial[i]);
        if (h_spatial[i] < 0.0) r.kernel_negative_l1 -= h_spatial[i];
    }
    return r;
}

}  // namespace

ModulusBoundReport modulus_lower_bound_check(const cvec& f, const FilterBank& fb,
                                             int j, double eta_probe) {
    if (static_cast<int>(f.size()) != fb.n) throw std::invalid_argument("signal length does not match bank");
    const double eta = std::ldexp(eta_probe, j);
    rvec h = real_part(ifft_of(to_cvec(fb.phi_hat)));
    cvec h_mod_hat(fb.n);
    for (int k = 0; k < fb.n; ++k)
        h_mod_hat[k] = std::sqrt(bl::phi_sq(std::abs(std::ldexp(fb.omega[k] - eta, fb.J))));
    return modulus_report(f, h, h_mod_hat);
}

ModulusBoundReport modulus_lower_bound_check_kernel(const cvec& f, const rvec& h, double eta) {
    if (f.size() != h.size()) throw std::invalid_argument("kernel length does not match signal");
    cvec hm(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        hm[i] = h[i] * std::polar(1.0, eta * static_cast<double>(i));
    return modulus_report(f, h, fft_of(hm));
}

}  // namespace scatterlab
