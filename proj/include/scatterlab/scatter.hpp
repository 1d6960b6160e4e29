#pragma once
#include <map>
#include <string>

#include "scatterlab/filterbank.hpp"

namespace scatterlab {

enum class Policy { All, Dec, DecStrict };
enum class Oversampling { Full, Critical };

using Path = std::vector<int>;

std::string path_to_string(const Path& p);   // "∅" or "j1/j2/..."
Path path_from_string(const std::string& s);

struct PathData {
    cvec s_signal;   // S_J[p]f; strided by 2^(J-1) under critical oversampling
    double s_norm = 0.0;   // always the full-resolution norm
    double u_norm = 0.0;   // norm of U[p]f
};

struct ScatteringOutput {
    int n = 0;
    int J = 0;
    int m_max = 0;
    Policy policy = Policy::All;
    Oversampling oversampling = Oversampling::Full;
    std::map<Path, PathData> coeffs;
    std::vector<double> layer_energy;     // layer_energy[m] = sum over |p| = m of s_norm^2
    std::vector<double> residual_energy;  // [0] = ||f||^2, [m+1] = sum of child U energies
    double input_norm_sq = 0.0;
};

// OpenMP cascade: parallel over the nodes of a layer, per-slot writes, then a
// serial reduction in node order, so the result is bitwise identical to
// scatter_serial at any thread count.
ScatteringOutput scatter(const cvec& f, const FilterBank& fb, int m_max,
                         Policy policy = Policy::All,
                         Oversampling oversampling = Oversampling::Full);
ScatteringOutput scatter(const rvec& f, const FilterBank& fb, int m_max,
                         Policy policy = Policy::All,
                         Oversampling oversampling = Oversampling::Full);
// Plain reference implementation (no OpenMP), kept for testing.
ScatteringOutput scatter_serial(const cvec& f, const FilterBank& fb, int m_max,
                                Policy policy = Policy::All,
                                Oversampling oversampling = Oversampling::Full);

// Energy ledgers without coefficient storage (depth-first); used where deep
// trees would not fit in memory as full outputs.
struct CaptureLedger {
    std::vector<double> layer_energy;
    std::vector<double> residual_energy;
    double input_norm_sq = 0.0;
    double captured(int depth = -1) const;  // sum of layer energies / input norm
};
CaptureLedger energy_capture(const cvec& f, const FilterBank& fb, int m_max,
                             Policy policy = Policy::All, bool parallel = true);
// Same ledger restricted to the subtree rooted at first scale j0.
CaptureLedger energy_capture_subtree(const cvec& f, const FilterBank& fb, int j0,
                                     int m_max, Policy policy = Policy::All);

cvec one_step_propagator(const cvec& u, const FilterBank& fb, int j);  // |u * psi_j|
cvec u_path(const cvec& f, const FilterBank& fb, const Path& p);

struct EnergyBudget {
    double max_rel_violation = 0.0;  // telescoping defect, relative to ||f||^2
    double captured_fraction = 0.0;
};
EnergyBudget energy_budget(const ScatteringOutput& out);  // requires policy All

// Weighted first-order norm sqrt(sum_i i * ||f * psi_j||^2) with i = j + J - 1,
// so the coarsest wavelet above the averaging has weight 0; i capped at j_cap.
double log_sobolev_norm(const cvec& f, const FilterBank& fb, int j_cap);

// Per-layer energy barycenter of the last path exponent, m = 1..m_max.
std::vector<double> arrival_logfreq_profile(const cvec& f, const FilterBank& fb, int m_max);

// l2 distance over the union of paths, missing treated as zero. Throws on
// metadata mismatch (n, J, m_max, policy, oversampling).
double scattering_distance(const ScatteringOutput& a, const ScatteringOutput& b);

double l1_scattering_norm(const ScatteringOutput& out);  // sum_m sqrt(sum_{|p|=m} u_norm^2)

struct ModulusBoundReport {
    double min_violation = 0.0;      // min over x of (|f| * h)(x) - |f * h_eta|(x)
    double kernel_min = 0.0;         // min of the spatial kernel h
    double kernel_negative_l1 = 0.0; // l1 mass of the negative part of h
};
// h = spatial phi_{2^J} from the bank, modulated to eta = 2^j * eta_probe.
ModulusBoundReport modulus_lower_bound_check(const cvec& f, const FilterBank& fb,
                                             int j, double eta_probe = 1.5 * kPi);
// Same check against an explicitly supplied spatial kernel.
ModulusBoundReport modulus_lower_bound_check_kernel(const cvec& f, const rvec& h, double eta);

}  // namespace scatterlab
