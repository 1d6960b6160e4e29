#pragma once
#include <functional>
#include <string>

#include "scatterlab/common.hpp"

namespace scatterlab {

// Pointwise Battle-Lemarie spectra (cubic spline). All formulas work on the
// squared magnitude and are numerically stable at every real argument; see
// bl_q for the stabilization that removes the sin^8 / S8 cancellation.
namespace bl {
double sinc(double x);                 // sin(x)/x, 1 at 0
double s8_reg(double u, double* wrapped = nullptr);  // sum over k!=0 of (wrap(u)+2*pi*k)^-8
double q(double u);                    // sin^8(u/2) * S8(u), stabilized
double psi_tilde_sq(double u);         // orthonormal real wavelet, squared
double psi_hat_sq(double w);           // analytic bank wavelet: 2*psi_tilde_sq on w>0
double phi_bl_sq(double w);            // Battle-Lemarie scaling spectrum, squared
double phi_sq(double w);               // closed form phi_bl_sq + psi_tilde_sq
double phi_sq_sum(double w, int j_min = -48);  // truncated-sum oracle for phi_sq
double rho_hat(double u);              // cubic box spline: sinc(u/2)^4
}  // namespace bl

struct FilterBank {
    int n = 0;
    int J = 0;
    double beta = 0.5;
    double eta = 1.5 * kPi;  // nominal mother center frequency
    bool completion = true;
    std::vector<int> scales;       // descending; completion label j_max+1 first when on
    std::vector<rvec> psi_hat;     // parallel to scales
    rvec phi_hat;
    rvec omega;                    // wrapped grid (-pi, pi], Nyquist at +pi
    double psi_norm_sq = 1.0;
    double phi_norm_sq = 2.0;

    int scale_index(int j) const;
    const rvec& psi(int j) const;
    bool has_completion_label(int j) const { return completion && j == scales.front(); }
};

FilterBank build_filter_bank(int n, int J, int j_max = -1, bool completion = true);

// Mother |psi_hat| sampled on the raw [0, 2*pi) grid.
rvec build_battle_lemarie_mother(int n_samples);
// Continuous argmax/peak of |psi_hat| located by golden-section search.
void mother_peak(double* arg_max, double* peak_value);

// Max over positive grid frequencies of |phi^2 + beta*sum_j psi_j^2 - 1|,
// with beta replaced by 1 at the Nyquist bin (that bin pairs with itself, so
// its one-sided doubling is dropped at construction). Positive bins only: the
// analytic wavelets vanish for omega <= 0 and real signals see each |omega|
// once (Nyquist carried at +pi).
double littlewood_paley_deviation(const FilterBank& fb);
// Same restricted to the resolved band [2^(2-J)*pi, pi/2] (uncompleted banks
// are only expected to partition unity away from both grid edges).
double littlewood_paley_deviation_resolved(const FilterBank& fb);

rvec box_spline_rho(int n_samples);  // rho_hat on the raw [0, 2*pi) grid

struct AdmissibilityReport {
    double alpha = 0.0;
    double alpha_arg = 0.0;       // probe frequency attaining the infimum
    double grid_step = 0.0;       // probe resolution metadata
    bool domination_ok = false;   // |rho_hat(w)| <= |phi_hat(2w)| on (0, pi]
    double domination_margin = 0.0;  // max of |rho_hat(w)| - |phi_hat(2w)|
    bool converged = true;        // k-tail below 1e-8
};

// Admissibility constant: infimum over [1,2] of sum_j Psi_hat(2^-j w) |psi_hat(2^-j w)|^2
// with Psi_hat(w) = rho_hat(w-eta)^2 - sum_k k (1 - rho_hat(2^-k (w-eta))^2).
// The wavelet enters with the analytic amplitude-2 normalization (|psi_hat|^2
// = 4 psi_tilde_sq on w > 0), not the bank's unitary sqrt(2); the two differ
// by an exact factor 2 in alpha.
AdmissibilityReport admissibility_alpha(const FilterBank& fb,
                                        const std::function<double(double)>& rho_hat,
                                        double eta, int k_max = 40, int probe_pts = 4096);
AdmissibilityReport admissibility_alpha(const FilterBank& fb);  // box-spline rho, bank eta

}  // namespace scatterlab
