#pragma once
#include "scatterlab/rng.hpp"
#include "scatterlab/scatter.hpp"

namespace scatterlab {

struct DeformationField {
    rvec tau;  // displacement in samples
    double sup_tau = 0.0;
    double sup_grad = 0.0;  // centered differences, spacing 1
    double sup_hess = 0.0;
    double sup_incr = 0.0;  // max tau - min tau
};

DeformationField make_deformation(rvec tau);

// White noise low-passed at correlation length ell, rescaled so that
// sup_grad == amp exactly.
DeformationField random_smooth_field(int n, double ell, double amp, Rng& rng);

// L_tau f(x) = f(x - tau(x)) by periodic cubic interpolation.
rvec warp(const rvec& f, const DeformationField& tau);

// Deformation size functional. First order:
//   2^-J*sup_tau + sup_grad*max(log(sup_incr/sup_grad), 1) + sup_hess
// (log term 0 when sup_grad == 0); second order replaces the leading term
// with 2^-2J*sup_tau^2.
double k_tau(const DeformationField& tau, int J, bool second_order = false);

struct DecayPoint {
    int J = 0;
    double value = 0.0;
};

struct TranslationDecay {
    std::vector<DecayPoint> points;  // value = ||S_J f - S_J L_c f|| / ||f||
    double slope = 0.0;              // least-squares log2(value) per unit J
};

// covariance_check: c must be an integer; compares S(shift f) against
// shift(S f) pathwise instead, which is exact on the grid.
TranslationDecay translation_decay(const rvec& f, const std::vector<FilterBank>& banks,
                                   double c, int m_max = 3, Policy policy = Policy::All,
                                   bool covariance_check = false);

// ||S L_tau f - S f|| / (m_max * ||f|| * k_tau); the theorem constant is never
// asserted, families report their max ratio.
double lipschitz_ratio(const rvec& f, const DeformationField& tau, const FilterBank& fb,
                       int m_max, Policy policy = Policy::All);

struct GaborReport {
    double fourier_C = 0.0;
    double scatter_C = 0.0;
};

// Dilated-Gabor comparison: f2(x) = exp(i*xi*x - x^2/2) on the grid
// x = (k - n/2)/32, f3(x) = f2((1-s)x). fourier_C = || |fhat2|-|fhat3| ||
// / (|s| ||f2||), scatter_C likewise from the scattering distance
// (m_max = 2, frequency-decreasing paths). s = 0 returns zeros.
GaborReport gabor_benchmark(double xi, double s, const FilterBank& fb);

// Spatial derivative of every coefficient by spectral multiplication with
// i*omega (Nyquist bin zeroed). Requires full oversampling.
std::map<Path, cvec> scattering_gradient(const ScatteringOutput& out);

struct TaylorResidual {
    double first = 0.0;   // ||S L_c f - S f||
    double second = 0.0;  // ||S L_c f - S f + c grad S f||
};
// L_c is the exact band-limited shift.
TaylorResidual first_order_residual(const rvec& f, double c, const FilterBank& fb,
                                    int m_max = 2);

struct DisplacementEstimate {
    rvec tau_hat;             // per sample; meaningful where valid
    std::vector<char> valid;  // denominator >= 1e-12
};
// Scalar least squares per sample x over paths:
//   tau_hat(x) = sum_p (S_f - S_g)(x) dS_f(x) / sum_p dS_f(x)^2  (real parts).
// Throws when every sample is masked.
DisplacementEstimate estimate_displacement(const rvec& f, const rvec& g,
                                           const FilterBank& fb, int m_max = 2);

// Least-squares slope helper shared by the decay experiments.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace scatterlab
