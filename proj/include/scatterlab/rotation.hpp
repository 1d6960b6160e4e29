#pragma once
#include "scatterlab/scatter.hpp"

namespace scatterlab {

// Wavelets on the circle: the mother spectrum sampled at integer frequencies
// (periodization of the line filters). Only L = 0 is supported; the averaging
// at that scale is the exact circle mean, so the completion filter absorbs
// everything outside the wavelet band including the unresolved low octaves.
struct PeriodizedFilterBank {
    int n = 0;
    int L = 0;
    bool completion = true;
    int j_min = 0, j_max = 0;
    std::vector<int> scales;    // descending; completion label j_max+1 first when on
    std::vector<rvec> psi_hat;  // indexed by DFT bin, zero for signed freq <= 0

    int scale_index(int j) const;
    const rvec& psi(int j) const;
};

PeriodizedFilterBank periodized_filter_bank(int n, int L = 0, bool completion = true);

// max over positive signed frequencies of |(1/2) sum_j psi_j^2 - 1|, the
// half weight replaced by 1 at the self-paired Nyquist harmonic.
double rotation_lp_deviation(const PeriodizedFilterBank& pfb);

struct RotationCoeff {
    cd s_mean;           // S~0[p]f: mean of U[p]f over the circle
    double u_norm = 0.0;
};

struct RotationScattering {
    int n = 0;
    int m_max = 0;
    Policy policy = Policy::All;
    std::map<Path, RotationCoeff> coeffs;
    std::vector<double> layer_energy;     // n*|s_mean|^2 summed per layer
    std::vector<double> residual_energy;  // same ledger convention as scatter
    double input_norm_sq = 0.0;
    double captured(int depth = -1) const;
};

RotationScattering rotation_scatter(const cvec& f, const PeriodizedFilterBank& pfb, int m_max,
                                    Policy policy = Policy::All);
RotationScattering rotation_scatter(const rvec& f, const PeriodizedFilterBank& pfb, int m_max,
                                    Policy policy = Policy::All);

// max over shifts and paths of |S~0[p](L_g f) - S~0[p]f|. Integer shifts are
// exact grid rotations; fractional shifts go through cubic interpolation.
double rotation_invariance_check(const cvec& f, const PeriodizedFilterBank& pfb, int m_max,
                                 const std::vector<double>& shifts);

// Quadrature check that the integer translates of the scaling function sum to
// a constant (its spectrum vanishes at every nonzero integer multiple of 2*pi).
struct PoissonReport {
    double spread = 0.0;  // max - min over the unit cell
    double mean = 0.0;
};
PoissonReport poisson_periodization_check();

}  // namespace scatterlab
