#pragma once
#include <memory>

#include "scatterlab/measure.hpp"
#include "scatterlab/rng.hpp"
#include "scatterlab/scatter.hpp"
#include "scatterlab/stability.hpp"

namespace scatterlab {

// Stationary process generators; every variant has unit output variance by
// construction (white noise at sigma = 1).
struct ProcessModel {
    enum class Kind { GaussianWhite, MovingAverageGaussian, Bernoulli, Deformed };
    Kind kind = Kind::GaussianWhite;
    double sigma = 1.0;                  // GaussianWhite
    rvec kernel;                         // MovingAverageGaussian, unit l2 norm
    double p = 0.5;                      // Bernoulli
    std::shared_ptr<ProcessModel> base;  // Deformed
    double tau_amp = 0.0;                // Deformed: target sup|grad tau|
    double tau_ell = 64.0;               // Deformed: correlation length
};

ProcessModel gaussian_white(double sigma = 1.0);
ProcessModel moving_average_gaussian();  // length-16 Gaussian kernel
ProcessModel bernoulli(double p);
ProcessModel deformed(ProcessModel base, double tau_amp, double tau_ell = 64.0);

rvec sample(const ProcessModel& model, int n, std::uint64_t seed);
rvec sample_with(const ProcessModel& model, int n, Rng& rng);

struct SpectrumRecord {
    double mean = 0.0;      // estimate of E(U[p]X), window-averaged
    double variance = 0.0;  // across realizations of the window average
    int count = 0;
};

struct ScatteringSpectrumEstimate {
    int J = 0, m_max = 0, n = 0, realizations = 0;
    std::uint64_t seed = 0;
    Policy policy = Policy::Dec;
    std::map<Path, SpectrumRecord> records;
};

// Realization r draws from seed + r. Frequency-decreasing paths, matching the
// stochastic experiments throughout this module.
ScatteringSpectrumEstimate expected_scattering(const ProcessModel& model, const FilterBank& fb,
                                               int m_max, int realizations, std::uint64_t seed,
                                               Policy policy = Policy::Dec);

struct ConsistencyCurve {
    std::vector<DecayPoint> points;  // value = log2 E||S_J X - SbarX||^2
    double slope = 0.0;
};

// The expectation oracle comes from an independent batch of 4x realizations
// seeded at seed + 1000000; the evaluation batch draws from seed + r.
ConsistencyCurve consistency_curve(const ProcessModel& model, const std::vector<FilterBank>& banks,
                                   int m_max, int realizations, std::uint64_t seed);

// Scattering power spectrum of one realization: spike value SbarX(p)^2/mu_J
// on the truncation stub of each assigned interval, tagged by path length.
std::vector<CurveRecord> power_spectrum_curve(const rvec& x, const FilterBank& fb,
                                              const PathMeasureTable& table, int m_max);

// Monte-Carlo ratio E||S L_tau X - S X||^2 / ((m_max+1) E|X|^2 mean K(tau)^2)
// with first-order K. X and tau are drawn from one stream per realization;
// draws with sup|grad tau| > 1/2 are rejected, rate above 50% throws.
double random_deformation_ratio(const ProcessModel& model, double tau_amp, double tau_ell,
                                const FilterBank& fb, int m_max, int realizations,
                                std::uint64_t seed);

}  // namespace scatterlab
