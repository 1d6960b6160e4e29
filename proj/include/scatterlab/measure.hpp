#pragma once
#include <utility>

#include "scatterlab/scatter.hpp"

namespace scatterlab {

struct PathMeasureEntry {
    double mu = 0.0;    // ||U[p]delta||^2
    double mu_J = 0.0;  // ||S_J[p]delta||^2
    double a = 0.0;     // assigned interval [a, b)
    double b = 0.0;
    bool has_interval = false;
};

// Dirac scattering measure over the depth-truncated path tree, plus the
// interval assignment that realizes it as a measure on the half line.
struct PathMeasureTable {
    int J = 0;
    int m_max = 0;
    double psi_norm_sq = 1.0;
    std::vector<int> scales;  // bank labels, descending, completion first
    std::map<Path, PathMeasureEntry> entries;

    const PathMeasureEntry& at(const Path& p) const;
    // Deepest assigned interval containing omega; empty path when omega falls
    // outside every level-1 interval.
    Path path_at(double omega) const;
};

PathMeasureTable dirac_measures(const FilterBank& fb, int m_max);

// Assigns intervals: level-1 path (j) gets [2^j*psi_norm_sq, 2^(j+1)*psi_norm_sq);
// children pack consecutively from the right end of the parent interval with j
// decreasing, widths equal to child mu; the truncation deficit is the leftmost
// stub. Throws on child mass exceeding the parent by more than 1e-6 relative.
void build_q_map(PathMeasureTable& table);

// mu(p) minus the mass of its children; equals mu_J(p) up to the partition
// defect when p is above the truncation depth.
double truncation_deficit(const PathMeasureTable& table, const Path& p);

// Ultrametric path distance: measure of the smallest common-prefix
// neighborhood separating the two paths.
double path_distance(const PathMeasureTable& table, const Path& q1, const Path& q2);

struct CurveRecord {
    double omega_start = 0.0;
    double omega_end = 0.0;
    double value = 0.0;
    Path path;
    int length = 0;
};

// Piecewise-constant normalized scattering curve: one record per level >= 1
// path, value = ||S_J[p]f|| / ||S_J[p]delta||, sorted by interval start.
std::vector<CurveRecord> normalized_scattering_curve(const cvec& f, const FilterBank& fb,
                                                     const PathMeasureTable& table, int m_max);

// Band energy identity at scale j: (scatter_side, fourier_side) where
// scatter_side sums ||S_J[p]f||^2 over the subtree rooted at j (depth
// table.m_max) and fourier_side is (1/n) sum |fhat|^2 psi_j^2.
std::pair<double, double> band_energy_equivalence(const cvec& f, const FilterBank& fb,
                                                  const PathMeasureTable& table, int j);

// sup over retained paths of || S[p]f/||S[p]f|| - S[p]delta/||S[p]delta|| ||.
// Reported as a diagnostic; nothing is asserted about its limit.
double scattering_shape_divergence(const cvec& f, const FilterBank& fb, int m_max);

}  // namespace scatterlab
