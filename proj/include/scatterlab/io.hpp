#pragma once
#include <string>

#include "scatterlab/measure.hpp"
#include "scatterlab/scatter.hpp"

namespace scatterlab {

// Signals load from CSV (one decimal value per line) or raw little-endian
// IEEE-754 doubles when the file ends in .f64.
rvec load_signal(const std::string& path);
void save_f64(const std::string& path, const rvec& x);
void save_f64_complex(const std::string& path, const cvec& x);  // interleaved re, im

std::string policy_name(Policy p);
Policy parse_policy(const std::string& s);  // all | dec | frequency-decreasing | dec-strict

// {"J", "m_max", "policy", "paths":[{"p", "s_norm", "u_norm", "signal"?}],
//  "layer_energy", "residual_energy"}; signals as [re, im] pairs.
std::string scattering_to_json(const ScatteringOutput& out, bool include_signals);

// omega_start,omega_end,value,path,length,fhat_abs. The overlay column samples
// the unitary |fhat| at the bin of the interval midpoint under omega = u*pi
// (folded onto [0, n/2]); pass an empty spectrum to zero it.
std::string curve_to_csv(const std::vector<CurveRecord>& recs, const cvec& fhat_unitary, int n);

std::string ledger_to_csv(const ScatteringOutput& out);

void write_file(const std::string& path, const std::string& content);

// Short filesystem-safe name for a path: empty -> "empty", else exponents
// joined by '_' with '-' spelled as 'm' (e.g. (-1,-3) -> "m1_m3").
std::string path_slug(const Path& p);

}  // namespace scatterlab
