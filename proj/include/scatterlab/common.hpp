#pragma once
#include <complex>
#include <vector>
#include <cmath>
#include <cstdint>

namespace scatterlab {

using cd = std::complex<double>;
using cvec = std::vector<cd>;
using rvec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline double norm_sq(const cvec& x) {
    double s = 0.0;
    for (const cd& v : x) s += std::norm(v);
    return s;
}
inline double norm_sq(const rvec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}
template <class V>
double l2_norm(const V& x) { return std::sqrt(norm_sq(x)); }

inline double dist_sq(const cvec& a, const cvec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return s;
}

inline cvec to_cvec(const rvec& x) {
    cvec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = cd(x[i], 0.0);
    return out;
}
inline rvec real_part(const cvec& x) {
    rvec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i].real();
    return out;
}

}  // namespace scatterlab
