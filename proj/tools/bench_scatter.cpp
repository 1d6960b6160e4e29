// Timing comparison between the OpenMP cascade and the serial reference,
// plus a bitwise equality report. Not part of the test suite.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "scatterlab/scatter.hpp"
#include "scatterlab/signal.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace scatterlab;
using clk = std::chrono::steady_clock;

namespace {

template <typename F>
double best_of(F&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clk::now();
        fn();
        auto t1 = clk::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

bool bitwise_equal(const ScatteringOutput& a, const ScatteringOutput& b) {
    if (a.coeffs.size() != b.coeffs.size()) return false;
    auto ia = a.coeffs.begin();
    auto ib = b.coeffs.begin();
    for (; ia != a.coeffs.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (ia->second.s_norm != ib->second.s_norm) return false;
        if (ia->second.u_norm != ib->second.u_norm) return false;
        if (ia->second.s_signal != ib->second.s_signal) return false;
    }
    if (a.layer_energy != b.layer_energy) return false;
    if (a.residual_energy != b.residual_energy) return false;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 4096;
    int J = argc > 2 ? std::atoi(argv[2]) : 6;
    int m_max = argc > 3 ? std::atoi(argv[3]) : 3;
    int reps = argc > 4 ? std::atoi(argv[4]) : 3;

    FilterBank fb = build_filter_bank(n, J);
    cvec f = to_cvec(smooth_signal(n, 7));

    ScatteringOutput par = scatter(f, fb, m_max);
    ScatteringOutput ser = scatter_serial(f, fb, m_max);
    bool same = bitwise_equal(par, ser);

    double t_par = best_of([&] { scatter(f, fb, m_max); }, reps);
    double t_ser = best_of([&] { scatter_serial(f, fb, m_max); }, reps);

    int threads = 1;
#ifdef _OPENMP
#pragma omp parallel
    {
#pragma omp single
        threads = omp_get_num_threads();
    }
#endif

    std::printf("scatter benchmark: n=%d J=%d m_max=%d (%d paths)\n", n, J, m_max,
                static_cast<int>(par.coeffs.size()));
    std::printf("  serial   %10.2f ms\n", t_ser);
    std::printf("  openmp   %10.2f ms  (%d threads, speedup %.2fx)\n", t_par, threads,
                t_par > 0.0 ? t_ser / t_par : 0.0);
    std::printf("  bitwise identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
