#pragma once
#include <cstdint>
#include <random>

#include "scatterlab/common.hpp"

namespace scatterlab {

// Deterministic random source. mt19937_64 output is fixed by the standard and
// the uniform/normal mappings below are explicit, so streams are identical
// across platforms and library versions (std::normal_distribution is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // [0, 1)
        return double(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {  // Box-Muller, pairs cached
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = kTwoPi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    rvec normals(std::size_t n) {
        rvec out(n);
        for (double& v : out) v = normal();
        return out;
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace scatterlab
