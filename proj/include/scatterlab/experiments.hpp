#pragma once
#include <cstdint>
#include <limits>
#include <string>

namespace scatterlab {

// Resolved command-line configuration. Zero-valued n/J, negative m_max,
// zero realizations, and the seed sentinel mean "not given": each command
// fills in its own defaults.
struct RunConfig {
    static constexpr std::uint64_t kSeedUnset = std::numeric_limits<std::uint64_t>::max();

    std::string command;     // filters | scatter | stability | stochastic | rotation
    std::string experiment;  // registry name for the experiment commands
    std::string input;       // signal file for scatter
    std::string model = "white";
    int n = 0;
    int J = 0;
    int m_max = -1;
    std::string policy = "all";
    std::uint64_t seed = kSeedUnset;
    int realizations = 0;
    std::string out;
    std::string format = "csv";
    bool completion = true;
};

// Runs one command end to end and writes the run directory atomically
// (<out>.tmp-<pid> then rename; nothing is left behind on failure).
// Exit codes: 0 ok, 2 config, 3 numeric non-convergence, 4 integrity failure.
int run_command(const RunConfig& cfg);

}  // namespace scatterlab
