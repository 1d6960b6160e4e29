#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scatterlab/experiments.hpp"

using scatterlab::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, std::string& completion) {
    sub->add_option("--n", cfg.n, "signal length (power of two)");
    sub->add_option("--J", cfg.J, "averaging scale exponent");
    sub->add_option("--m-max", cfg.m_max, "maximum path length");
    sub->add_option("--policy", cfg.policy,
                    "all | dec | frequency-decreasing | dec-strict");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--realizations", cfg.realizations, "Monte-Carlo realizations");
    sub->add_option("--out", cfg.out, "output directory (must not exist)")->required();
    sub->add_option("--format", cfg.format, "csv | json | bin");
    sub->add_option("--completion", completion, "on | off: low-frequency completion filter");
    sub->add_option("--input", cfg.input, "input signal (.csv or .f64)");
    sub->add_option("--model", cfg.model, "white | ma | bernoulli");
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* t = std::getenv("SCATTERLAB_THREADS")) {
        int nt = std::atoi(t);
        if (nt > 0) omp_set_num_threads(nt);
    }
#endif

    CLI::App app{"scatterlab: 1-D wavelet scattering transforms"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string completion = "on";

    CLI::App* filters =
        app.add_subcommand("filters", "build a filter bank and report its invariants");
    CLI::App* scatter =
        app.add_subcommand("scatter", "scattering transform of an input signal");
    CLI::App* stability =
        app.add_subcommand("stability", "deformation stability experiments");
    CLI::App* stochastic =
        app.add_subcommand("stochastic", "stationary process experiments");
    CLI::App* rotation = app.add_subcommand("rotation", "circle scattering experiments");
    for (CLI::App* sub : {filters, scatter, stability, stochastic, rotation})
        add_common(sub, cfg, completion);
    stability
        ->add_option("experiment", cfg.experiment,
                     "gabor | translation-decay | lipschitz-family")
        ->required();
    stochastic
        ->add_option("experiment", cfg.experiment, "consistency | spectrum-compare")
        ->required();
    rotation->add_option("experiment", cfg.experiment, "rotation-invariance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (completion == "on") {
        cfg.completion = true;
    } else if (completion == "off") {
        cfg.completion = false;
    } else {
        std::fprintf(stderr, "error: --completion must be 'on' or 'off'\n");
        return 2;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.command == "rotation" && cfg.experiment.empty())
        cfg.experiment = "rotation-invariance";
    return scatterlab::run_command(cfg);
}
