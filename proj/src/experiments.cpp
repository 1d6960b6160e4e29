#include "scatterlab/experiments.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "scatterlab/filterbank.hpp"
#include "scatterlab/fft.hpp"
#include "scatterlab/io.hpp"
#include "scatterlab/measure.hpp"
#include "scatterlab/rng.hpp"
#include "scatterlab/rotation.hpp"
#include "scatterlab/scatter.hpp"
#include "scatterlab/signal.hpp"
#include "scatterlab/stability.hpp"
#include "scatterlab/stochastic.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace scatterlab {
namespace {

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    std::string tolerance;
};

// Everything a command produces, buffered so the run directory can be
// written in one atomic pass at the end.
struct RunFiles {
    std::vector<std::pair<std::string, std::string>> text;
    std::vector<std::pair<std::string, rvec>> raw;
    std::vector<Check> checks;
    ojson report;
};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void add_check(RunFiles& rf, const std::string& name, bool pass, double measured,
               const std::string& tolerance) {
    rf.checks.push_back({name, pass, measured, tolerance});
}

bool window_check(RunFiles& rf, const std::string& name, double v, double lo, double hi) {
    bool ok = v >= lo && v <= hi;
    add_check(rf, name, ok, v, "[" + fmt_short(lo) + "," + fmt_short(hi) + "]");
    return ok;
}

std::string iso_timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int resolve_n(const RunConfig& cfg, int dflt) { return cfg.n > 0 ? cfg.n : dflt; }
int resolve_J(const RunConfig& cfg, int dflt) { return cfg.J > 0 ? cfg.J : dflt; }
int resolve_m(const RunConfig& cfg, int dflt) { return cfg.m_max >= 0 ? cfg.m_max : dflt; }
int resolve_R(const RunConfig& cfg, int dflt) {
    return cfg.realizations > 0 ? cfg.realizations : dflt;
}
std::uint64_t resolve_seed(const RunConfig& cfg, std::uint64_t dflt) {
    return cfg.seed == RunConfig::kSeedUnset ? dflt : cfg.seed;
}

ProcessModel resolve_model(const std::string& name) {
    if (name == "white" || name == "gaussian-white") return gaussian_white();
    if (name == "ma" || name == "moving-average") return moving_average_gaussian();
    if (name == "bernoulli") return bernoulli(0.02);
    throw std::invalid_argument("unknown model: " + name);
}

ojson scales_json(const std::vector<int>& scales) {
    ojson a = ojson::array();
    for (int j : scales) a.push_back(j);
    return a;
}

// ---------------------------------------------------------------- filters

void do_filters(const RunConfig& cfg, RunFiles& rf) {
    int n = resolve_n(cfg, 1024);
    int J = resolve_J(cfg, 5);
    FilterBank fb = build_filter_bank(n, J, -1, cfg.completion);

    for (std::size_t s = 0; s < fb.scales.size(); ++s) {
        rf.raw.emplace_back("psi_" + path_slug({fb.scales[s]}) + ".f64", fb.psi_hat[s]);
    }
    rf.raw.emplace_back("phi.f64", fb.phi_hat);

    double lp;
    if (fb.completion) {
        lp = littlewood_paley_deviation(fb);
        add_check(rf, "littlewood_paley", lp <= 1e-10, lp, "1e-10");
    } else {
        lp = littlewood_paley_deviation_resolved(fb);
        add_check(rf, "littlewood_paley_resolved", lp <= 1e-3, lp, "1e-3");
    }

    AdmissibilityReport ar = admissibility_alpha(fb);
    if (!ar.converged) throw std::domain_error("admissibility tail sum did not converge");
    add_check(rf, "alpha_window", std::abs(ar.alpha - 0.2766) <= 0.02, ar.alpha,
              "0.2766+-0.02");
    add_check(rf, "scaling_domination", ar.domination_ok, ar.domination_margin, "1e-6");

    rf.report["bank"] = {{"n", fb.n},
                         {"J", fb.J},
                         {"beta", fb.beta},
                         {"eta", fb.eta},
                         {"completion", fb.completion},
                         {"psi_norm_sq", fb.psi_norm_sq},
                         {"phi_norm_sq", fb.phi_norm_sq}};
    rf.report["bank"]["scales"] = scales_json(fb.scales);
    rf.report["littlewood_paley_deviation"] = lp;
    rf.report["alpha"] = ar.alpha;
    rf.report["alpha_argument"] = ar.alpha_arg;
    rf.report["domination_margin"] = ar.domination_margin;
    std::printf("alpha = %.6f at omega = %.4f (domination margin %.3e)\n", ar.alpha,
                ar.alpha_arg, ar.domination_margin);
}

// ---------------------------------------------------------------- scatter

void do_scatter(const RunConfig& cfg, RunFiles& rf) {
    if (cfg.input.empty()) throw std::invalid_argument("scatter requires --input");
    rvec f = load_signal(cfg.input);
    int n = static_cast<int>(f.size());
    if (!is_pow2(n)) throw std::invalid_argument("input length must be a power of two");
    if (cfg.n > 0 && cfg.n != n)
        throw std::invalid_argument("--n disagrees with input length");

    int J = resolve_J(cfg, 5);
    int m_max = resolve_m(cfg, 3);
    Policy policy = parse_policy(cfg.policy);
    FilterBank fb = build_filter_bank(n, J, -1, cfg.completion);
    ScatteringOutput out = scatter(f, fb, m_max, policy, Oversampling::Full);

    if (policy == Policy::All) {
        EnergyBudget eb = energy_budget(out);
        add_check(rf, "energy_ledger", eb.max_rel_violation <= 1e-6, eb.max_rel_violation,
                  "1e-6");
        rf.report["captured_fraction"] = eb.captured_fraction;
        std::printf("captured fraction (depth %d): %.6f\n", m_max, eb.captured_fraction);
    } else {
        double layers = 0.0;
        for (double e : out.layer_energy) layers += e;
        double cap = out.input_norm_sq > 0.0 ? layers / out.input_norm_sq : 0.0;
        rf.report["captured_fraction"] = cap;
        std::printf("captured fraction (depth %d): %.6f\n", m_max, cap);
    }

    int table_depth = std::min(m_max, 4);
    cvec fhat = fft_of(f);
    double root_n = std::sqrt(static_cast<double>(n));
    for (auto& v : fhat) v /= root_n;

    if (table_depth >= 1) {
        PathMeasureTable table = dirac_measures(fb, table_depth);
        build_q_map(table);
        auto curve = normalized_scattering_curve(to_cvec(f), fb, table, table_depth);
        rf.text.emplace_back("curve.csv", curve_to_csv(curve, fhat, n));
    } else {
        rf.text.emplace_back("curve.csv",
                             "omega_start,omega_end,value,path,length,fhat_abs\n");
    }

    rf.text.emplace_back("scattering.json",
                         scattering_to_json(out, cfg.format == "json"));
    rf.text.emplace_back("ledger.csv", ledger_to_csv(out));
    if (cfg.format == "bin") {
        for (const auto& [p, pd] : out.coeffs) {
            rf.raw.emplace_back("s_" + path_slug(p) + ".f64", rvec{});
            rvec& dst = rf.raw.back().second;
            dst.reserve(pd.s_signal.size() * 2);
            for (cd z : pd.s_signal) {
                dst.push_back(z.real());
                dst.push_back(z.imag());
            }
        }
    }

    rf.report["n"] = n;
    rf.report["J"] = J;
    rf.report["m_max"] = m_max;
    rf.report["policy"] = policy_name(policy);
    rf.report["paths"] = out.coeffs.size();
    rf.report["input_norm_sq"] = out.input_norm_sq;
}

// ---------------------------------------------------------------- stability

void do_gabor(const RunConfig& cfg, RunFiles& rf) {
    int n = resolve_n(cfg, 8192);
    int J = resolve_J(cfg, 12);
    FilterBank fb = build_filter_bank(n, J, -1, cfg.completion);

    std::string csv = "xi,fourier_C,scatter_C\n";
    GaborReport main{};
    for (double xi : {4.0, 8.0, 19.0, 38.0}) {
        GaborReport r = gabor_benchmark(xi, -0.1, fb);
        csv += fmt_double(xi) + "," + fmt_double(r.fourier_C) + "," +
               fmt_double(r.scatter_C) + "\n";
        if (xi == 19.0) main = r;
    }
    rf.text.emplace_back("gabor.csv", csv);

    double ratio = main.scatter_C > 0.0 ? main.fourier_C / main.scatter_C : 0.0;
    add_check(rf, "gabor_fourier_over_scatter", ratio >= 4.0, ratio, ">=4");
    rf.report["xi"] = 19.0;
    rf.report["dilation"] = -0.1;
    rf.report["fourier_C"] = main.fourier_C;
    rf.report["scatter_C"] = main.scatter_C;
    rf.report["ratio"] = ratio;
    std::printf("gabor xi=19: fourier %.4f scatter %.4f ratio %.2f\n", main.fourier_C,
                main.scatter_C, ratio);
}

void do_translation_decay(const RunConfig& cfg, RunFiles& rf) {
    int n = resolve_n(cfg, 1024);
    int m_max = resolve_m(cfg, 3);
    std::uint64_t seed = resolve_seed(cfg, 7);

    std::vector<FilterBank> banks;
    for (int J = 3; J <= 7; ++J) banks.push_back(build_filter_bank(n, J, -1, cfg.completion));
    rvec f = smooth_signal(n, seed);

    TranslationDecay d = translation_decay(f, banks, 1.5, m_max, Policy::All, false);
    std::string csv = "J,distance\n";
    for (const auto& pt : d.points) csv += std::to_string(pt.J) + "," + fmt_double(pt.value) + "\n";
    rf.text.emplace_back("decay.csv", csv);
    window_check(rf, "decay_slope", d.slope, -1.4, -0.6);

    std::vector<FilterBank> one{banks[2]};
    TranslationDecay cov = translation_decay(f, one, 2.0, m_max, Policy::All, true);
    add_check(rf, "integer_covariance", cov.points[0].value <= 1e-10, cov.points[0].value,
              "1e-10");

    rf.report["slope"] = d.slope;
    rf.report["covariance_residual"] = cov.points[0].value;
    std::printf("translation decay slope %.4f, covariance residual %.3e\n", d.slope,
                cov.points[0].value);
}

void do_lipschitz_family(const RunConfig& cfg, RunFiles& rf) {
    int n = resolve_n(cfg, 1024);
    int J = resolve_J(cfg, 6);
    int m_max = resolve_m(cfg, 3);
    int fields = resolve_R(cfg, 50);
    std::uint64_t seed = resolve_seed(cfg, 7);

    FilterBank fb = build_filter_bank(n, J, -1, cfg.completion);
    std::vector<rvec> sigs;
    for (int s = 0; s < 3; ++s) sigs.push_back(smooth_signal(n, seed + s, n / 32));

    rvec ratios;
    std::string csv = "signal,field,sup_grad,ratio\n";
    for (int i = 0; i < fields; ++i) {
        double amp = 0.01 * std::pow(30.0, fields > 1 ? double(i) / (fields - 1) : 0.0);
        Rng rng(seed + 1000 + i);
        DeformationField field = random_smooth_field(n, 64, amp, rng);
        for (int s = 0; s < 3; ++s) {
            double r = lipschitz_ratio(sigs[s], field, fb, m_max, Policy::All);
            ratios.push_back(r);
            csv += std::to_string(s) + "," + std::to_string(i) + "," +
                   fmt_double(field.sup_grad) + "," + fmt_double(r) + "\n";
        }
    }
    rf.text.emplace_back("ratios.csv", csv);

    rvec sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    double max_r = sorted.back();
    double median = sorted[sorted.size() / 2];
    double spread = median > 0.0 ? max_r / median : 0.0;
    add_check(rf, "family_spread", spread <= 10.0, spread, "10");
    rf.report["max_ratio"] = max_r;
    rf.report["median_ratio"] = median;
    rf.report["spread"] = spread;
    std::printf("lipschitz ratios: max %.4f median %.4f spread %.2f\n", max_r, median,
                spread);
}

void do_stability(const RunConfig& cfg, RunFiles& rf) {
    if (cfg.experiment == "gabor") return do_gabor(cfg, rf);
    if (cfg.experiment == "translation-decay") return do_translation_decay(cfg, rf);
    if (cfg.experiment == "lipschitz-family") return do_lipschitz_family(cfg, rf);
    throw std::invalid_argument("unknown stability experiment: " + cfg.experiment);
}

// ---------------------------------------------------------------- stochastic

void do_consistency(const RunConfig& cfg, RunFiles& rf) {
    int n = resolve_n(cfg, 1024);
    int m_max = resolve_m(cfg, 3);
    int R = resolve_R(cfg, 24);
    std::uint64_t seed = resolve_seed(cfg, 33);
    ProcessModel model = resolve_model(cfg.model);

    std::vector<FilterBank> banks;
    for (int J = 3; J <= 8; ++J) banks.push_back(build_filter_bank(n, J, -1, cfg.completion));
    ConsistencyCurve curve = consistency_curve(model, banks, m_max, R, seed);

    std::string csv = "J,log2_err\n";
    for (const auto& pt : curve.points)
        csv += std::to_string(pt.J) + "," + fmt_double(pt.value) + "\n";
    rf.text.emplace_back("consistency.csv", csv);

    if (cfg.model == "white" || cfg.model == "gaussian-white") {
        window_check(rf, "consistency_slope", curve.slope, -1.5, -0.5);
    } else if (cfg.model == "ma" || cfg.model == "moving-average") {
        double first = curve.points[1].value - curve.points[0].value;
        double tail = 0.0;
        std::size_t np = curve.points.size();
        for (std::size_t i = np - 3; i < np; ++i)
            tail += curve.points[i].value - curve.points[i - 1].value;
        tail /= 3.0;
        add_check(rf, "knee_first_step", first >= -0.3, first, ">=-0.3");
        add_check(rf, "knee_tail_decay", tail <= -0.45, tail, "<=-0.45");
    }
    rf.report["slope"] = curve.slope;
    rf.report["model"] = cfg.model;
    std::printf("consistency slope %.4f (model %s)\n", curve.slope, cfg.model.c_str());
}

void do_spectrum_compare(const RunConfig& cfg, RunFiles& rf) {
    int n = resolve_n(cfg, 1024);
    int J = resolve_J(cfg, 5);
    int m_max = resolve_m(cfg, 3);
    int R = resolve_R(cfg, 64);
    std::uint64_t seed = resolve_seed(cfg, 999);

    FilterBank fb = build_filter_bank(n, J, -1, cfg.completion);
    PathMeasureTable table = dirac_measures(fb, std::min(m_max, 4));
    build_q_map(table);

    struct Acc {
        double len1 = 0.0, len2 = 0.0;
    };
    auto mass_split = [&](const ProcessModel& model, std::uint64_t s0, std::string& csv) {
        std::map<Path, double> mass;
        for (int r = 0; r < R; ++r) {
            rvec x = sample(model, n, s0 + r);
            auto curve = power_spectrum_curve(x, fb, table, m_max);
            for (const auto& rec : curve) {
                double mu_J = table.at(rec.path).mu_J;
                mass[rec.path] += rec.value * mu_J / R;
            }
        }
        Acc a;
        csv = "path,length,mass\n";
        for (const auto& [p, m] : mass) {
            if (p.empty()) continue;
            (p.size() == 1 ? a.len1 : a.len2) += m;
            csv += path_to_string(p) + "," + std::to_string(p.size()) + "," +
                   fmt_double(m) + "\n";
        }
        double tot = a.len1 + a.len2;
        if (tot > 0.0) {
            a.len1 /= tot;
            a.len2 /= tot;
        }
        return a;
    };

    std::string white_csv, bern_csv;
    Acc white = mass_split(gaussian_white(), seed, white_csv);
    Acc bern = mass_split(bernoulli(0.02), seed, bern_csv);
    rf.text.emplace_back("spectrum_white.csv", white_csv);
    rf.text.emplace_back("spectrum_bernoulli.csv", bern_csv);

    double factor = white.len2 > 0.0 ? bern.len2 / white.len2 : 0.0;
    add_check(rf, "interaction_separation", factor >= 3.0, factor, ">=3");
    rf.report["white_len1_fraction"] = white.len1;
    rf.report["white_len2plus_fraction"] = white.len2;
    rf.report["bernoulli_len2plus_fraction"] = bern.len2;
    rf.report["separation_factor"] = factor;
    std::printf("interaction mass: white %.4f bernoulli %.4f factor %.2f\n", white.len2,
                bern.len2, factor);
}

void do_stochastic(const RunConfig& cfg, RunFiles& rf) {
    if (cfg.experiment == "consistency") return do_consistency(cfg, rf);
    if (cfg.experiment == "spectrum-compare") return do_spectrum_compare(cfg, rf);
    throw std::invalid_argument("unknown stochastic experiment: " + cfg.experiment);
}

// ---------------------------------------------------------------- rotation

void do_rotation(const RunConfig& cfg, RunFiles& rf) {
    if (!cfg.experiment.empty() && cfg.experiment != "rotation-invariance" &&
        cfg.experiment != "invariance")
        throw std::invalid_argument("unknown rotation experiment: " + cfg.experiment);
    int n = resolve_n(cfg, 256);
    int m_max = resolve_m(cfg, 4);
    std::uint64_t seed = resolve_seed(cfg, 5);

    PeriodizedFilterBank pfb = periodized_filter_bank(n, 0, cfg.completion);
    double lp = rotation_lp_deviation(pfb);
    if (cfg.completion) add_check(rf, "circle_littlewood_paley", lp <= 1e-10, lp, "1e-10");

    rvec f = smooth_signal(n, seed, n / 8);
    RotationScattering rs = rotation_scatter(f, pfb, m_max);
    double cap = rs.captured();
    add_check(rf, "norm_capture_m4", cap >= 0.99, cap, ">=0.99");

    std::vector<double> ints{1.0, 3.0, double(n / 4), double(n / 2), double(n - 1)};
    double max_int = rotation_invariance_check(to_cvec(f), pfb, m_max, ints);
    add_check(rf, "integer_rotation_invariance", max_int <= 1e-10, max_int, "1e-10");

    double max_frac = rotation_invariance_check(to_cvec(f), pfb, m_max, {2.5});
    add_check(rf, "fractional_rotation_invariance", max_frac <= 1e-3, max_frac, "1e-3");

    rf.report["n"] = n;
    rf.report["j_min"] = pfb.j_min;
    rf.report["j_max"] = pfb.j_max;
    rf.report["lp_deviation"] = lp;
    rf.report["captured_m4"] = cap;
    rf.report["integer_invariance"] = max_int;
    rf.report["fractional_invariance"] = max_frac;
    std::printf("rotation invariance: integer %.3e fractional %.3e capture %.6f\n",
                max_int, max_frac, cap);
}

// ---------------------------------------------------------------- driver

void write_run_dir(const RunConfig& cfg, const RunFiles& rf, bool any_fail) {
    fs::path final_dir(cfg.out);
    fs::path tmp_dir(cfg.out + ".tmp-" + std::to_string(::getpid()));
    fs::create_directories(tmp_dir);
    try {
        for (const auto& [name, content] : rf.text) write_file((tmp_dir / name).string(), content);
        for (const auto& [name, data] : rf.raw) save_f64((tmp_dir / name).string(), data);

        std::string checks;
        for (const auto& c : rf.checks) {
            checks += std::string(c.pass ? "PASS" : "FAIL") + " " + c.name +
                      " measured=" + fmt_short(c.measured) + " tolerance=" + c.tolerance +
                      "\n";
        }
        write_file((tmp_dir / "CHECKS").string(), checks);

        ojson manifest;
        manifest["command"] = cfg.command;
        if (!cfg.experiment.empty()) manifest["experiment"] = cfg.experiment;
        ojson params;
        params["n"] = cfg.n;
        params["J"] = cfg.J;
        params["m_max"] = cfg.m_max;
        params["policy"] = cfg.policy;
        params["seed"] = cfg.seed == RunConfig::kSeedUnset ? ojson(nullptr) : ojson(cfg.seed);
        params["realizations"] = cfg.realizations;
        params["model"] = cfg.model;
        params["input"] = cfg.input;
        params["format"] = cfg.format;
        params["completion"] = cfg.completion;
        manifest["params"] = params;
        manifest["checks_passed"] = !any_fail;
        manifest["timestamp"] = iso_timestamp();
        write_file((tmp_dir / "manifest.json").string(), manifest.dump(2) + "\n");

        ojson report = rf.report;
        write_file((tmp_dir / "report.json").string(), report.dump(2) + "\n");

        fs::rename(tmp_dir, final_dir);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(tmp_dir, ec);
        throw;
    }
}

}  // namespace

int run_command(const RunConfig& cfg) {
    static const std::set<std::string> kCommands{"filters", "scatter", "stability",
                                                 "stochastic", "rotation"};
    if (!kCommands.count(cfg.command)) {
        std::fprintf(stderr, "error: unknown command '%s'\n", cfg.command.c_str());
        return 2;
    }
    if (cfg.out.empty()) {
        std::fprintf(stderr, "error: --out is required\n");
        return 2;
    }
    if (fs::exists(cfg.out)) {
        std::fprintf(stderr, "error: output directory '%s' already exists\n",
                     cfg.out.c_str());
        return 2;
    }
    if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "bin") {
        std::fprintf(stderr, "error: unknown format '%s'\n", cfg.format.c_str());
        return 2;
    }

    RunFiles rf;
    try {
        try {
            parse_policy(cfg.policy);
            if (cfg.command == "filters")
                do_filters(cfg, rf);
            else if (cfg.command == "scatter")
                do_scatter(cfg, rf);
            else if (cfg.command == "stability")
                do_stability(cfg, rf);
            else if (cfg.command == "stochastic")
                do_stochastic(cfg, rf);
            else
                do_rotation(cfg, rf);
        } catch (const std::invalid_argument& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        } catch (const std::domain_error& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 3;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 4;
        }

        bool any_fail = false;
        for (const auto& c : rf.checks) {
            if (!c.pass) any_fail = true;
            std::printf("%s %s measured=%s tolerance=%s\n", c.pass ? "PASS" : "FAIL",
                        c.name.c_str(), fmt_short(c.measured).c_str(), c.tolerance.c_str());
        }
        write_run_dir(cfg, rf, any_fail);
        return any_fail ? 4 : 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}

}  // namespace scatterlab
