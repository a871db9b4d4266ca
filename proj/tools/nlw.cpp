// Command-line front end for the radial energy-critical wave lab.
//
// Subcommands map one-to-one onto experiments: simulate, classify, channels,
// decompose, verify, demo-counterexample, concentration. Global flags
// override the corresponding config-file fields.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical abort,
// 4 falsification detected by a verify run.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlw/harness.hpp"

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int dim = 0;
};

nlw::ExperimentConfig load_base_config(const GlobalFlags& gf, nlw::ExperimentKind kind) {
    nlw::ExperimentConfig cfg;
    if (!gf.config_path.empty()) {
        std::ifstream in(gf.config_path);
        if (!in) throw nlw::ConfigError("cannot open config file: " + gf.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw nlw::ConfigError(std::string("config parse error: ") + e.what());
        }
        cfg = nlw::ExperimentConfig::from_json(j);
    }
    cfg.kind = kind;
    if (!gf.out_dir.empty()) cfg.out_dir = gf.out_dir;
    if (gf.seed_set) cfg.seed = gf.seed;
    if (gf.dim != 0) cfg.dimension = gf.dim;
    return cfg;
}

int run_and_report(nlw::ExperimentConfig cfg) {
    cfg.validate();
    const nlw::RunManifest man = nlw::harness::run(cfg);
    std::cout << "experiment: " << nlw::to_string(cfg.kind) << "\n";
    std::cout << "verdicts: " << man.verdicts.dump() << "\n";
    std::cout << "artifacts in " << cfg.out_dir << " (" << man.artifacts.size() << " files)\n";
    if (cfg.kind == nlw::ExperimentKind::VerifyInequalities && man.falsification_found) {
        std::cout << "FALSIFICATION DETECTED\n";
        return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlw: a numerical laboratory for the radial focusing energy-critical wave equation"};
    app.require_subcommand(1);

    GlobalFlags gf;
    app.add_option("--config", gf.config_path, "JSON experiment config (closed schema)");
    app.add_option("--out", gf.out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", gf.seed, "random seed");
    app.add_option("--dim", gf.dim, "space dimension (3, 4 or 5)");

    auto* simulate = app.add_subcommand("simulate", "evolve initial data, write traces and frames");
    double sim_amplitude = 0.8;
    double sim_horizon = 0.0;
    simulate->add_option("--amplitude", sim_amplitude, "ground-state multiple to evolve");
    simulate->add_option("--horizon", sim_horizon, "evolution horizon");

    auto* classify = app.add_subcommand("classify", "static and dynamic fate classification");
    std::vector<double> cls_amplitudes;
    double cls_horizon = 0.0;
    classify->add_option("--amplitudes", cls_amplitudes, "ground-state multiples to classify");
    classify->add_option("--horizon", cls_horizon, "dynamic budget horizon");

    auto* channels = app.add_subcommand("channels", "exterior-energy channel sweep over seeded data");
    int ch_seeds = 0;
    channels->add_option("--seeds", ch_seeds, "number of seeded data");

    auto* decompose = app.add_subcommand("decompose", "fit a multi-bubble decomposition");
    std::string dec_input;
    decompose->add_option("--in", dec_input, "input snapshot (NLW1)");

    auto* verify = app.add_subcommand("verify", "run the variational inequality property suite");
    int ver_samples = 0;
    verify->add_option("--samples", ver_samples, "number of sampled states");

    auto* counter = app.add_subcommand("demo-counterexample",
                                       "exhibit the failure of the component-wise norm expansion");

    auto* concentration = app.add_subcommand("concentration",
                                             "light-cone concentration of a collapsing bubble");
    double conc_exponent = -1.0;
    concentration->add_option("--collapse-exponent", conc_exponent,
                              "lambda(t) = (1-t)^p collapse exponent (0 keeps the bubble fixed)");

    CLI11_PARSE(app, argc, argv);
    gf.seed_set = seed_opt->count() > 0;

    try {
        if (simulate->parsed()) {
            auto cfg = load_base_config(gf, nlw::ExperimentKind::Simulate);
            cfg.amplitudes = {sim_amplitude};
            if (sim_horizon > 0.0) cfg.horizon = sim_horizon;
            return run_and_report(cfg);
        }
        if (classify->parsed()) {
            auto cfg = load_base_config(gf, nlw::ExperimentKind::Dichotomy);
            if (!cls_amplitudes.empty()) cfg.amplitudes = cls_amplitudes;
            if (cls_horizon > 0.0) cfg.horizon = cls_horizon;
            return run_and_report(cfg);
        }
        if (channels->parsed()) {
            auto cfg = load_base_config(gf, nlw::ExperimentKind::Channels);
            if (gf.config_path.empty()) {
                cfg.r_max = 16.0;
                cfg.m = 513;
            }
            if (ch_seeds > 0) cfg.n_seeds = ch_seeds;
            return run_and_report(cfg);
        }
        if (decompose->parsed()) {
            auto cfg = load_base_config(gf, nlw::ExperimentKind::Decompose);
            if (gf.config_path.empty()) {
                cfg.r_max = 2000.0;
                cfg.m = 4097;
                cfg.stretch = 14.0;
            }
            if (!dec_input.empty()) cfg.input_snapshot = dec_input;
            return run_and_report(cfg);
        }
        if (verify->parsed()) {
            auto cfg = load_base_config(gf, nlw::ExperimentKind::VerifyInequalities);
            if (gf.config_path.empty()) {
                cfg.r_max = 20000.0;
                cfg.m = 2049;
                cfg.stretch = 14.0;
            }
            if (ver_samples > 0) cfg.n_samples = ver_samples;
            return run_and_report(cfg);
        }
        if (counter->parsed()) {
            auto cfg = load_base_config(gf, nlw::ExperimentKind::Counterexample);
            if (gf.config_path.empty()) {
                cfg.r_max = 80.0;
                cfg.m = 1281;
            }
            return run_and_report(cfg);
        }
        if (concentration->parsed()) {
            auto cfg = load_base_config(gf, nlw::ExperimentKind::Concentration);
            if (gf.config_path.empty()) {
                cfg.r_max = 10.0;
                cfg.m = 2049;
                cfg.stretch = 26.0;
            }
            if (conc_exponent >= 0.0) cfg.collapse_exponent = conc_exponent;
            return run_and_report(cfg);
        }
    } catch (const nlw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlw::NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
