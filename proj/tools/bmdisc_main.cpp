#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bmdisc/acceptance.hpp"
#include "bmdisc/correction.hpp"
#include "bmdisc/experiment.hpp"
#include "bmdisc/rng.hpp"

namespace {

/**
 * Pending command-line overrides, applied on top of an optional config
 * file so flags always win.  Stored as strings and funneled through the
 * same parser as the file to keep one validation path.
 */
struct Overrides {
    std::map<std::string, std::string> entries;

    void add_flag(CLI::App* cmd, const std::string& key,
                  const std::string& desc) {
        cmd->add_option_function<std::string>(
            "--" + key,
            [this, key](const std::string& v) { entries[key] = v; }, desc);
    }
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
    ov.add_flag(cmd, "n", "mesh points per unit time / walk horizon");
    ov.add_flag(cmd, "a", "time horizon");
    ov.add_flag(cmd, "mu", "drift");
    ov.add_flag(cmd, "sigma", "volatility");
    ov.add_flag(cmd, "m", "barrier level");
    ov.add_flag(cmd, "nu", "walk drift");
    ov.add_flag(cmd, "eps", "truncation certification bound");
    ov.add_flag(cmd, "depth", "refinement depth for nonconstant barriers");
    ov.add_flag(cmd, "y", "terminal threshold");
    ov.add_flag(cmd, "samples", "number of Monte Carlo samples");
    ov.add_flag(cmd, "seed", "stream seed");
    ov.add_flag(cmd, "shards", "worker count (never changes results)");
    ov.add_flag(cmd, "max-steps", "walk step cap before discarding a draw");
    ov.add_flag(cmd, "out", "output directory (default $BMDISC_OUT or .)");
    ov.add_flag(cmd, "format", "sample dump format: csv or json");
}

int run_and_emit(bmdisc::ExperimentConfig cfg, const Overrides& ov) {
    for (const auto& [key, value] : ov.entries) {
        // CLI11 flag spelling uses '-', the config file uses '_'.
        std::string k = key == "max-steps" ? "max_steps" : key;
        bmdisc::apply_config_entry(cfg, k, value);
    }
    bmdisc::ExperimentResult r = bmdisc::run_experiment(cfg);
    std::vector<std::string> written = bmdisc::emit_result(cfg, r);
    std::cout << r.report.dump(2) << "\n";
    for (const auto& path : written) {
        std::fprintf(stderr, "wrote %s\n", path.c_str());
    }
    std::fprintf(stderr, "wall_seconds=%.3f\n", r.wall_seconds);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Discretization-error experiments for Brownian hitting and minimum "
        "events"};
    app.require_subcommand(1);

    // simulate: any experiment kind from a config file and/or flags
    auto* simulate = app.add_subcommand(
        "simulate", "run one experiment and write its report and samples");
    std::string config_path;
    simulate->add_option("--config", config_path,
                         "flat key=value config file");
    Overrides sim_ov;
    sim_ov.add_flag(simulate, "kind",
                    "hit | min_finite | min_infinite | overshoot | "
                    "running_min | vanishing_drift | limit_hit | limit_min | "
                    "correction");
    add_common_flags(simulate, sim_ov);

    // limit: shorthand for the two limit-law reference samplers
    auto* limit = app.add_subcommand(
        "limit", "draw from a limiting error law (hit or min)");
    std::string law = "hit";
    limit->add_option("--law", law, "hit or min")
        ->check(CLI::IsMember({"hit", "min"}));
    Overrides limit_ov;
    add_common_flags(limit, limit_ov);

    // verify: the pinned acceptance suite
    auto* verify = app.add_subcommand(
        "verify", "run the full verification suite with pinned seeds");

    // correct: closed-form barrier correction vs Monte Carlo
    auto* correct = app.add_subcommand(
        "correct", "discrete barrier probability: closed forms vs Monte Carlo");
    double cb = 2.0, cy = 1.9, ct = 1.0, cmu = 0.0, csigma = 1.0;
    std::int64_t cn = 50, cmc = 100000;
    std::uint64_t cseed = 1;
    correct->add_option("--b", cb, "barrier level (> 0)");
    correct->add_option("--y", cy, "terminal threshold (<= b)");
    correct->add_option("--t", ct, "horizon");
    correct->add_option("--n", cn, "monitoring points per unit time");
    correct->add_option("--mu", cmu, "drift");
    correct->add_option("--sigma", csigma, "volatility");
    correct->add_option("--mc-samples", cmc, "Monte Carlo sample count");
    correct->add_option("--seed", cseed, "stream seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            bmdisc::ExperimentConfig cfg;
            if (!config_path.empty()) {
                cfg = bmdisc::parse_config_file(config_path);
            }
            return run_and_emit(cfg, sim_ov);
        }
        if (limit->parsed()) {
            bmdisc::ExperimentConfig cfg;
            cfg.kind = law == "hit" ? bmdisc::ExperimentKind::limit_hit
                                    : bmdisc::ExperimentKind::limit_min;
            return run_and_emit(cfg, limit_ov);
        }
        if (verify->parsed()) {
            bool all_pass = true;
            auto results = bmdisc::run_acceptance(
                [&all_pass](const bmdisc::CriterionResult& r) {
                    all_pass = all_pass && r.pass;
                    std::printf("[%s] %2d %s: %s\n", r.pass ? "PASS" : "FAIL",
                                r.id, r.name.c_str(), r.detail.c_str());
                    std::fflush(stdout);
                });
            nlohmann::ordered_json out;
            out["pass"] = all_pass;
            out["failures"] = bmdisc::failures_json(results);
            std::cout << out.dump(2) << "\n";
            return all_pass ? 0 : 1;
        }
        if (correct->parsed()) {
            bmdisc::BarrierQuery q{cb, cy, ct, cn, cmu, csigma};
            double uncorrected = bmdisc::joint_cross_terminal_prob(q, true);
            double corrected = bmdisc::joint_cross_terminal_prob(q, false);
            bmdisc::McEstimate mc = bmdisc::mc_discrete_prob(cseed, q, cmc);
            nlohmann::ordered_json out;
            out["uncorrected"] = uncorrected;
            out["corrected"] = corrected;
            out["mc_estimate"] = mc.estimate;
            out["mc_se"] = mc.se;
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
