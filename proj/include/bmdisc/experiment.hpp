#ifndef BMDISC_EXPERIMENT_HPP
#define BMDISC_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bmdisc {

enum class ExperimentKind {
    hit,
    min_finite,
    min_infinite,
    overshoot,
    running_min,
    vanishing_drift,
    limit_hit,
    limit_min,
    correction,
};

ExperimentKind kind_from_string(const std::string& name);
std::string kind_to_string(ExperimentKind kind);

/**
 * One experiment run, fully determined by the fields below.  `shards` is a
 * batching knob only: sample i always draws from substream (seed, i), so
 * any shard count produces byte-identical output.
 */
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::limit_hit;
    std::int64_t n = 4096;     // mesh points per unit time / walk horizon
    double a = 1.0;            // time horizon (min_finite; t for correction)
    double mu = 0.0;           // drift
    double sigma = 1.0;
    double m = 1.0;            // barrier level (hit, overshoot, correction)
    double nu = 0.015625;      // walk drift (overshoot, vanishing_drift)
    double eps = 1e-6;         // truncation certification bound
    int depth = 11;            // refinement depth for nonconstant barriers
    double y = 0.0;            // terminal threshold (correction)
    std::int64_t samples = 10000;
    std::uint64_t seed = 1;
    int shards = 1;
    std::int64_t max_steps = std::int64_t{1} << 35;
    std::string out;           // output directory; empty = $BMDISC_OUT or "."
    std::string format = "csv";
};

/** Parses a flat key=value config file ('#' starts a comment). */
ExperimentConfig parse_config_file(const std::string& path);

/** Applies one key=value override; throws invalid_parameter on unknown keys. */
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

struct ExperimentResult {
    std::vector<std::string> columns;
    std::vector<double> data;  // row-major accepted samples
    std::int64_t requested = 0;
    std::int64_t accepted = 0;
    std::int64_t discards = 0;
    nlohmann::ordered_json report;
    double wall_seconds = 0.0;  // never serialized: reports stay reproducible

    std::size_t width() const { return columns.size(); }
    /** Copies one column out of the row-major sample block. */
    std::vector<double> column(std::size_t c) const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/** Sample dump, header row plus one %.17g-formatted line per sample. */
std::string samples_to_csv(const ExperimentResult& r);

/**
 * Writes <out>/<kind>.json (report) and, for format "csv", <out>/<kind>.csv
 * (sample dump).  Creates the output directory if needed and returns the
 * written paths.
 */
std::vector<std::string> emit_result(const ExperimentConfig& cfg,
                                     const ExperimentResult& r);

}  // namespace bmdisc

#endif  // BMDISC_EXPERIMENT_HPP
