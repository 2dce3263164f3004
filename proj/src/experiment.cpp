#include "bmdisc/experiment.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "bmdisc/analysis.hpp"
#include "bmdisc/correction.hpp"
#include "bmdisc/events.hpp"
#include "bmdisc/limits.hpp"
#include "bmdisc/paths.hpp"
#include "bmdisc/walks.hpp"

namespace bmdisc {

namespace {

constexpr std::size_t kMaxWidth = 3;

// Substream index block reserved for reference draws, so a report's
// comparison sample never overlaps the experiment's own substreams.
constexpr std::uint64_t kReferenceBlock = std::uint64_t{1} << 32;

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/**
 * Fills `row` with one accepted draw or returns false to record a discard.
 * Implementations must consume randomness only through `s`.
 */
using SampleFn = std::function<bool(Stream& s, std::array<double, kMaxWidth>& row)>;

struct KindPlan {
    std::vector<std::string> columns;
    SampleFn draw;
    // Limit experiment whose law the sample columns should match, if any.
    std::optional<ExperimentKind> reference;
};

KindPlan make_plan(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::hit:
            return {{"time_err", "pos_err", "frac"},
                    [&cfg](Stream& s, auto& row) {
                        auto t = error_triplet_hit(s, cfg.n, cfg.m, cfg.mu,
                                                   cfg.sigma, cfg.max_steps);
                        if (!t) return false;
                        row = {t->time_err, t->pos_err, t->frac};
                        return true;
                    },
                    ExperimentKind::limit_hit};
        case ExperimentKind::min_finite:
            return {{"time_err", "pos_err", "frac"},
                    [&cfg](Stream& s, auto& row) {
                        PathGrid p = sample_bm_grid(s, cfg.n, cfg.a, cfg.mu,
                                                    cfg.sigma);
                        ErrorTriplet t = error_triplet_min(s, p);
                        row = {t.time_err, t.pos_err, t.frac};
                        return true;
                    },
                    ExperimentKind::limit_min};
        case ExperimentKind::min_infinite:
            return {{"time_err", "pos_err", "frac"},
                    [&cfg](Stream& s, auto& row) {
                        ErrorTriplet t = error_triplet_globalmin(
                            s, cfg.mu, cfg.sigma, cfg.n, cfg.eps);
                        row = {t.time_err, t.pos_err, t.frac};
                        return true;
                    },
                    ExperimentKind::limit_min};
        case ExperimentKind::overshoot:
            return {{"first", "second"},
                    [&cfg](Stream& s, auto& row) {
                        auto p = overshoot_pair(s, cfg.m, cfg.sigma, cfg.nu,
                                                cfg.max_steps);
                        if (!p) return false;
                        row = {p->first, p->second, 0.0};
                        return true;
                    },
                    ExperimentKind::limit_hit};
        case ExperimentKind::running_min:
            return {{"first", "second"},
                    [&cfg](Stream& s, auto& row) {
                        WalkPair p = running_min_pair(s, cfg.n, cfg.sigma);
                        row = {p.first, p.second, 0.0};
                        return true;
                    },
                    ExperimentKind::limit_min};
        case ExperimentKind::vanishing_drift:
            return {{"first", "second"},
                    [&cfg](Stream& s, auto& row) {
                        WalkPair p = vanishing_drift_pair(s, cfg.nu, cfg.sigma,
                                                          cfg.eps);
                        row = {p.first, p.second, 0.0};
                        return true;
                    },
                    ExperimentKind::limit_min};
        case ExperimentKind::limit_hit:
            return {{"time_comp", "pos_comp", "u"},
                    [&cfg](Stream& s, auto& row) {
                        try {
                            LimitTriplet t = sample_hit_limit(s, cfg.sigma);
                            row = {t.time_comp, t.pos_comp, t.u};
                            return true;
                        } catch (const step_cap_exceeded&) {
                            return false;
                        }
                    },
                    std::nullopt};
        case ExperimentKind::limit_min:
            return {{"time_comp", "pos_comp", "u"},
                    [&cfg](Stream& s, auto& row) {
                        try {
                            LimitTriplet t =
                                sample_min_limit(s, cfg.sigma, cfg.eps);
                            row = {t.time_comp, t.pos_comp, t.u};
                            return true;
                        } catch (const step_cap_exceeded&) {
                            return false;
                        }
                    },
                    std::nullopt};
        case ExperimentKind::correction:
            break;
    }
    throw internal_error("make_plan: unreachable kind");
}

struct SampleBlock {
    std::vector<double> data;      // requested * width, row-major
    std::vector<std::uint8_t> ok;  // per-sample accept flag
};

/**
 * Draws `count` samples starting at substream `first`, split across
 * cfg.shards workers by round-robin index.  Results land in per-index
 * slots, so the assembled block does not depend on the shard count.
 */
SampleBlock draw_block(const ExperimentConfig& cfg, const KindPlan& plan,
                       std::uint64_t first, std::int64_t count) {
    SampleBlock block;
    const std::size_t w = plan.columns.size();
    block.data.assign(static_cast<std::size_t>(count) * w, 0.0);
    block.ok.assign(static_cast<std::size_t>(count), 0);

    auto worker = [&](int shard) {
        std::array<double, kMaxWidth> row{};
        for (std::int64_t i = shard; i < count; i += cfg.shards) {
            Stream s = create_stream(cfg.seed, first + static_cast<std::uint64_t>(i));
            if (plan.draw(s, row)) {
                block.ok[static_cast<std::size_t>(i)] = 1;
                for (std::size_t c = 0; c < w; ++c) {
                    block.data[static_cast<std::size_t>(i) * w + c] = row[c];
                }
            }
        }
    };

    if (cfg.shards == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(cfg.shards));
        for (int shard = 0; shard < cfg.shards; ++shard) {
            pool.emplace_back(worker, shard);
        }
        for (auto& t : pool) t.join();
    }
    return block;
}

void compact_block(const SampleBlock& block, std::size_t w,
                   std::vector<double>& out, std::int64_t& accepted) {
    accepted = 0;
    out.clear();
    out.reserve(block.ok.size() * w);
    for (std::size_t i = 0; i < block.ok.size(); ++i) {
        if (!block.ok[i]) continue;
        ++accepted;
        for (std::size_t c = 0; c < w; ++c) {
            out.push_back(block.data[i * w + c]);
        }
    }
}

std::vector<double> extract_column(const std::vector<double>& data,
                                   std::size_t w, std::size_t c) {
    std::vector<double> col;
    col.reserve(data.size() / w);
    for (std::size_t i = c; i < data.size(); i += w) col.push_back(data[i]);
    return col;
}

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["kind"] = kind_to_string(cfg.kind);
    j["n"] = cfg.n;
    j["a"] = cfg.a;
    j["mu"] = cfg.mu;
    j["sigma"] = cfg.sigma;
    j["m"] = cfg.m;
    j["nu"] = cfg.nu;
    j["eps"] = cfg.eps;
    j["depth"] = cfg.depth;
    j["y"] = cfg.y;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["shards"] = cfg.shards;
    j["max_steps"] = cfg.max_steps;
    j["format"] = cfg.format;
    return j;
}

ExperimentResult run_correction(const ExperimentConfig& cfg) {
    ExperimentResult r;
    r.requested = cfg.samples;
    BarrierQuery q{cfg.m, cfg.y, cfg.a, cfg.n, cfg.mu, cfg.sigma};
    double uncorrected = joint_cross_terminal_prob(q, true);
    double corrected = joint_cross_terminal_prob(q, false);
    McEstimate mc = mc_discrete_prob(cfg.seed, q, cfg.samples);
    r.accepted = cfg.samples;

    r.report["config"] = config_json(cfg);
    nlohmann::ordered_json c;
    c["uncorrected"] = uncorrected;
    c["corrected"] = corrected;
    c["mc_estimate"] = mc.estimate;
    c["mc_se"] = mc.se;
    c["err_uncorrected"] = mc.estimate - uncorrected;
    c["err_corrected"] = mc.estimate - corrected;
    r.report["correction"] = c;
    return r;
}

/**
 * Column pairing for reference comparisons.  Triplet experiments carry a
 * uniform fractional part that is tested against U(0, 1) directly; walk
 * pairs map (first, second) onto the limit's (time, position) components.
 */
struct ReferenceMap {
    std::size_t time_col;
    std::size_t pos_col;
    std::optional<std::size_t> frac_col;
};

ReferenceMap reference_map(const KindPlan& plan) {
    if (plan.columns.size() == 2) return {0, 1, std::nullopt};
    return {0, 1, 2};
}

}  // namespace

ExperimentKind kind_from_string(const std::string& name) {
    if (name == "hit") return ExperimentKind::hit;
    if (name == "min_finite") return ExperimentKind::min_finite;
    if (name == "min_infinite") return ExperimentKind::min_infinite;
    if (name == "overshoot") return ExperimentKind::overshoot;
    if (name == "running_min") return ExperimentKind::running_min;
    if (name == "vanishing_drift") return ExperimentKind::vanishing_drift;
    if (name == "limit_hit") return ExperimentKind::limit_hit;
    if (name == "limit_min") return ExperimentKind::limit_min;
    if (name == "correction") return ExperimentKind::correction;
    throw invalid_parameter("unknown experiment kind: " + name);
}

std::string kind_to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::hit: return "hit";
        case ExperimentKind::min_finite: return "min_finite";
        case ExperimentKind::min_infinite: return "min_infinite";
        case ExperimentKind::overshoot: return "overshoot";
        case ExperimentKind::running_min: return "running_min";
        case ExperimentKind::vanishing_drift: return "vanishing_drift";
        case ExperimentKind::limit_hit: return "limit_hit";
        case ExperimentKind::limit_min: return "limit_min";
        case ExperimentKind::correction: return "correction";
    }
    throw internal_error("kind_to_string: unreachable kind");
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    try {
        if (key == "kind") {
            cfg.kind = kind_from_string(value);
        } else if (key == "n") {
            cfg.n = std::stoll(value);
        } else if (key == "a") {
            cfg.a = std::stod(value);
        } else if (key == "mu") {
            cfg.mu = std::stod(value);
        } else if (key == "sigma") {
            cfg.sigma = std::stod(value);
        } else if (key == "m") {
            cfg.m = std::stod(value);
        } else if (key == "nu") {
            cfg.nu = std::stod(value);
        } else if (key == "eps") {
            cfg.eps = std::stod(value);
        } else if (key == "depth") {
            cfg.depth = std::stoi(value);
        } else if (key == "y") {
            cfg.y = std::stod(value);
        } else if (key == "samples") {
            cfg.samples = std::stoll(value);
        } else if (key == "seed") {
            cfg.seed = std::stoull(value);
        } else if (key == "shards") {
            cfg.shards = std::stoi(value);
        } else if (key == "max_steps") {
            cfg.max_steps = std::stoll(value);
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "format") {
            if (value != "csv" && value != "json") {
                throw invalid_parameter("format must be csv or json, got " +
                                        value);
            }
            cfg.format = value;
        } else {
            throw invalid_parameter("unknown config key: " + key);
        }
    } catch (const std::invalid_argument&) {
        throw invalid_parameter("config key " + key +
                                ": cannot parse value '" + value + "'");
    } catch (const std::out_of_range&) {
        throw invalid_parameter("config key " + key + ": value '" + value +
                                "' out of range");
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw invalid_parameter("cannot open config file: " + path);
    }
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw invalid_parameter(path + ":" + std::to_string(lineno) +
                                    ": expected key=value, got '" + line + "'");
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{}
                                          : s.substr(b, e - b + 1);
        };
        apply_config_entry(cfg, trim(line.substr(0, eq)),
                           trim(line.substr(eq + 1)));
    }
    return cfg;
}

std::vector<double> ExperimentResult::column(std::size_t c) const {
    if (c >= width()) {
        throw invalid_parameter("column index out of range");
    }
    return extract_column(data, width(), c);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.samples <= 0) {
        throw invalid_parameter("samples must be positive");
    }
    if (cfg.shards < 1) {
        throw invalid_parameter("shards must be at least 1");
    }
    auto t0 = std::chrono::steady_clock::now();

    if (cfg.kind == ExperimentKind::correction) {
        ExperimentResult r = run_correction(cfg);
        r.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return r;
    }

    KindPlan plan = make_plan(cfg);
    const std::size_t w = plan.columns.size();

    ExperimentResult r;
    r.columns = plan.columns;
    r.requested = cfg.samples;
    SampleBlock block = draw_block(cfg, plan, 0, cfg.samples);
    compact_block(block, w, r.data, r.accepted);
    r.discards = r.requested - r.accepted;

    r.report["config"] = config_json(cfg);
    r.report["requested"] = r.requested;
    r.report["accepted"] = r.accepted;
    r.report["discards"] = r.discards;
    r.report["discard_fraction"] =
        static_cast<double>(r.discards) / static_cast<double>(r.requested);
    r.report["columns"] = r.columns;

    nlohmann::ordered_json summaries;
    for (std::size_t c = 0; c < w; ++c) {
        std::vector<double> col = extract_column(r.data, w, c);
        summaries[r.columns[c]] = summary_to_json(summarize(col));
    }
    r.report["summary"] = summaries;

    if (plan.reference && r.accepted > 0) {
        ExperimentConfig ref_cfg = cfg;
        ref_cfg.kind = *plan.reference;
        // Bounded reference sample: the comparison noise floor, not the
        // experiment budget, sets its size.
        ref_cfg.samples = std::min<std::int64_t>(cfg.samples, 100000);
        KindPlan ref_plan = make_plan(ref_cfg);
        SampleBlock ref_block =
            draw_block(ref_cfg, ref_plan, kReferenceBlock, ref_cfg.samples);
        std::vector<double> ref_data;
        std::int64_t ref_accepted = 0;
        compact_block(ref_block, 3, ref_data, ref_accepted);

        ReferenceMap map = reference_map(plan);
        nlohmann::ordered_json ks;
        ks["reference"] = kind_to_string(*plan.reference);
        ks["reference_samples"] = ref_accepted;
        ks["reference_discards"] = ref_cfg.samples - ref_accepted;
        std::vector<double> sample_time = extract_column(r.data, w, map.time_col);
        std::vector<double> sample_pos = extract_column(r.data, w, map.pos_col);
        std::vector<double> ref_time = extract_column(ref_data, 3, 0);
        std::vector<double> ref_pos = extract_column(ref_data, 3, 1);
        ks["time"] = ks_two_sample(sample_time, ref_time);
        ks["pos"] = ks_two_sample(sample_pos, ref_pos);
        if (map.frac_col) {
            std::vector<double> frac = extract_column(r.data, w, *map.frac_col);
            ks["frac_uniform"] = ks_vs_uniform(frac);
        }
        r.report["ks"] = ks;
    }

    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return r;
}

std::string samples_to_csv(const ExperimentResult& r) {
    std::string out;
    const std::size_t w = r.width();
    out.reserve(r.data.size() * 20 + 64);
    for (std::size_t c = 0; c < w; ++c) {
        if (c) out += ',';
        out += r.columns[c];
    }
    out += '\n';
    for (std::size_t i = 0; i + w <= r.data.size(); i += w) {
        for (std::size_t c = 0; c < w; ++c) {
            if (c) out += ',';
            out += format_g17(r.data[i + c]);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::string> emit_result(const ExperimentConfig& cfg,
                                     const ExperimentResult& r) {
    std::string dir = cfg.out;
    if (dir.empty()) {
        const char* env = std::getenv("BMDISC_OUT");
        dir = env && *env ? env : ".";
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw invalid_parameter("cannot create output directory " + dir +
                                ": " + ec.message());
    }
    std::string stem = kind_to_string(cfg.kind);
    std::vector<std::string> written;

    auto write_file = [&](const std::string& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw invalid_parameter("cannot open output file: " + path);
        }
        out << body;
        if (!out) {
            throw invalid_parameter("write failed: " + path);
        }
        written.push_back(path);
    };

    write_file(dir + "/" + stem + ".json", r.report.dump(2) + "\n");
    if (cfg.format == "csv" && !r.columns.empty()) {
        write_file(dir + "/" + stem + ".csv", samples_to_csv(r));
    }
    return written;
}

}  // namespace bmdisc
