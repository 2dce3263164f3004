#include <cmath>
#include <vector>

#include <doctest.h>

#include "bmdisc/analysis.hpp"
#include "bmdisc/crossing.hpp"
#include "bmdisc/rng.hpp"

using namespace bmdisc;

namespace {

CrossingConfig walk_config(double level, double drift, double sigma) {
    CrossingConfig cfg;
    cfg.start = 0.0;
    cfg.level = level;
    cfg.drift = drift;
    cfg.sigma = sigma;
    cfg.mesh = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("same seed reproduces the same crossing") {
    CrossingConfig cfg = walk_config(5.0, 0.0, 1.0);
    Stream a = create_stream(301, 0);
    Stream b = create_stream(301, 0);
    CrossingResult ra = simulate_crossing(a, cfg);
    CrossingResult rb = simulate_crossing(b, cfg);
    CHECK(ra.hit_index == rb.hit_index);
    CHECK(ra.hit_value == rb.hit_value);
}

TEST_CASE("block-skipped walk agrees with a naive step loop") {
    // The engine certifies and skips whole blocks; the naive loop draws
    // every increment.  Same law, independent seeds, two-sample KS.  The
    // driftless hitting time is heavy tailed, so both routes censor at the
    // same step horizon and the conditioned laws still coincide.
    const double level = 6.5;
    const std::int64_t horizon = 1000000;
    const int count = 10000;
    std::vector<double> engine_idx, naive_idx;
    std::vector<double> engine_over, naive_over;
    CrossingConfig cfg = walk_config(level, 0.0, 1.0);
    cfg.max_steps = horizon;
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(302, static_cast<std::uint64_t>(i));
        try {
            CrossingResult r = simulate_crossing(s, cfg);
            CHECK(r.hit_value >= level);
            engine_idx.push_back(static_cast<double>(r.hit_index));
            engine_over.push_back(r.hit_value - level);
        } catch (const step_cap_exceeded&) {
        }
    }
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(303, static_cast<std::uint64_t>(i));
        double x = 0.0;
        std::int64_t j = 0;
        while (x < level && j < horizon) {
            x += sample_normal(s, 0.0, 1.0);
            ++j;
        }
        if (x < level) continue;
        naive_idx.push_back(static_cast<double>(j));
        naive_over.push_back(x - level);
    }
    CHECK(engine_idx.size() > count * 0.99);
    CHECK(naive_idx.size() > count * 0.99);
    CHECK(ks_two_sample(engine_idx, naive_idx) < 0.025);
    CHECK(ks_two_sample(engine_over, naive_over) < 0.025);
}

TEST_CASE("drifted crossing matches the naive loop as well") {
    const double level = 8.0, drift = 0.25;
    const int count = 20000;
    std::vector<double> engine_idx(count), naive_idx(count);
    CrossingConfig cfg = walk_config(level, drift, 1.0);
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(304, static_cast<std::uint64_t>(i));
        engine_idx[i] =
            static_cast<double>(simulate_crossing(s, cfg).hit_index);
    }
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(305, static_cast<std::uint64_t>(i));
        double x = 0.0;
        std::int64_t j = 0;
        while (x < level) {
            x += sample_normal(s, drift, 1.0);
            ++j;
        }
        naive_idx[i] = static_cast<double>(j);
    }
    CHECK(ks_two_sample(engine_idx, naive_idx) < 0.02);
}

TEST_CASE("continuous passage lies before the walk hit") {
    CrossingConfig cfg = walk_config(4.0, 0.1, 1.0);
    cfg.need_continuous = true;
    for (int i = 0; i < 2000; ++i) {
        Stream s = create_stream(306, static_cast<std::uint64_t>(i));
        CrossingResult r = simulate_crossing(s, cfg);
        CHECK(r.cont_interval <= r.hit_index);
        CHECK(r.cont_theta >= 0.0);
        CHECK(r.cont_theta <= cfg.mesh);
        // continuous time = interval * mesh + theta never exceeds hit time
        const double tc =
            static_cast<double>(r.cont_interval) * cfg.mesh + r.cont_theta;
        CHECK(tc <= static_cast<double>(r.hit_index) * cfg.mesh);
    }
}

TEST_CASE("a start at or above the level is an immediate crossing") {
    CrossingConfig cfg = walk_config(-1.0, 0.0, 1.0);
    Stream s = create_stream(307, 0);
    CrossingResult r = simulate_crossing(s, cfg);
    CHECK(r.hit_index == 0);
    CHECK(r.hit_value == 0.0);
    CHECK(r.cont_interval == 0);
    CHECK(r.cont_theta == 0.0);
}

TEST_CASE("step cap aborts instead of looping forever") {
    CrossingConfig cfg = walk_config(50.0, 0.0, 1.0);
    cfg.max_steps = 100;  // level 50 needs ~2500 steps, so this must trip
    Stream s = create_stream(308, 0);
    CHECK_THROWS_AS(simulate_crossing(s, cfg), step_cap_exceeded);
}

TEST_CASE("invalid crossing configs are rejected") {
    Stream s = create_stream(309, 0);
    CrossingConfig bad = walk_config(1.0, 0.0, -1.0);
    CHECK_THROWS_AS(simulate_crossing(s, bad), invalid_parameter);
    CrossingConfig bad2 = walk_config(1.0, 0.0, 1.0);
    bad2.stop_at_continuous = true;
    bad2.need_continuous = false;
    CHECK_THROWS_AS(simulate_crossing(s, bad2), invalid_parameter);
}
