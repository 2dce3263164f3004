#pragma once

#include <cstdint>

#include "bmdisc/rng.hpp"

namespace bmdisc {

/**
 * First-crossing problem for a Gaussian walk against a constant level.
 *
 * The walk is the restriction of a Brownian motion (drift, sigma) to the mesh
 * {k * mesh}; the continuous first passage refers to that Brownian motion.
 * `strict` selects > instead of >= for the walk crossing rule.
 */
struct CrossingConfig {
    double start = 0.0;
    double level = 1.0;
    double drift = 0.0;
    double sigma = 1.0;
    double mesh = 1.0;
    bool strict = false;
    bool need_continuous = true;
    // Stop as soon as the continuous passage is located instead of running on
    // to the walk crossing; hit_index and hit_value are then unspecified.
    bool stop_at_continuous = false;
    std::int64_t max_steps = 1'000'000'000;
};

/**
 * hit_index is the first mesh index whose value crosses the level and
 * hit_value the walk value there.  When continuous passage was requested,
 * cont_interval and cont_theta locate it: the passage time is
 * cont_interval * mesh + cont_theta with cont_theta in (0, mesh), except
 * for an immediate crossing at index 0 where both are zero.
 */
struct CrossingResult {
    std::int64_t hit_index = 0;
    double hit_value = 0.0;
    std::int64_t cont_interval = 0;
    double cont_theta = 0.0;
};

/**
 * Runs the walk to its first crossing.
 *
 * Far below the level the walk advances in blocks whose endpoints certify,
 * through the exact bridge-maximum bound, that no intermediate mesh point and
 * no continuous excursion reached the level; blocks that cannot certify are
 * resolved by recursive bridge bisection down to single mesh intervals, where
 * crossing indicators and passage times are drawn from their exact laws.  The
 * certification threshold leaves a missed-crossing probability below 1e-30
 * per block.  Throws step_cap_exceeded if max_steps mesh points pass without
 * a crossing; the stopping time is almost surely finite but heavy tailed, so
 * callers treat that as a countable discard, not a fatal error.
 */
CrossingResult simulate_crossing(Stream& s, const CrossingConfig& cfg);

}  // namespace bmdisc
