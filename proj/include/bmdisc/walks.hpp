#ifndef BMDISC_WALKS_HPP
#define BMDISC_WALKS_HPP

#include <cstdint>
#include <optional>

#include "bmdisc/rng.hpp"

namespace bmdisc {

/**
 * One two-column comparison draw.  The coupled walk is the unit-mesh
 * restriction of the Brownian path it is compared against, so walk values
 * agree with the path at integer times by construction.
 */
struct WalkPair {
    double first = 0.0;
    double second = 0.0;
};

/**
 * Level crossing of the walk versus its Brownian interpolation: first is
 * the time lag (walk crossing step minus exact path crossing time), second
 * the walk's overshoot above the level.  Empty when the step cap is hit
 * before a crossing (counted by callers as a discard).
 */
std::optional<WalkPair> overshoot_pair(Stream& s, double m, double sigma,
                                       double nu, std::int64_t max_steps);

/** Running minimum over [0, n]: (argmin lag, walk min minus path min). */
WalkPair running_min_pair(Stream& s, std::int64_t n, double sigma);

/**
 * Global minima under positive drift nu, on a path truncated once the
 * level has risen (sigma^2 / (2 nu)) * ln(1/eps) above the running minimum.
 */
WalkPair vanishing_drift_pair(Stream& s, double nu, double sigma, double eps);

}  // namespace bmdisc

#endif  // BMDISC_WALKS_HPP
