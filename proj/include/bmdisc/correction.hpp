#ifndef BMDISC_CORRECTION_HPP
#define BMDISC_CORRECTION_HPP

#include <cstdint>

namespace bmdisc {

/**
 * A discretely monitored barrier-crossing query: probability that the path
 * exceeds `level` by time `t` while ending above `y`, monitored at mesh
 * 1/n.  `t` must sit on the monitoring mesh.
 */
struct BarrierQuery {
    double level = 1.0;
    double y = 0.0;
    double t = 1.0;
    std::int64_t n = 1;
    double mu = 0.0;
    double sigma = 1.0;
};

/**
 * Closed-form P(B(t) > y, max over [0,t] >= barrier) for drifted Brownian
 * motion.  With `continuous` true the barrier is `level` itself (the naive
 * stand-in for the monitored probability); false evaluates at the shifted
 * barrier level + sigma * beta / sqrt(n), the continuity-corrected
 * approximation of the discretely monitored event.
 */
double joint_cross_terminal_prob(const BarrierQuery& q, bool continuous);

struct McEstimate {
    double estimate = 0.0;
    double se = 0.0;
};

/**
 * Monte Carlo frequency of the discretely monitored event {some grid value
 * >= level by time t and grid value at t > y}, with binomial standard
 * error.  Sample i draws from substream (seed, i), so the result does not
 * depend on how callers batch the work.
 */
McEstimate mc_discrete_prob(std::uint64_t seed, const BarrierQuery& q,
                            std::int64_t num_samples);

}  // namespace bmdisc

#endif  // BMDISC_CORRECTION_HPP
