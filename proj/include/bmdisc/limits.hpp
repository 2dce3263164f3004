#pragma once

#include "bmdisc/rng.hpp"

namespace bmdisc {

/**
 * One draw from a limiting error law.
 *
 * u is the uniform fractional part, time_comp = u + k for an integer k, and
 * pos_comp is the position component (almost surely positive).  The hitting
 * limit has k >= 0; the minimum limit ranges over all integers.
 */
struct LimitTriplet {
    double time_comp = 0.0;
    double pos_comp = 0.0;
    double u = 0.0;
};

/**
 * Limit law of hitting errors: the equilibrium Gaussian walk started at
 * sqrt(U) * N(0,1) and stopped at its first strictly positive value, with
 * time component U + stopping index and position sigma * (stopped value).
 *
 * The stopping index is almost surely finite but has no finite mean; a
 * step cap of 1e9 guards the loop and raises step_cap_exceeded, which
 * callers count as a discard (about 1.8e-5 of draws reach the cap).
 */
LimitTriplet sample_hit_limit(Stream& s, double sigma);

/**
 * Limit law of minimum errors: position sigma * min over integer-shifted
 * offsets U + k, k in Z, of a two-sided Bessel(3) process, and time
 * component U + argmin.
 *
 * Both one-sided legs are extended until an exact certificate rules out any
 * further value below the running minimum: from radius r the return
 * probability is exactly min / r (the Bessel(3) scale function), and a
 * returning leg runs as plain Brownian motion until it reaches the minimum
 * level, after which the Bessel law resumes.  The truncation therefore
 * introduces no bias for any eps; eps is validated against its (0, 1)
 * contract and recorded but does not influence the draw.
 */
LimitTriplet sample_min_limit(Stream& s, double sigma, double eps);

}  // namespace bmdisc
