#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bmdisc/rng.hpp"

namespace bmdisc {

/**
 * Brownian path observed on the uniform mesh {k / n}.
 *
 * times[k] = k / n starting at 0 and strictly increasing; values has the same
 * length.  mu and sigma record the law the path was drawn from.
 */
struct PathGrid {
    std::int64_t n = 1;
    double mu = 0.0;
    double sigma = 1.0;
    std::vector<double> times;
    std::vector<double> values;
};

/**
 * Upper barrier: either a constant level or a nondecreasing C1 function with
 * b(0) > 0.  The function form carries no derivative; callers that need slopes
 * difference the values.
 */
struct BarrierSpec {
    bool is_constant = true;
    double level = 1.0;
    std::function<double(double)> fn;

    static BarrierSpec constant(double level);
    static BarrierSpec function(std::function<double(double)> fn);

    double operator()(double t) const {
        return is_constant ? level : fn(t);
    }
};

/** Bessel(3) path sampled at increasing positive offsets. */
struct BesselGrid {
    std::vector<double> times;
    std::vector<double> values;
};

/**
 * Brownian path with drift mu and volatility sigma on {k / n} covering
 * [0, horizon].  sigma = 0 produces the deterministic drift line, which test
 * fixtures use; sigma < 0 is rejected.
 */
PathGrid sample_bm_grid(Stream& s, std::int64_t n, double horizon, double mu,
                        double sigma);

/**
 * Inserts 2^depth - 1 conditionally drawn midpoints per interval.
 *
 * Original values are carried over bit-exactly; each halving level draws
 * midpoints as N(neighbor average, sigma^2 * spacing / 4).
 */
PathGrid refine_bridge(const PathGrid& grid, int depth, Stream& s);

/**
 * Probability that a Brownian bridge between (0, x0) and (delta, x1) with
 * volatility sigma reaches `level`: 1 when an endpoint is already at or above
 * the level, else exp(-2 (level - x0)(level - x1) / (sigma^2 delta)).
 */
double bridge_cross_prob(double x0, double x1, double level, double delta,
                         double sigma);

/**
 * Exact draw of the minimum of a Brownian bridge between (0, x0) and
 * (delta, x1): m = (x0 + x1 - sqrt((x0 - x1)^2 - 2 sigma^2 delta ln V)) / 2
 * with V uniform.  Clamped to min(x0, x1) so rounding can never report a
 * minimum above an endpoint.
 */
double bridge_min_sample(Stream& s, double x0, double x1, double delta,
                         double sigma);

/**
 * Exact draw of the first-passage time to `level` inside a bridge interval,
 * given that the bridge does cross.  Requires x0 < level; x1 may be on either
 * side.  Returns the offset in (0, delta).
 *
 * The conditional density factors into a first-passage kernel from x0 and a
 * free Gaussian kernel to x1, which maps to a generalized inverse-Gaussian
 * law samplable through one inverse-Gaussian draw.
 */
double bridge_cross_time_sample(Stream& s, double x0, double x1, double level,
                                double delta, double sigma);

/**
 * Exact draw of the location of the bridge minimum, given endpoints and the
 * already-sampled minimum value m < min(x0, x1).  Returns the offset in
 * (0, delta).
 *
 * Conditioned on its minimum the bridge splits into two first-passage legs,
 * which makes the location a two-component inverse-Gaussian mixture.
 */
double bridge_argmin_time_sample(Stream& s, double x0, double x1, double m,
                                 double delta, double sigma);

/** Bessel(3) values from the origin at the given increasing positive offsets. */
BesselGrid sample_bessel3_at(Stream& s, const std::vector<double>& times);

/** Reflection map: values[k] minus the running minimum up to k. */
PathGrid reflect(const PathGrid& grid);

/**
 * Elapsed time since the running minimum was last attained, the discrete
 * analog of the busy-period functional.
 */
PathGrid busy_period(const PathGrid& grid);

/** CSV serialization, header "time,value", 17 significant digits. */
std::string path_to_csv(const PathGrid& grid);

/** Rebuilds a PathGrid from path_to_csv output plus its metadata. */
PathGrid path_from_csv(const std::string& csv, std::int64_t n, double mu,
                       double sigma);

}  // namespace bmdisc
