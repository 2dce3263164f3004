#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace bmdisc {

/**
 * Moment and quantile digest of one sample component.
 *
 * Quantiles use the inverse empirical CDF convention: q(p) is the ceil(p*N)-th
 * order statistic.  variance is the unbiased (N-1) estimator, 0 when N < 2.
 * ks and slope are filled only by callers that computed them.
 */
struct EmpiricalSummary {
    std::uint64_t count = 0;
    double mean = 0.0;
    double variance = 0.0;
    double q01 = 0.0;
    double q05 = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
    double q99 = 0.0;
    std::optional<double> ks;
    std::optional<double> slope;
};

/** Digest of a nonempty sample. */
EmpiricalSummary summarize(std::span<const double> samples);

/** JSON form with the fixed field names count, mean, variance, q01..q99, ks, slope. */
nlohmann::ordered_json summary_to_json(const EmpiricalSummary& s);

/**
 * Exact two-sample Kolmogorov-Smirnov distance.
 *
 * Sweeps the merged order statistics, advancing past ties in both samples
 * before each CDF comparison, so tied values are handled exactly.
 */
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/** Exact one-sample Kolmogorov-Smirnov distance against U(0, 1); samples must lie in [0, 1]. */
double ks_vs_uniform(std::span<const double> samples);

/** Sample mean and CLT half-width at the given two-sided confidence level. */
struct MeanCi {
    double mean;
    double half_width;
};
MeanCi mean_ci(std::span<const double> samples, double level);

/**
 * Least-squares slope of log(median) against log(n).
 *
 * Requires at least three distinct positive n values and positive medians.
 */
double median_rate_slope(std::span<const double> ns,
                         std::span<const double> medians);

/**
 * The constant -zeta(1/2) / sqrt(2*pi) = 0.582597157939...
 *
 * zeta(1/2) comes from the alternating eta series accelerated by repeated
 * averaging of partial sums (van Wijngaarden / Euler transform) in long
 * double arithmetic.  The same machinery is self-checked against
 * zeta(2) = pi^2 / 6 on first use, and the result is cached.
 */
double beta_constant();

/** Standard normal CDF. */
double normal_cdf(double x);

/** Standard normal quantile, accurate to full double precision. */
double normal_quantile(double p);

}  // namespace bmdisc
