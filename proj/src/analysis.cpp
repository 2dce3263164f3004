#include "bmdisc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bmdisc/rng.hpp"

namespace bmdisc {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const auto n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (rank == 0) {
        rank = 1;
    }
    if (rank > n) {
        rank = n;
    }
    return sorted[rank - 1];
}

/**
 * Alternating eta series eta(s) = sum (-1)^(n-1) n^(-s), accelerated by
 * repeatedly averaging adjacent partial sums.  Each averaging pass halves the
 * error for totally monotone terms, so `rows` passes reach 2^-rows.
 */
long double eta_accelerated(long double s, int rows) {
    std::vector<long double> t(static_cast<std::size_t>(rows) + 1);
    long double partial = 0.0L;
    for (int j = 0; j <= rows; ++j) {
        const long double n = static_cast<long double>(j + 1);
        const long double term = std::pow(n, -s);
        partial += (j % 2 == 0) ? term : -term;
        t[static_cast<std::size_t>(j)] = partial;
    }
    for (int k = rows; k >= 1; --k) {
        for (int j = 0; j < k; ++j) {
            const auto u = static_cast<std::size_t>(j);
            t[u] = 0.5L * (t[u] + t[u + 1]);
        }
    }
    return t[0];
}

long double zeta_via_eta(long double s, int rows) {
    return eta_accelerated(s, rows) / (1.0L - std::pow(2.0L, 1.0L - s));
}

}  // namespace

EmpiricalSummary summarize(std::span<const double> samples) {
    if (samples.empty()) {
        throw invalid_parameter("summarize: empty sample");
    }
    EmpiricalSummary out;
    out.count = samples.size();
    long double acc = 0.0L;
    for (double x : samples) {
        acc += x;
    }
    const double mean = static_cast<double>(acc / samples.size());
    out.mean = mean;
    if (samples.size() > 1) {
        long double ss = 0.0L;
        for (double x : samples) {
            const long double d = x - mean;
            ss += d * d;
        }
        out.variance = static_cast<double>(ss / (samples.size() - 1));
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    out.q01 = quantile_sorted(sorted, 0.01);
    out.q05 = quantile_sorted(sorted, 0.05);
    out.q25 = quantile_sorted(sorted, 0.25);
    out.q50 = quantile_sorted(sorted, 0.50);
    out.q75 = quantile_sorted(sorted, 0.75);
    out.q95 = quantile_sorted(sorted, 0.95);
    out.q99 = quantile_sorted(sorted, 0.99);
    return out;
}

nlohmann::ordered_json summary_to_json(const EmpiricalSummary& s) {
    nlohmann::ordered_json j;
    j["count"] = s.count;
    j["mean"] = s.mean;
    j["variance"] = s.variance;
    j["q01"] = s.q01;
    j["q05"] = s.q05;
    j["q25"] = s.q25;
    j["q50"] = s.q50;
    j["q75"] = s.q75;
    j["q95"] = s.q95;
    j["q99"] = s.q99;
    if (s.ks) {
        j["ks"] = *s.ks;
    } else {
        j["ks"] = nullptr;
    }
    if (s.slope) {
        j["slope"] = *s.slope;
    } else {
        j["slope"] = nullptr;
    }
    return j;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw invalid_parameter("ks_two_sample: empty sample");
    }
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < sa.size() || j < sb.size()) {
        double x;
        if (i >= sa.size()) {
            x = sb[j];
        } else if (j >= sb.size()) {
            x = sa[i];
        } else {
            x = std::min(sa[i], sb[j]);
        }
        while (i < sa.size() && sa[i] == x) {
            ++i;
        }
        while (j < sb.size() && sb[j] == x) {
            ++j;
        }
        d = std::max(d, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
    }
    return d;
}

double ks_vs_uniform(std::span<const double> samples) {
    if (samples.empty()) {
        throw invalid_parameter("ks_vs_uniform: empty sample");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0.0 || sorted.back() > 1.0) {
        throw invalid_parameter("ks_vs_uniform: samples must lie in [0, 1]");
    }
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double x = sorted[i];
        d = std::max(d, x - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - x);
    }
    return d;
}

MeanCi mean_ci(std::span<const double> samples, double level) {
    if (samples.size() < 2) {
        throw invalid_parameter("mean_ci: need at least two samples");
    }
    if (!(level > 0.0) || !(level < 1.0)) {
        throw invalid_parameter("mean_ci: level must lie in (0, 1)");
    }
    const EmpiricalSummary s = summarize(samples);
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half =
        z * std::sqrt(s.variance / static_cast<double>(s.count));
    return MeanCi{s.mean, half};
}

double median_rate_slope(std::span<const double> ns,
                         std::span<const double> medians) {
    if (ns.size() != medians.size() || ns.size() < 3) {
        throw invalid_parameter(
            "median_rate_slope: need matching arrays with >= 3 points");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(ns.size());
    ys.reserve(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(ns[i] > 0.0) || !(medians[i] > 0.0)) {
            throw invalid_parameter(
                "median_rate_slope: ns and medians must be positive");
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (ns[k] == ns[i]) {
                throw invalid_parameter(
                    "median_rate_slope: n values must be distinct");
            }
        }
        xs.push_back(std::log(ns[i]));
        ys.push_back(std::log(medians[i]));
    }
    double xbar = 0.0;
    double ybar = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= static_cast<double>(xs.size());
    ybar /= static_cast<double>(xs.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
    }
    return sxy / sxx;
}

double beta_constant() {
    static const double value = [] {
        constexpr int rows = 56;
        const long double zeta2 = zeta_via_eta(2.0L, rows);
        const long double pi = std::numbers::pi_v<long double>;
        if (std::fabs(static_cast<double>(zeta2 - pi * pi / 6.0L)) > 1e-14) {
            throw internal_error("beta_constant: zeta(2) self-check failed");
        }
        const long double zeta_half = zeta_via_eta(0.5L, rows);
        const long double beta =
            -zeta_half / std::sqrt(2.0L * pi);
        return static_cast<double>(beta);
    }();
    return value;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw invalid_parameter("normal_quantile: p must lie in (0, 1)");
    }
    // Acklam's rational approximation, then one Halley step using erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
             a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r +
             1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
              c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) *
                     std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

}  // namespace bmdisc
