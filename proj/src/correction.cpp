#include "bmdisc/correction.hpp"

#include <cmath>

#include "bmdisc/analysis.hpp"
#include "bmdisc/rng.hpp"

namespace bmdisc {

namespace {

std::int64_t validated_steps(const BarrierQuery& q) {
    if (!(q.level > 0.0) || !std::isfinite(q.level)) {
        throw invalid_parameter("BarrierQuery: level must be finite and > 0");
    }
    if (!(q.y <= q.level)) {
        throw invalid_parameter("BarrierQuery: y must not exceed level");
    }
    if (!(q.t > 0.0) || !std::isfinite(q.t)) {
        throw invalid_parameter("BarrierQuery: t must be finite and > 0");
    }
    if (!(q.sigma > 0.0) || !std::isfinite(q.sigma)) {
        throw invalid_parameter("BarrierQuery: sigma must be finite and > 0");
    }
    if (q.n < 1) {
        throw invalid_parameter("BarrierQuery: n must be >= 1");
    }
    const double tn = q.t * static_cast<double>(q.n);
    const double rounded = std::nearbyint(tn);
    if (std::fabs(tn - rounded) > 1e-9 * std::fmax(1.0, tn)) {
        throw invalid_parameter(
            "BarrierQuery: t must lie on the monitoring mesh (t * n integer)");
    }
    return static_cast<std::int64_t>(rounded);
}

// P(B(t) > y, max_{[0,t]} B >= b) by the reflection identity for drifted
// Brownian motion: P(tau_b <= t) minus the crossed-and-ended-below-y mass
// exp(2 mu b / sigma^2) * Phi((y - 2b - mu t) / (sigma sqrt(t))).
double joint_prob_at_barrier(double b, double y, double t, double mu,
                             double sigma) {
    const double sq = sigma * std::sqrt(t);
    const double tilt = std::exp(2.0 * mu * b / (sigma * sigma));
    const double p_cross = normal_cdf((-b + mu * t) / sq) +
                           tilt * normal_cdf((-b - mu * t) / sq);
    const double below_y = tilt * normal_cdf((y - 2.0 * b - mu * t) / sq);
    return p_cross - below_y;
}

}  // namespace

double joint_cross_terminal_prob(const BarrierQuery& q, bool continuous) {
    validated_steps(q);
    double b = q.level;
    if (!continuous) {
        b += q.sigma * beta_constant() / std::sqrt(static_cast<double>(q.n));
    }
    return joint_prob_at_barrier(b, q.y, q.t, q.mu, q.sigma);
}

McEstimate mc_discrete_prob(std::uint64_t seed, const BarrierQuery& q,
                            std::int64_t num_samples) {
    const std::int64_t steps = validated_steps(q);
    if (num_samples < 1) {
        throw invalid_parameter("mc_discrete_prob: need at least one sample");
    }
    const double step_mu = q.mu / static_cast<double>(q.n);
    const double step_sd = q.sigma * std::sqrt(1.0 / static_cast<double>(q.n));
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < num_samples; ++i) {
        Stream s = create_stream(seed, static_cast<std::uint64_t>(i));
        double x = 0.0;
        bool crossed = false;
        for (std::int64_t k = 0; k < steps; ++k) {
            x += sample_normal(s, step_mu, step_sd);
            if (x >= q.level) {
                crossed = true;
            }
        }
        if (crossed && x > q.y) {
            ++count;
        }
    }
    McEstimate out;
    out.estimate =
        static_cast<double>(count) / static_cast<double>(num_samples);
    out.se = std::sqrt(out.estimate * (1.0 - out.estimate) /
                       static_cast<double>(num_samples));
    return out;
}

}  // namespace bmdisc
