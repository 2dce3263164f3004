#include "bmdisc/crossing.hpp"

#include <cmath>

#include "bmdisc/paths.hpp"

namespace bmdisc {

namespace {

// exp(-2 * 34.6) < 1e-30: products (level-x0)(level-x1) / (sigma^2 dt) above
// this bound certify "no crossing inside" to beyond Monte Carlo resolution.
constexpr double kSkipExponent = 34.6;

struct Walker {
    Stream& s;
    const CrossingConfig& cfg;
    double sigma2;
    bool cont_found = false;
    std::int64_t cont_interval = 0;
    double cont_theta = 0.0;
    bool hit_found = false;
    std::int64_t hit_index = 0;
    double hit_value = 0.0;

    bool crossed(double x) const {
        return cfg.strict ? x > cfg.level : x >= cfg.level;
    }

    bool done() const {
        return hit_found || (cfg.stop_at_continuous && cont_found);
    }

    bool can_skip(double x0, double x1, double dt) const {
        if (x1 >= cfg.level) {
            return false;
        }
        return (cfg.level - x0) * (cfg.level - x1) > kSkipExponent * sigma2 * dt;
    }

    // Single mesh interval (k, k+1]; x0 is below the level.
    void base_interval(std::int64_t k, double x0, double x1) {
        if (cfg.need_continuous && !cont_found) {
            const double p =
                bridge_cross_prob(x0, x1, cfg.level, cfg.mesh, cfg.sigma);
            bool cross = false;
            if (p >= 1.0) {
                cross = true;
            } else if (p > 1e-30) {
                cross = sample_uniform(s) < p;
            }
            if (cross) {
                cont_found = true;
                cont_interval = k;
                cont_theta = bridge_cross_time_sample(
                    s, x0, x1, cfg.level, cfg.mesh, cfg.sigma);
            }
        }
        if (crossed(x1)) {
            hit_found = true;
            hit_index = k + 1;
            hit_value = x1;
        }
    }

    // Resolves (k0, k1] given endpoint values; k0 value is below the level.
    void resolve(std::int64_t k0, double x0, std::int64_t k1, double x1) {
        if (k1 - k0 == 1) {
            base_interval(k0, x0, x1);
            return;
        }
        const std::int64_t mid = k0 + (k1 - k0) / 2;
        const double left = static_cast<double>(mid - k0);
        const double right = static_cast<double>(k1 - mid);
        const double span = left + right;
        const double mean = x0 + (x1 - x0) * (left / span);
        const double sd =
            cfg.sigma * std::sqrt(cfg.mesh * left * right / span);
        const double xm = sample_normal(s, mean, sd);
        if (!can_skip(x0, xm, left * cfg.mesh)) {
            resolve(k0, x0, mid, xm);
            if (done()) {
                return;
            }
        }
        if (crossed(xm)) {
            // The left sweep saw x_mid above the level and must have stopped.
            hit_found = true;
            hit_index = mid;
            hit_value = xm;
            return;
        }
        if (!can_skip(xm, x1, right * cfg.mesh)) {
            resolve(mid, xm, k1, x1);
        }
    }
};

}  // namespace

CrossingResult simulate_crossing(Stream& s, const CrossingConfig& cfg) {
    if (!(cfg.sigma > 0.0) || !(cfg.mesh > 0.0) || cfg.max_steps < 1) {
        throw invalid_parameter(
            "simulate_crossing: sigma, mesh and max_steps must be positive");
    }
    if (cfg.stop_at_continuous && !cfg.need_continuous) {
        throw invalid_parameter(
            "simulate_crossing: stop_at_continuous requires need_continuous");
    }
    Walker w{s, cfg, cfg.sigma * cfg.sigma};
    if (w.crossed(cfg.start)) {
        return CrossingResult{0, cfg.start, 0, 0.0};
    }
    const double step_sd = cfg.sigma * std::sqrt(cfg.mesh);
    double x = cfg.start;
    std::int64_t k = 0;
    while (!w.done()) {
        if (k >= cfg.max_steps) {
            throw step_cap_exceeded("simulate_crossing: step cap exceeded");
        }
        const double dist = cfg.level - x;
        std::int64_t block = 1;
        const double by_dist = dist / (6.0 * step_sd);
        if (by_dist > 1.0) {
            block = static_cast<std::int64_t>(by_dist * by_dist);
        }
        if (cfg.drift > 0.0) {
            const double by_drift = dist / (2.0 * cfg.drift * cfg.mesh);
            if (by_drift < static_cast<double>(block)) {
                block = std::max<std::int64_t>(
                    1, static_cast<std::int64_t>(by_drift));
            }
        }
        block = std::min(block, cfg.max_steps - k);
        const double span = static_cast<double>(block) * cfg.mesh;
        const double x1 =
            x + cfg.drift * span +
            sample_normal(s, 0.0, cfg.sigma * std::sqrt(span));
        if (block == 1) {
            w.base_interval(k, x, x1);
        } else if (!w.can_skip(x, x1, span)) {
            w.resolve(k, x, k + block, x1);
        }
        k += block;
        x = x1;
    }
    if (cfg.need_continuous && !w.cont_found && !cfg.stop_at_continuous) {
        throw internal_error(
            "simulate_crossing: walk crossed without a continuous passage");
    }
    return CrossingResult{w.hit_index, w.hit_value, w.cont_interval,
                          w.cont_theta};
}

}  // namespace bmdisc
