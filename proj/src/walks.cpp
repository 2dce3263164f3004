#include "bmdisc/walks.hpp"

#include <cmath>

#include "bmdisc/crossing.hpp"
#include "bmdisc/events.hpp"
#include "bmdisc/paths.hpp"

namespace bmdisc {

std::optional<WalkPair> overshoot_pair(Stream& s, double m, double sigma,
                                       double nu, std::int64_t max_steps) {
    if (!(m > 0.0)) {
        throw invalid_parameter("overshoot_pair: m must be > 0");
    }
    if (nu < 0.0 || !std::isfinite(nu)) {
        throw invalid_parameter("overshoot_pair: nu must be finite and >= 0");
    }
    CrossingConfig cfg;
    cfg.start = 0.0;
    cfg.level = m;
    cfg.drift = nu;
    cfg.sigma = sigma;
    cfg.mesh = 1.0;
    cfg.strict = false;
    cfg.need_continuous = true;
    cfg.stop_at_continuous = false;
    cfg.max_steps = max_steps;
    CrossingResult res;
    try {
        res = simulate_crossing(s, cfg);
    } catch (const step_cap_exceeded&) {
        return std::nullopt;
    }
    WalkPair out;
    out.first = static_cast<double>(res.hit_index - res.cont_interval) -
                res.cont_theta;
    out.second = res.hit_value - m;
    return out;
}

WalkPair running_min_pair(Stream& s, std::int64_t n, double sigma) {
    if (n < 1) {
        throw invalid_parameter("running_min_pair: n must be >= 1");
    }
    const PathGrid p =
        sample_bm_grid(s, 1, static_cast<double>(n), 0.0, sigma);
    const GridMin gm =
        grid_argmin(p, 0, static_cast<std::int64_t>(p.values.size()) - 1);
    const ContinuousMin cm = continuous_min(s, p);
    WalkPair out;
    out.first = static_cast<double>(gm.index) - cm.t_cont;
    out.second = gm.value - cm.min_cont;
    return out;
}

WalkPair vanishing_drift_pair(Stream& s, double nu, double sigma, double eps) {
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw invalid_parameter("vanishing_drift_pair: nu must be > 0");
    }
    const TruncatedPath tp = global_min_truncated(s, nu, sigma, 1, eps);
    const GridMin gm = grid_argmin(
        tp.grid, 0, static_cast<std::int64_t>(tp.grid.values.size()) - 1);
    const ContinuousMin cm = continuous_min(s, tp.grid);
    WalkPair out;
    out.first = static_cast<double>(gm.index) - cm.t_cont;
    out.second = gm.value - cm.min_cont;
    return out;
}

}  // namespace bmdisc
