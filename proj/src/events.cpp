#include "bmdisc/events.hpp"

#include <cmath>
#include <limits>

#include "bmdisc/crossing.hpp"

namespace bmdisc {

namespace {

// exp(-2 * 34.6) < 1e-30: same no-crossing certificate as the walk engine.
constexpr double kCertExponent = 34.6;

double barrier_at(const BarrierSpec& b, double t) {
    return b.is_constant ? b.level : b.fn(t);
}

// Integer-ceiling anchor of a scaled event time.  Both the direct triplet
// builders and zoom_path go through this so the fractional part is the same
// double on both routes.
struct Anchor {
    std::int64_t ceil_index;
    double frac;
};

Anchor make_anchor(double scale, double t) {
    const double st = scale * t;
    const double c = std::ceil(st);
    return Anchor{static_cast<std::int64_t>(c), c - st};
}

// Midpoint-refined values of one mesh interval, 2^depth cells.
std::vector<double> refine_interval(Stream& s, double x0, double x1,
                                    double dt, double sigma, int depth) {
    std::vector<double> cur = {x0, x1};
    double step = dt;
    for (int d = 0; d < depth; ++d) {
        std::vector<double> next;
        next.reserve(cur.size() * 2 - 1);
        const double sd = sigma * std::sqrt(step * 0.25);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            next.push_back(cur[i]);
            next.push_back(
                sample_normal(s, 0.5 * (cur[i] + cur[i + 1]), sd));
        }
        next.push_back(cur.back());
        cur = std::move(next);
        step *= 0.5;
    }
    return cur;
}

bool bernoulli_cross(Stream& s, double p) {
    if (p >= 1.0) {
        return true;
    }
    if (p > 1e-30) {
        return sample_uniform(s) < p;
    }
    return false;
}

ErrorTriplet triplet_from_min(Stream& s, const PathGrid& p) {
    const GridMin gm = grid_argmin(
        p, 0, static_cast<std::int64_t>(p.values.size()) - 1);
    const ContinuousMin cm = continuous_min(s, p);
    const double scale = static_cast<double>(p.n);
    const double sqrtn = std::sqrt(scale);
    const Anchor a = make_anchor(scale, cm.t_cont);
    ErrorTriplet tr;
    tr.time_err = static_cast<double>(gm.index - a.ceil_index) + a.frac;
    tr.pos_err = sqrtn * (gm.value - cm.min_cont);
    tr.frac = a.frac;
    return tr;
}

}  // namespace

std::optional<GridHit> detect_hit_grid(const PathGrid& p,
                                       const BarrierSpec& b) {
    for (std::size_t j = 0; j < p.values.size(); ++j) {
        if (p.values[j] >= barrier_at(b, p.times[j])) {
            return GridHit{static_cast<std::int64_t>(j), p.times[j],
                           p.values[j]};
        }
    }
    return std::nullopt;
}

std::optional<ContinuousHit> locate_hit_continuous(Stream& s,
                                                   const PathGrid& p,
                                                   const BarrierSpec& b,
                                                   int depth) {
    if (p.values.size() < 2) {
        throw invalid_parameter(
            "locate_hit_continuous: need at least two grid points");
    }
    if (depth < 0 || depth > 24) {
        throw invalid_parameter(
            "locate_hit_continuous: depth must lie in [0, 24]");
    }
    if (!(p.sigma > 0.0)) {
        // Deterministic path: the crossing is where the line meets the
        // barrier; scan cells of one refined mesh without randomness.
        for (std::size_t j = 0; j + 1 < p.values.size(); ++j) {
            const double dt = p.times[j + 1] - p.times[j];
            const std::int64_t cells = std::int64_t{1} << depth;
            const double delta = dt / static_cast<double>(cells);
            const double slope = (p.values[j + 1] - p.values[j]) / dt;
            for (std::int64_t c = 0; c <= cells; ++c) {
                const double t = p.times[j] + static_cast<double>(c) * delta;
                const double x = p.values[j] + slope * (t - p.times[j]);
                const double g = barrier_at(b, t);
                if (x >= g) {
                    return ContinuousHit{static_cast<std::int64_t>(j), t, g};
                }
            }
        }
        return std::nullopt;
    }
    if (b.is_constant) {
        const double level = b.level;
        for (std::size_t j = 0; j + 1 < p.values.size(); ++j) {
            const double dt = p.times[j + 1] - p.times[j];
            const double pc = bridge_cross_prob(p.values[j], p.values[j + 1],
                                                level, dt, p.sigma);
            if (!bernoulli_cross(s, pc)) {
                continue;
            }
            const double theta = bridge_cross_time_sample(
                s, p.values[j], p.values[j + 1], level, dt, p.sigma);
            return ContinuousHit{static_cast<std::int64_t>(j),
                                 p.times[j] + theta, level};
        }
        return std::nullopt;
    }
    for (std::size_t j = 0; j + 1 < p.values.size(); ++j) {
        const double dt = p.times[j + 1] - p.times[j];
        // A nondecreasing barrier cannot be crossed without crossing its
        // value at the left edge, so that level certifies skippable cells.
        const double floor_level = barrier_at(b, p.times[j]);
        if (p.values[j] < floor_level && p.values[j + 1] < floor_level &&
            (floor_level - p.values[j]) * (floor_level - p.values[j + 1]) >
                kCertExponent * p.sigma * p.sigma * dt) {
            continue;
        }
        const std::vector<double> fine = refine_interval(
            s, p.values[j], p.values[j + 1], dt, p.sigma, depth);
        const double delta = dt / static_cast<double>(fine.size() - 1);
        for (std::size_t c = 0; c + 1 < fine.size(); ++c) {
            const double s_c = p.times[j] + static_cast<double>(c) * delta;
            const double level_c = barrier_at(b, s_c + 0.5 * delta);
            const double pc =
                bridge_cross_prob(fine[c], fine[c + 1], level_c, delta,
                                  p.sigma);
            if (!bernoulli_cross(s, pc)) {
                continue;
            }
            const double theta = bridge_cross_time_sample(
                s, fine[c], fine[c + 1], level_c, delta, p.sigma);
            const double tau = s_c + theta;
            return ContinuousHit{static_cast<std::int64_t>(j), tau,
                                 barrier_at(b, tau)};
        }
    }
    return std::nullopt;
}

GridMin grid_argmin(const PathGrid& p, std::int64_t first, std::int64_t last) {
    const auto size = static_cast<std::int64_t>(p.values.size());
    if (first < 0 || last < first || last >= size) {
        throw invalid_parameter("grid_argmin: empty or out-of-range window");
    }
    GridMin best{first, p.values[static_cast<std::size_t>(first)]};
    for (std::int64_t j = first + 1; j <= last; ++j) {
        const double v = p.values[static_cast<std::size_t>(j)];
        if (v < best.value) {
            best = GridMin{j, v};
        }
    }
    return best;
}

ContinuousMin continuous_min(Stream& s, const PathGrid& p) {
    if (p.values.empty()) {
        throw invalid_parameter("continuous_min: empty path");
    }
    const GridMin gm = grid_argmin(
        p, 0, static_cast<std::int64_t>(p.values.size()) - 1);
    if (!(p.sigma > 0.0) || p.values.size() < 2) {
        return ContinuousMin{gm.index, p.times[static_cast<std::size_t>(
                                           gm.index)],
                             gm.value};
    }
    const double sig2 = p.sigma * p.sigma;
    double z = gm.value;
    std::int64_t winner = -1;
    for (std::size_t i = 0; i + 1 < p.values.size(); ++i) {
        const double x0 = p.values[i];
        const double x1 = p.values[i + 1];
        const double dt = p.times[i + 1] - p.times[i];
        if ((x0 - z) * (x1 - z) > kCertExponent * sig2 * dt) {
            continue;
        }
        const double m = bridge_min_sample(s, x0, x1, dt, p.sigma);
        if (m < z) {
            z = m;
            winner = static_cast<std::int64_t>(i);
        }
    }
    if (winner < 0) {
        // Every bridge rounded back onto the grid minimum itself.
        return ContinuousMin{gm.index, p.times[static_cast<std::size_t>(
                                           gm.index)],
                             gm.value};
    }
    const auto wi = static_cast<std::size_t>(winner);
    const double x0 = p.values[wi];
    const double x1 = p.values[wi + 1];
    const double dt = p.times[wi + 1] - p.times[wi];
    double theta;
    if (z < x0 && z < x1) {
        theta = bridge_argmin_time_sample(s, x0, x1, z, dt, p.sigma);
    } else {
        // Rounding put the minimum on an endpoint; place the time there.
        theta = x0 <= x1 ? 0.0 : dt;
    }
    return ContinuousMin{winner, p.times[wi] + theta, z};
}

TruncatedPath global_min_truncated(Stream& s, double mu, double sigma,
                                   std::int64_t n, double eps) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw invalid_parameter("global_min_truncated: mu must be > 0");
    }
    if (sigma < 0.0 || !std::isfinite(sigma)) {
        throw invalid_parameter(
            "global_min_truncated: sigma must be finite and >= 0");
    }
    if (n < 1) {
        throw invalid_parameter("global_min_truncated: n must be >= 1");
    }
    if (!(eps > 0.0) || !(eps < 1.0)) {
        throw invalid_parameter("global_min_truncated: eps must lie in (0,1)");
    }
    const double gap = sigma * sigma / (2.0 * mu) * std::log(1.0 / eps);
    const double h = 1.0 / static_cast<double>(n);
    const double step_mu = mu * h;
    const double step_sd = sigma * std::sqrt(h);
    constexpr std::int64_t kStepCap = 2'000'000'000;
    TruncatedPath out;
    out.grid.n = n;
    out.grid.mu = mu;
    out.grid.sigma = sigma;
    out.grid.times.push_back(0.0);
    out.grid.values.push_back(0.0);
    double x = 0.0;
    double runmin = 0.0;
    std::int64_t k = 0;
    while (true) {
        if (k >= kStepCap) {
            throw step_cap_exceeded("global_min_truncated: step cap exceeded");
        }
        ++k;
        x += sample_normal(s, step_mu, step_sd);
        out.grid.times.push_back(static_cast<double>(k) * h);
        out.grid.values.push_back(x);
        runmin = std::min(runmin, x);
        if (x - runmin >= gap) {
            break;
        }
    }
    out.stop_index = k;
    return out;
}

std::optional<ErrorTriplet> error_triplet_hit(Stream& s, std::int64_t n,
                                              double level, double mu,
                                              double sigma,
                                              std::int64_t max_steps) {
    if (n < 1) {
        throw invalid_parameter("error_triplet_hit: n must be >= 1");
    }
    if (!(level > 0.0)) {
        throw invalid_parameter("error_triplet_hit: level must be > 0");
    }
    const double n_d = static_cast<double>(n);
    CrossingConfig cfg;
    cfg.start = 0.0;
    cfg.level = level;
    cfg.drift = mu;
    cfg.sigma = sigma;
    cfg.mesh = 1.0 / n_d;
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
    const double ntau =
        static_cast<double>(res.cont_interval) + res.cont_theta * n_d;
    const double c = std::ceil(ntau);
    const auto ceil_index = static_cast<std::int64_t>(c);
    ErrorTriplet tr;
    tr.frac = c - ntau;
    tr.time_err =
        static_cast<double>(res.hit_index - ceil_index) + tr.frac;
    tr.pos_err = std::sqrt(n_d) * (res.hit_value - level);
    return tr;
}

std::optional<HitTripletDraw> error_triplet_hit_grid(Stream& s,
                                                     const PathGrid& p,
                                                     const BarrierSpec& b,
                                                     int depth) {
    const std::optional<GridHit> gh = detect_hit_grid(p, b);
    if (!gh) {
        return std::nullopt;
    }
    const std::optional<ContinuousHit> ch =
        locate_hit_continuous(s, p, b, depth);
    if (!ch) {
        return std::nullopt;
    }
    const double scale = static_cast<double>(p.n);
    const Anchor a = make_anchor(scale, ch->tau_cont);
    HitTripletDraw out;
    out.triplet.frac = a.frac;
    out.triplet.time_err =
        static_cast<double>(gh->index - a.ceil_index) + a.frac;
    out.triplet.pos_err =
        std::sqrt(scale) * (gh->value - ch->value_cont);
    out.record =
        HitRecord{gh->tau_n, gh->value, ch->tau_cont, ch->value_cont};
    return out;
}

ErrorTriplet error_triplet_min(Stream& s, const PathGrid& p) {
    return triplet_from_min(s, p);
}

ErrorTriplet error_triplet_globalmin(Stream& s, double mu, double sigma,
                                     std::int64_t n, double eps) {
    const TruncatedPath tp = global_min_truncated(s, mu, sigma, n, eps);
    return triplet_from_min(s, tp.grid);
}

ZoomedProcess zoom_path(const PathGrid& p, double center_time,
                        double center_value) {
    ZoomedProcess z;
    z.center_time = center_time;
    z.center_value = center_value;
    z.scale = static_cast<double>(p.n);
    const Anchor a = make_anchor(z.scale, center_time);
    z.u = a.frac;
    z.first_k = -a.ceil_index;
    const double st = z.scale * center_time;
    const double sqrtn = std::sqrt(z.scale);
    z.offsets.reserve(p.values.size());
    z.values.reserve(p.values.size());
    for (std::size_t j = 0; j < p.values.size(); ++j) {
        z.offsets.push_back(static_cast<double>(j) - st);
        z.values.push_back(sqrtn * (p.values[j] - center_value));
    }
    return z;
}

std::optional<MappedHit> apply_error_mapping_hit(
    double u, const ZoomedProcess& z,
    const std::function<double(double)>& zoomed_barrier) {
    if (!zoomed_barrier) {
        throw invalid_parameter("apply_error_mapping_hit: empty barrier");
    }
    for (std::size_t i = 0; i < z.values.size(); ++i) {
        const std::int64_t k = z.first_k + static_cast<std::int64_t>(i);
        if (k < 0) {
            continue;
        }
        if (z.values[i] > zoomed_barrier(z.offsets[i])) {
            return MappedHit{static_cast<double>(k) + u, z.values[i]};
        }
    }
    return std::nullopt;
}

ErrorTriplet apply_error_mapping_min(double u, const ZoomedProcess& z) {
    if (z.values.empty()) {
        throw invalid_parameter("apply_error_mapping_min: empty window");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < z.values.size(); ++i) {
        if (z.values[i] < z.values[best]) {
            best = i;
        }
    }
    ErrorTriplet tr;
    tr.time_err =
        static_cast<double>(z.first_k + static_cast<std::int64_t>(best)) + u;
    tr.pos_err = z.values[best];
    tr.frac = u;
    return tr;
}

}  // namespace bmdisc
