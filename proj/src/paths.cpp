#include "bmdisc/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace bmdisc {

namespace {

void append_g17(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out += buf;
}

// Keeps an offset strictly inside (0, delta); the boundary cases have
// probability zero but rounding can land on them.
double clamp_open(double theta, double delta) {
    const double lo = delta * 1e-12;
    if (!(theta > lo)) {
        return lo;
    }
    if (!(theta < delta - lo)) {
        return delta - lo;
    }
    return theta;
}

}  // namespace

BarrierSpec BarrierSpec::constant(double level) {
    if (!(level > 0.0) || !std::isfinite(level)) {
        throw invalid_parameter("BarrierSpec: level must be finite and > 0");
    }
    BarrierSpec b;
    b.is_constant = true;
    b.level = level;
    return b;
}

BarrierSpec BarrierSpec::function(std::function<double(double)> fn) {
    if (!fn) {
        throw invalid_parameter("BarrierSpec: empty function");
    }
    if (!(fn(0.0) > 0.0)) {
        throw invalid_parameter("BarrierSpec: requires b(0) > 0");
    }
    BarrierSpec b;
    b.is_constant = false;
    b.level = fn(0.0);
    b.fn = std::move(fn);
    return b;
}

PathGrid sample_bm_grid(Stream& s, std::int64_t n, double horizon, double mu,
                        double sigma) {
    if (n < 1) {
        throw invalid_parameter("sample_bm_grid: n must be >= 1");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw invalid_parameter("sample_bm_grid: horizon must be finite and > 0");
    }
    if (sigma < 0.0 || !std::isfinite(sigma)) {
        throw invalid_parameter("sample_bm_grid: sigma must be finite and >= 0");
    }
    const double h = 1.0 / static_cast<double>(n);
    const auto steps = static_cast<std::int64_t>(
        std::ceil(horizon * static_cast<double>(n) - 1e-9));
    PathGrid g;
    g.n = n;
    g.mu = mu;
    g.sigma = sigma;
    g.times.reserve(static_cast<std::size_t>(steps) + 1);
    g.values.reserve(static_cast<std::size_t>(steps) + 1);
    const double step_mu = mu * h;
    const double step_sd = sigma * std::sqrt(h);
    double x = 0.0;
    g.times.push_back(0.0);
    g.values.push_back(0.0);
    for (std::int64_t k = 1; k <= steps; ++k) {
        x += sample_normal(s, step_mu, step_sd);
        g.times.push_back(static_cast<double>(k) * h);
        g.values.push_back(x);
    }
    return g;
}

PathGrid refine_bridge(const PathGrid& grid, int depth, Stream& s) {
    if (depth < 0) {
        throw invalid_parameter("refine_bridge: depth must be >= 0");
    }
    if (grid.values.size() < 2) {
        throw invalid_parameter("refine_bridge: need at least two points");
    }
    PathGrid cur = grid;
    for (int level = 0; level < depth; ++level) {
        PathGrid next;
        next.n = cur.n * 2;
        next.mu = cur.mu;
        next.sigma = cur.sigma;
        next.times.reserve(cur.times.size() * 2 - 1);
        next.values.reserve(cur.values.size() * 2 - 1);
        for (std::size_t i = 0; i + 1 < cur.times.size(); ++i) {
            const double dt = cur.times[i + 1] - cur.times[i];
            const double mid_mean = 0.5 * (cur.values[i] + cur.values[i + 1]);
            const double mid_sd = cur.sigma * std::sqrt(dt * 0.25);
            next.times.push_back(cur.times[i]);
            next.values.push_back(cur.values[i]);
            next.times.push_back(cur.times[i] + 0.5 * dt);
            next.values.push_back(sample_normal(s, mid_mean, mid_sd));
        }
        next.times.push_back(cur.times.back());
        next.values.push_back(cur.values.back());
        cur = std::move(next);
    }
    return cur;
}

double bridge_cross_prob(double x0, double x1, double level, double delta,
                         double sigma) {
    if (!(delta > 0.0) || !(sigma > 0.0)) {
        throw invalid_parameter(
            "bridge_cross_prob: delta and sigma must be > 0");
    }
    if (x0 >= level || x1 >= level) {
        return 1.0;
    }
    return std::exp(-2.0 * (level - x0) * (level - x1) /
                    (sigma * sigma * delta));
}

double bridge_min_sample(Stream& s, double x0, double x1, double delta,
                         double sigma) {
    if (!(delta > 0.0) || !(sigma > 0.0)) {
        throw invalid_parameter(
            "bridge_min_sample: delta and sigma must be > 0");
    }
    const double v = sample_uniform(s);
    const double diff = x0 - x1;
    const double m =
        0.5 * (x0 + x1 -
               std::sqrt(diff * diff - 2.0 * sigma * sigma * delta *
                                           std::log(v)));
    return std::min(m, std::min(x0, x1));
}

double bridge_cross_time_sample(Stream& s, double x0, double x1, double level,
                                double delta, double sigma) {
    if (!(delta > 0.0) || !(sigma > 0.0)) {
        throw invalid_parameter(
            "bridge_cross_time_sample: delta and sigma must be > 0");
    }
    if (!(x0 < level)) {
        throw invalid_parameter("bridge_cross_time_sample: requires x0 < level");
    }
    const double a = (level - x0) / sigma;
    const double b = std::fabs(x1 - level) / sigma;
    double w;
    if (b == 0.0) {
        const double z = sample_normal(s, 0.0, 1.0);
        w = delta * z * z;
    } else {
        const double y = sample_inverse_gaussian(s, 1.0 / (a * b), 1.0 / delta);
        w = 1.0 / y;
    }
    const double theta = delta * a * a / (a * a + w);
    return clamp_open(theta, delta);
}

double bridge_argmin_time_sample(Stream& s, double x0, double x1, double m,
                                 double delta, double sigma) {
    if (!(delta > 0.0) || !(sigma > 0.0)) {
        throw invalid_parameter(
            "bridge_argmin_time_sample: delta and sigma must be > 0");
    }
    if (!(m < x0) || !(m < x1)) {
        throw invalid_parameter(
            "bridge_argmin_time_sample: requires m < min(x0, x1)");
    }
    const double a = (x0 - m) / sigma;
    const double b = (x1 - m) / sigma;
    const double u = sample_uniform(s);
    double w;
    if (u < a / (a + b)) {
        w = sample_inverse_gaussian(s, a * b, a * b * a * b / delta);
    } else {
        const double y = sample_inverse_gaussian(s, 1.0 / (a * b), 1.0 / delta);
        w = 1.0 / y;
    }
    const double theta = delta * a * a / (a * a + w);
    return clamp_open(theta, delta);
}

BesselGrid sample_bessel3_at(Stream& s, const std::vector<double>& times) {
    if (times.empty()) {
        throw invalid_parameter("sample_bessel3_at: empty offset list");
    }
    double prev = 0.0;
    for (double t : times) {
        if (!(t > prev)) {
            throw invalid_parameter(
                "sample_bessel3_at: offsets must be positive and increasing");
        }
        prev = t;
    }
    BesselGrid g;
    g.times = times;
    g.values.reserve(times.size());
    double vx = 0.0;
    double vy = 0.0;
    double vz = 0.0;
    double t0 = 0.0;
    for (double t : times) {
        const double sd = std::sqrt(t - t0);
        vx += sample_normal(s, 0.0, sd);
        vy += sample_normal(s, 0.0, sd);
        vz += sample_normal(s, 0.0, sd);
        g.values.push_back(std::sqrt(vx * vx + vy * vy + vz * vz));
        t0 = t;
    }
    return g;
}

PathGrid reflect(const PathGrid& grid) {
    PathGrid out = grid;
    double runmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        runmin = std::min(runmin, grid.values[i]);
        out.values[i] = grid.values[i] - runmin;
    }
    return out;
}

PathGrid busy_period(const PathGrid& grid) {
    PathGrid out = grid;
    double runmin = std::numeric_limits<double>::infinity();
    double last_attained = 0.0;
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        if (grid.values[i] <= runmin) {
            runmin = grid.values[i];
            last_attained = grid.times[i];
        }
        out.values[i] = grid.times[i] - last_attained;
    }
    return out;
}

std::string path_to_csv(const PathGrid& grid) {
    std::string out = "time,value\n";
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        append_g17(out, grid.times[i]);
        out += ',';
        append_g17(out, grid.values[i]);
        out += '\n';
    }
    return out;
}

PathGrid path_from_csv(const std::string& csv, std::int64_t n, double mu,
                       double sigma) {
    PathGrid g;
    g.n = n;
    g.mu = mu;
    g.sigma = sigma;
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "time,value") {
        throw invalid_parameter("path_from_csv: missing time,value header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw invalid_parameter("path_from_csv: malformed row");
        }
        g.times.push_back(std::stod(line.substr(0, comma)));
        g.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (g.times.empty()) {
        throw invalid_parameter("path_from_csv: no rows");
    }
    return g;
}

}  // namespace bmdisc
