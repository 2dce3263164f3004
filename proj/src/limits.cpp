#include "bmdisc/limits.hpp"

#include <cmath>
#include <limits>

#include "bmdisc/crossing.hpp"

namespace bmdisc {

namespace {

constexpr std::int64_t kHitStepCap = 1'000'000'000;
// Step budget for one conditioned return excursion; reaching it aborts the
// draw with step_cap_exceeded (probability well below 1e-7 per draw).
constexpr std::int64_t kDipStepCap = 1'000'000'000'000'000;

/**
 * One-sided Bessel(3) leg observed at offsets first_offset + j, j >= 0.
 *
 * Holds a 3-dimensional Brownian representation so integer extensions are
 * exact; after a return excursion the state restarts from the reached radius
 * by rotational invariance.
 */
struct BesselLeg {
    double first_offset;
    double t = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double vz = 0.0;
    std::int64_t next_j = 0;  // index of the next offset to generate
    bool certified = false;

    double radius() const { return std::sqrt(vx * vx + vy * vy + vz * vz); }

    // Draws the value at offset first_offset + next_j; returns that j.
    std::int64_t extend(Stream& s, double& value_out) {
        const double target = first_offset + static_cast<double>(next_j);
        const double sd = std::sqrt(target - t);
        vx += sample_normal(s, 0.0, sd);
        vy += sample_normal(s, 0.0, sd);
        vz += sample_normal(s, 0.0, sd);
        t = target;
        value_out = radius();
        return next_j++;
    }
};

struct MinState {
    double min_value = std::numeric_limits<double>::infinity();
    int min_side = 0;           // 0: offsets u + j, 1: offsets (1 - u) + j
    std::int64_t min_step = 0;  // j index within the side
};

void record(MinState& st, int side, std::int64_t j, double value) {
    if (value < st.min_value) {
        st.min_value = value;
        st.min_side = side;
        st.min_step = j;
    }
}

/**
 * Runs the return excursion of a leg whose frontier sits at radius r above
 * `level`: conditioned on returning, the leg is plain Brownian motion from r
 * until it first reaches the level, after which the Bessel law resumes from
 * there.  Offsets skipped inside the excursion stay above the level and
 * cannot move the minimum, so only the passage time matters.
 */
void run_return_excursion(Stream& s, BesselLeg& leg, double level) {
    CrossingConfig cfg;
    cfg.start = -leg.radius();
    cfg.level = -level;
    cfg.drift = 0.0;
    cfg.sigma = 1.0;
    cfg.mesh = 1.0;
    cfg.strict = false;
    cfg.need_continuous = true;
    cfg.stop_at_continuous = true;
    cfg.max_steps = kDipStepCap;
    const CrossingResult res = simulate_crossing(s, cfg);
    const double tau =
        static_cast<double>(res.cont_interval) + res.cont_theta;
    // First offset index strictly beyond the passage time.
    leg.next_j += static_cast<std::int64_t>(std::floor(tau));
    leg.t += tau;
    leg.vx = level;
    leg.vy = 0.0;
    leg.vz = 0.0;
}

}  // namespace

LimitTriplet sample_hit_limit(Stream& s, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw invalid_parameter("sample_hit_limit: sigma must be finite and > 0");
    }
    const double u = sample_uniform(s);
    const double x0 = std::sqrt(u) * sample_normal(s, 0.0, 1.0);
    if (x0 > 0.0) {
        return LimitTriplet{u, sigma * x0, u};
    }
    CrossingConfig cfg;
    cfg.start = x0;
    cfg.level = 0.0;
    cfg.drift = 0.0;
    cfg.sigma = 1.0;
    cfg.mesh = 1.0;
    cfg.strict = true;
    cfg.need_continuous = false;
    cfg.max_steps = kHitStepCap;
    const CrossingResult res = simulate_crossing(s, cfg);
    return LimitTriplet{static_cast<double>(res.hit_index) + u,
                        sigma * res.hit_value, u};
}

LimitTriplet sample_min_limit(Stream& s, double sigma, double eps) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw invalid_parameter("sample_min_limit: sigma must be finite and > 0");
    }
    if (!(eps > 0.0) || !(eps < 1.0)) {
        throw invalid_parameter("sample_min_limit: eps must lie in (0, 1)");
    }
    const double u = sample_uniform(s);
    BesselLeg legs[2] = {BesselLeg{u}, BesselLeg{1.0 - u}};
    MinState st;
    for (int side = 0; side < 2; ++side) {
        double value = 0.0;
        const std::int64_t j = legs[side].extend(s, value);
        record(st, side, j, value);
    }
    int attempts = 0;
    while (!legs[0].certified || !legs[1].certified) {
        if (++attempts > 1'000'000) {
            throw internal_error("sample_min_limit: certification stalled");
        }
        for (int side = 0; side < 2; ++side) {
            BesselLeg& leg = legs[side];
            if (leg.certified) {
                continue;
            }
            // Extend while the frontier is close to the minimum; certificates
            // attempted from r > 2 * min succeed with probability >= 1/2.
            if (leg.radius() <= 2.0 * st.min_value) {
                double value = 0.0;
                const std::int64_t j = leg.extend(s, value);
                record(st, side, j, value);
                continue;
            }
            const double q = st.min_value / leg.radius();
            if (sample_uniform(s) >= q) {
                leg.certified = true;
                continue;
            }
            run_return_excursion(s, leg, st.min_value);
            double value = 0.0;
            const std::int64_t j = leg.extend(s, value);
            record(st, side, j, value);
        }
    }
    const std::int64_t k =
        st.min_side == 0 ? st.min_step : -(st.min_step + 1);
    return LimitTriplet{static_cast<double>(k) + u, sigma * st.min_value, u};
}

}  // namespace bmdisc
