#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "bmdisc/analysis.hpp"
#include "bmdisc/events.hpp"
#include "bmdisc/paths.hpp"
#include "bmdisc/rng.hpp"

using namespace bmdisc;

namespace {

PathGrid fixed_path(std::int64_t n, std::vector<double> values) {
    PathGrid p;
    p.n = n;
    p.mu = 0.0;
    p.sigma = 1.0;
    p.values = std::move(values);
    p.times.resize(p.values.size());
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        p.times[i] = static_cast<double>(i) / static_cast<double>(n);
    }
    return p;
}

double ig_cdf(double t, double mean, double shape) {
    const double a = std::sqrt(shape / t);
    return normal_cdf(a * (t / mean - 1.0)) +
           std::exp(2.0 * shape / mean) * normal_cdf(-a * (t / mean + 1.0));
}

}  // namespace

TEST_CASE("grid hit detection on hand-built paths") {
    BarrierSpec b = BarrierSpec::constant(1.0);

    auto h = detect_hit_grid(fixed_path(2, {0.0, 0.5, 1.2}), b);
    REQUIRE(h.has_value());
    CHECK(h->index == 2);
    CHECK(h->tau_n == doctest::Approx(1.0));
    CHECK(h->value == doctest::Approx(1.2));

    CHECK(!detect_hit_grid(fixed_path(2, {0.0, -1.0, -2.0}), b).has_value());

    // weak inequality: touching the barrier counts
    auto touch = detect_hit_grid(fixed_path(1, {0.0, 1.0}), b);
    REQUIRE(touch.has_value());
    CHECK(touch->index == 1);
}

TEST_CASE("grid argmin takes the leftmost tie") {
    PathGrid p = fixed_path(4, {0.0, -1.0, 0.3, -1.0, 0.2});
    GridMin m = grid_argmin(p, 0, 4);
    CHECK(m.index == 1);
    CHECK(m.value == -1.0);
    GridMin tail = grid_argmin(p, 2, 4);
    CHECK(tail.index == 3);
}

TEST_CASE("zero-volatility hit is located by exact interpolation") {
    // drift 2, sigma 0: the path is x(t) = 2t, so level 1 is reached at 0.5
    Stream s = create_stream(501, 0);
    PathGrid p = sample_bm_grid(s, 2, 1.0, 2.0, 0.0);
    auto ch = locate_hit_continuous(s, p, BarrierSpec::constant(1.0), 0);
    REQUIRE(ch.has_value());
    CHECK(ch->tau_cont == 0.5);
    CHECK(ch->value_cont == 1.0);
}

TEST_CASE("located passage times follow the inverse Gaussian law") {
    // Drifted Brownian motion from 0 to a flat barrier: the continuous
    // passage time is inverse Gaussian with mean b/mu and shape b^2/sigma^2.
    const double mu = 0.5, level = 1.0;
    const int count = 100000;
    std::vector<double> probs;
    probs.reserve(count);
    BarrierSpec b = BarrierSpec::constant(level);
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(502, static_cast<std::uint64_t>(i));
        PathGrid p = sample_bm_grid(s, 4, 100.0, mu, 1.0);
        auto ch = locate_hit_continuous(s, p, b, 0);
        if (!ch) continue;  // past-horizon stragglers, about 4e-6 of paths
        probs.push_back(ig_cdf(ch->tau_cont, level / mu, level * level));
    }
    REQUIRE(probs.size() > count * 0.999);
    CHECK(ks_vs_uniform(probs) < 0.012);
}

TEST_CASE("single-interval continuous minimum matches a refinement oracle") {
    const int count = 10000;
    std::vector<double> direct(count), refined(count);
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(503, static_cast<std::uint64_t>(i));
        PathGrid p = sample_bm_grid(s, 1, 1.0, 0.0, 1.0);
        ContinuousMin cm = continuous_min(s, p);
        CHECK(cm.interval == 0);
        CHECK(cm.t_cont >= 0.0);
        CHECK(cm.t_cont <= 1.0);
        CHECK(cm.min_cont <= std::min(p.values[0], p.values[1]));
        direct[i] = cm.min_cont;
    }
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(504, static_cast<std::uint64_t>(i));
        PathGrid p = sample_bm_grid(s, 1, 1.0, 0.0, 1.0);
        PathGrid fine = refine_bridge(p, 12, s);
        refined[i] = *std::min_element(fine.values.begin(), fine.values.end());
    }
    CHECK(ks_two_sample(direct, refined) < 0.03);
}

TEST_CASE("mean of the continuous minimum over one unit of time") {
    // E min_{[0,1]} B = -sqrt(2/pi), approximately -0.7979
    const int count = 1000000;
    std::vector<double> mins(count);
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(505, static_cast<std::uint64_t>(i));
        PathGrid p = sample_bm_grid(s, 8, 1.0, 0.0, 1.0);
        mins[i] = continuous_min(s, p).min_cont;
    }
    const double expect = -std::sqrt(2.0 / std::acos(-1.0));
    CHECK(std::fabs(summarize(mins).mean - expect) < 0.004);
}

TEST_CASE("drift-truncated global minimum has mean -sigma^2/(2 mu)") {
    const int count = 100000;
    std::vector<double> mins(count);
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(506, static_cast<std::uint64_t>(i));
        TruncatedPath tp = global_min_truncated(s, 1.0, 1.0, 16, 1e-6);
        mins[i] = continuous_min(s, tp.grid).min_cont;
    }
    CHECK(std::fabs(summarize(mins).mean + 0.5) < 0.005);
}

TEST_CASE("zero volatility certifies the global minimum at the first step") {
    // sigma = 0 makes the certification gap sigma^2 ln(1/eps) / (2 mu) = 0,
    // so the pure drift line stops as soon as it has risen at all
    Stream s0 = create_stream(507, 1);
    TruncatedPath line = global_min_truncated(s0, 2.0, 0.0, 4, 1e-6);
    CHECK(line.stop_index == 1);
    REQUIRE(line.grid.values.size() >= 2);
    CHECK(line.grid.values[0] == 0.0);
    CHECK(line.grid.values[1] == doctest::Approx(0.5));
}

TEST_CASE("zoomed path is centred and rescaled around the given point") {
    PathGrid p = fixed_path(4, {0.0, 0.2, -0.4, 0.6, 0.1});
    // center exactly on a grid point: zero fractional part, zero value shift
    ZoomedProcess z = zoom_path(p, 0.5, -0.4);
    CHECK(z.u == 0.0);
    CHECK(z.scale == 4.0);
    // entry at offset k = 0 is the center sample itself
    const std::size_t i0 = static_cast<std::size_t>(0 - z.first_k);
    CHECK(z.offsets[i0] == 0.0);
    CHECK(z.values[i0] == 0.0);
    // one step right: sqrt(n) * (x_3 - x_2) = 2 * 1.0
    CHECK(z.values[i0 + 1] == doctest::Approx(2.0));

    ZoomedProcess mid = zoom_path(p, 0.375, 0.0);
    CHECK(mid.u == doctest::Approx(0.5));
}

TEST_CASE("hit mapping takes the first strictly positive offset") {
    ZoomedProcess z;
    z.u = 0.25;
    z.first_k = -2;
    z.offsets = {-1.75, -0.75, 0.25, 1.25, 2.25};
    z.values = {0.5, -0.1, -0.2, 0.0, 0.7};
    auto flat = [](double) { return 0.0; };
    // offsets k < 0 are skipped even though the value there is positive;
    // k = 1 touches zero exactly and strict comparison rejects it
    auto hit = apply_error_mapping_hit(z.u, z, flat);
    REQUIRE(hit.has_value());
    CHECK(hit->time_err == doctest::Approx(2.25));
    CHECK(hit->pos_err == doctest::Approx(0.7));

    ZoomedProcess none = z;
    none.values = {0.5, -0.1, -0.2, 0.0, -0.3};
    CHECK(!apply_error_mapping_hit(none.u, none, flat).has_value());

    // a sloped zoomed barrier can reject what a flat one accepts
    auto steep = [](double r) { return r; };
    CHECK(!apply_error_mapping_hit(z.u, z, steep).has_value());
}

TEST_CASE("min mapping returns the first attainment of the minimum") {
    ZoomedProcess z;
    z.u = 0.4;
    z.first_k = -2;
    z.offsets = {-1.6, -0.6, 0.4, 1.4};
    z.values = {0.3, -0.8, 0.1, -0.8};
    ErrorTriplet t = apply_error_mapping_min(z.u, z);
    CHECK(t.time_err == doctest::Approx(-0.6));
    CHECK(t.pos_err == doctest::Approx(-0.8));
    CHECK(t.frac == doctest::Approx(0.4));
}

TEST_CASE("triplet invariants over random paths") {
    for (int i = 0; i < 2000; ++i) {
        Stream s = create_stream(508, static_cast<std::uint64_t>(i));
        PathGrid p = sample_bm_grid(s, 64, 1.0, 0.0, 1.0);
        ErrorTriplet t = error_triplet_min(s, p);
        CHECK(t.pos_err >= 0.0);
        CHECK(t.frac >= 0.0);
        CHECK(t.frac < 1.0);
    }
}

TEST_CASE("engine-backed hit triplets agree with the grid-backed builder") {
    // Same law through two unrelated implementations: one walks the
    // crossing engine, the other samples a grid and locates the passage.
    // Capping the engine at 32 * 256 mesh steps censors it at the same
    // horizon as the stored grid, so the conditioned laws coincide.
    const int count = 20000;
    std::vector<double> via_engine, via_grid;
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(509, static_cast<std::uint64_t>(i));
        auto t = error_triplet_hit(s, 256, 1.0, 0.0, 1.0, 32 * 256);
        if (t) via_engine.push_back(t->pos_err);
    }
    BarrierSpec b = BarrierSpec::constant(1.0);
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(510, static_cast<std::uint64_t>(i));
        PathGrid p = sample_bm_grid(s, 256, 32.0, 0.0, 1.0);
        auto d = error_triplet_hit_grid(s, p, b, 0);
        if (d) via_grid.push_back(d->triplet.pos_err);
    }
    CHECK(ks_two_sample(via_engine, via_grid) < 0.025);
}
