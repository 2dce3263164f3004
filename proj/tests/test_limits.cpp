#include <cmath>
#include <vector>

#include <doctest.h>

#include "bmdisc/analysis.hpp"
#include "bmdisc/limits.hpp"
#include "bmdisc/rng.hpp"

using namespace bmdisc;

TEST_CASE("limit draws are deterministic per substream") {
    Stream a = create_stream(401, 5);
    Stream b = create_stream(401, 5);
    LimitTriplet ta = sample_hit_limit(a, 1.0);
    LimitTriplet tb = sample_hit_limit(b, 1.0);
    CHECK(ta.time_comp == tb.time_comp);
    CHECK(ta.pos_comp == tb.pos_comp);
    CHECK(ta.u == tb.u);
    Stream c = create_stream(402, 5);
    Stream d = create_stream(402, 5);
    LimitTriplet tc = sample_min_limit(c, 1.0, 1e-6);
    LimitTriplet td = sample_min_limit(d, 1.0, 1e-6);
    CHECK(tc.time_comp == td.time_comp);
    CHECK(tc.pos_comp == td.pos_comp);
    CHECK(tc.u == td.u);
}

TEST_CASE("hit-limit structure: positive position, time = u + k with k >= 0") {
    std::vector<double> pos, u;
    for (int i = 0; i < 100000; ++i) {
        Stream s = create_stream(403, static_cast<std::uint64_t>(i));
        LimitTriplet t;
        try {
            t = sample_hit_limit(s, 1.0);
        } catch (const step_cap_exceeded&) {
            continue;
        }
        CHECK(t.pos_comp > 0.0);
        CHECK(t.u > 0.0);
        CHECK(t.u < 1.0);
        const double k = t.time_comp - t.u;
        CHECK(k == doctest::Approx(std::round(k)).epsilon(1e-9));
        CHECK(t.time_comp >= t.u - 1e-12);
        pos.push_back(t.pos_comp);
        u.push_back(t.u);
    }
    CHECK(std::fabs(summarize(pos).mean - beta_constant()) < 0.01);
    CHECK(ks_vs_uniform(u) < 0.0061);
}

TEST_CASE("min-limit structure: positive gap, integer time offset, any sign") {
    std::vector<double> pos, u;
    int negative_k = 0;
    for (int i = 0; i < 50000; ++i) {
        Stream s = create_stream(404, static_cast<std::uint64_t>(i));
        LimitTriplet t = sample_min_limit(s, 1.0, 1e-6);
        CHECK(t.pos_comp >= 0.0);
        const double k = t.time_comp - t.u;
        CHECK(k == doctest::Approx(std::round(k)).epsilon(1e-9));
        if (k < -0.5) ++negative_k;
        pos.push_back(t.pos_comp);
        u.push_back(t.u);
    }
    // the argmin offset ranges over all integers, so both signs must appear
    CHECK(negative_k > 5000);
    CHECK(negative_k < 45000);
    CHECK(std::fabs(summarize(pos).mean - beta_constant()) < 0.015);
    CHECK(ks_vs_uniform(u) < 0.0086);
}

TEST_CASE("sigma scales the position component linearly") {
    Stream a = create_stream(405, 0);
    Stream b = create_stream(405, 0);
    LimitTriplet t1 = sample_hit_limit(a, 1.0);
    LimitTriplet t2 = sample_hit_limit(b, 2.5);
    CHECK(t2.pos_comp == 2.5 * t1.pos_comp);
    CHECK(t2.time_comp == t1.time_comp);
    CHECK(t2.u == t1.u);
}

TEST_CASE("limit samplers validate their parameters") {
    Stream s = create_stream(406, 0);
    CHECK_THROWS_AS(sample_hit_limit(s, 0.0), invalid_parameter);
    CHECK_THROWS_AS(sample_min_limit(s, 1.0, 0.0), invalid_parameter);
    CHECK_THROWS_AS(sample_min_limit(s, 1.0, 1.0), invalid_parameter);
    CHECK_THROWS_AS(sample_min_limit(s, -1.0, 1e-6), invalid_parameter);
}
