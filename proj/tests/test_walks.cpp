#include <cmath>
#include <vector>

#include <doctest.h>

#include "bmdisc/analysis.hpp"
#include "bmdisc/limits.hpp"
#include "bmdisc/rng.hpp"
#include "bmdisc/walks.hpp"

using namespace bmdisc;

TEST_CASE("overshoot pair is nonnegative and lags the continuous passage") {
    for (int i = 0; i < 2000; ++i) {
        Stream s = create_stream(601, static_cast<std::uint64_t>(i));
        auto p = overshoot_pair(s, 10.0, 1.0, 0.0, std::int64_t{1} << 35);
        REQUIRE(p.has_value());
        CHECK(p->first >= 0.0);   // walk crossing never precedes continuous
        CHECK(p->second >= 0.0);  // crossing value clears the level
    }
}

TEST_CASE("running-min pair measures grid minus continuous minimum") {
    for (int i = 0; i < 2000; ++i) {
        Stream s = create_stream(602, static_cast<std::uint64_t>(i));
        WalkPair p = running_min_pair(s, 64, 1.0);
        CHECK(p.second >= 0.0);  // grid minimum sits above the true one
        CHECK(std::fabs(p.first) <= 64.0);
    }
}

TEST_CASE("single-interval running minimum stays inside the interval") {
    for (int i = 0; i < 2000; ++i) {
        Stream s = create_stream(603, static_cast<std::uint64_t>(i));
        WalkPair p = running_min_pair(s, 1, 1.0);
        CHECK(p.second >= 0.0);
        // grid argmin is 0 or 1 and the continuous argmin lies in [0, 1]
        CHECK(p.first >= -1.0);
        CHECK(p.first <= 1.0);
    }
}

TEST_CASE("overshoot law approaches the hit-limit position law") {
    const int count = 20000;
    std::vector<double> over;
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(604, static_cast<std::uint64_t>(i));
        auto p = overshoot_pair(s, 30.0, 1.0, 0.0, std::int64_t{1} << 35);
        if (p) over.push_back(p->second);
    }
    std::vector<double> limit;
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(605, static_cast<std::uint64_t>(i));
        try {
            limit.push_back(sample_hit_limit(s, 1.0).pos_comp);
        } catch (const step_cap_exceeded&) {
        }
    }
    CHECK(ks_two_sample(over, limit) < 0.025);
    CHECK(std::fabs(summarize(over).mean - beta_constant()) < 0.02);
}

TEST_CASE("vanishing-drift pair approaches the min-limit position law") {
    const int count = 20000;
    std::vector<double> gap;
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(606, static_cast<std::uint64_t>(i));
        gap.push_back(vanishing_drift_pair(s, 0.03125, 1.0, 1e-6).second);
    }
    std::vector<double> limit;
    for (int i = 0; i < count; ++i) {
        Stream s = create_stream(607, static_cast<std::uint64_t>(i));
        limit.push_back(sample_min_limit(s, 1.0, 1e-6).pos_comp);
    }
    CHECK(ks_two_sample(gap, limit) < 0.03);
}

TEST_CASE("walk samplers validate their parameters") {
    Stream s = create_stream(608, 0);
    CHECK_THROWS_AS(overshoot_pair(s, 0.0, 1.0, 0.0, 100), invalid_parameter);
    CHECK_THROWS_AS(overshoot_pair(s, 1.0, 1.0, -0.5, 100), invalid_parameter);
    CHECK_THROWS_AS(running_min_pair(s, 0, 1.0), invalid_parameter);
    CHECK_THROWS_AS(vanishing_drift_pair(s, 0.0, 1.0, 1e-6), invalid_parameter);
}
