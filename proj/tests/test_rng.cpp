#include <cmath>
#include <vector>

#include <doctest.h>

#include "bmdisc/analysis.hpp"
#include "bmdisc/rng.hpp"

using namespace bmdisc;

TEST_CASE("equal seed and shard reproduce the same sequence") {
    Stream a = create_stream(1, 0);
    Stream b = create_stream(1, 0);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_uniform(a) == sample_uniform(b));
    }
}

TEST_CASE("different shard or seed decorrelate the sequence") {
    Stream a = create_stream(1, 0);
    Stream b = create_stream(1, 1);
    Stream c = create_stream(2, 0);
    int diff_shard = 0;
    int diff_seed = 0;
    Stream a2 = create_stream(1, 0);
    for (int i = 0; i < 100; ++i) {
        const double x = sample_uniform(a);
        if (x != sample_uniform(b)) ++diff_shard;
        if (sample_uniform(a2) != sample_uniform(c)) ++diff_seed;
    }
    CHECK(diff_shard > 90);
    CHECK(diff_seed > 90);
}

TEST_CASE("uniform draws pass a KS test against U(0,1)") {
    Stream s = create_stream(77, 0);
    std::vector<double> xs(100000);
    for (double& x : xs) {
        x = sample_uniform(s);
        CHECK(x > 0.0);
        CHECK(x < 1.0);
    }
    CHECK(ks_vs_uniform(xs) < 0.0061);
}

TEST_CASE("normal draws have the requested moments") {
    Stream s = create_stream(78, 0);
    std::vector<double> xs(200000);
    for (double& x : xs) x = sample_normal(s, 1.5, 2.0);
    EmpiricalSummary sum = summarize(xs);
    CHECK(sum.mean == doctest::Approx(1.5).epsilon(0.02));
    CHECK(sum.variance == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("inverse Gaussian draws have the requested moments") {
    // mean mu, variance mu^3 / lambda
    Stream s = create_stream(79, 0);
    std::vector<double> xs(200000);
    for (double& x : xs) {
        x = sample_inverse_gaussian(s, 2.0, 1.0);
        CHECK(x > 0.0);
    }
    EmpiricalSummary sum = summarize(xs);
    CHECK(sum.mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(sum.variance == doctest::Approx(8.0).epsilon(0.08));
}

TEST_CASE("parameter validation rejects bad draws") {
    Stream s = create_stream(1, 0);
    CHECK_THROWS_AS(sample_normal(s, 0.0, -1.0), invalid_parameter);
    CHECK_THROWS_AS(sample_inverse_gaussian(s, 0.0, 1.0), invalid_parameter);
    CHECK_THROWS_AS(sample_inverse_gaussian(s, 1.0, 0.0), invalid_parameter);
}
