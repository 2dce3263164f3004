#include <cmath>
#include <vector>

#include <doctest.h>

#include "bmdisc/analysis.hpp"
#include "bmdisc/rng.hpp"

using namespace bmdisc;

TEST_CASE("two-sample KS on a hand-checked pair") {
    std::vector<double> a = {1.0, 2.0};
    std::vector<double> b = {1.5};
    CHECK(ks_two_sample(a, b) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("uniform-grid sample has KS distance 1/(N+1)") {
    const int n = 9;
    std::vector<double> xs;
    for (int i = 1; i <= n; ++i) {
        xs.push_back(static_cast<double>(i) / (n + 1));
    }
    CHECK(ks_vs_uniform(xs) == doctest::Approx(1.0 / (n + 1)).epsilon(1e-12));
}

TEST_CASE("summary quantiles follow the order-statistic convention") {
    std::vector<double> xs;
    for (int i = 100; i >= 1; --i) xs.push_back(i);
    EmpiricalSummary s = summarize(xs);
    CHECK(s.count == 100);
    CHECK(s.q50 == 50.0);
    CHECK(s.q01 == 1.0);
    CHECK(s.q99 == 99.0);
    CHECK(s.mean == doctest::Approx(50.5));
    CHECK_THROWS_AS(summarize(std::vector<double>{}), invalid_parameter);
}

TEST_CASE("mean confidence interval on a two-point sample") {
    std::vector<double> xs = {0.0, 2.0};
    MeanCi ci = mean_ci(xs, 0.95);
    CHECK(ci.mean == doctest::Approx(1.0));
    // se = sqrt(var/N) = sqrt(2/2) = 1, normal 97.5% point 1.95996
    CHECK(ci.half_width == doctest::Approx(1.959964).epsilon(1e-4));
}

TEST_CASE("rate slope is exact on exact power-law medians") {
    std::vector<double> ns = {256.0, 1024.0, 4096.0};
    std::vector<double> med;
    for (double n : ns) med.push_back(3.7 * std::pow(n, -0.5));
    CHECK(median_rate_slope(ns, med) == doctest::Approx(-0.5).epsilon(1e-10));
    std::vector<double> med2;
    for (double n : ns) med2.push_back(0.2 * std::pow(n, -1.0));
    CHECK(median_rate_slope(ns, med2) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("beta constant matches its 12-digit value") {
    CHECK(std::fabs(beta_constant() - 0.582597157939) < 1e-10);
}

TEST_CASE("normal cdf and quantile invert each other") {
    for (double p : {0.001, 0.1, 0.5, 0.9, 0.999}) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
}
