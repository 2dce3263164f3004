#include <cmath>

#include <doctest.h>

#include "bmdisc/analysis.hpp"
#include "bmdisc/correction.hpp"
#include "bmdisc/rng.hpp"

using namespace bmdisc;

TEST_CASE("an unreachable barrier has vanishing crossing probability") {
    BarrierQuery q{40.0, 0.0, 1.0, 50, 0.0, 1.0};
    CHECK(joint_cross_terminal_prob(q, true) < 1e-200);
    CHECK(joint_cross_terminal_prob(q, false) < 1e-200);
}

TEST_CASE("single monitoring point reduces to a normal tail") {
    // n * t = 1: the discrete path is one Gaussian value, so the joint
    // event {crossed and above y} is just {X >= b} for y <= b
    BarrierQuery q{1.2, 0.7, 1.0, 1, 0.3, 1.5};
    McEstimate mc = mc_discrete_prob(701, q, 400000);
    const double exact = 1.0 - normal_cdf((1.2 - 0.3) / 1.5);
    CHECK(std::fabs(mc.estimate - exact) < 4.0 * mc.se);
    CHECK(mc.se > 0.0);
}

TEST_CASE("y equal to the barrier collapses to the terminal tail") {
    // A terminal value above y = b is itself a crossing at the last
    // monitoring point, so the joint event is {X(t) > b} for discrete and
    // continuous paths alike and there is no discretization gap to correct.
    BarrierQuery q{1.0, 1.0, 1.0, 20, 0.0, 1.0};
    const double cont = joint_cross_terminal_prob(q, true);
    const double tail = 1.0 - normal_cdf(1.0);
    CHECK(cont == doctest::Approx(tail).epsilon(1e-10));
    McEstimate mc = mc_discrete_prob(702, q, 400000);
    CHECK(std::fabs(mc.estimate - cont) < 4.0 * mc.se);
}

TEST_CASE("the corrected probability is smaller for an upper barrier") {
    BarrierQuery q{2.0, 1.9, 1.0, 50, 0.0, 1.0};
    CHECK(joint_cross_terminal_prob(q, false) <
          joint_cross_terminal_prob(q, true));
}

TEST_CASE("correction error shrinks as monitoring becomes finer") {
    // The barrier shift itself decays like 1/sqrt(n)
    double prev_gap = 1.0;
    for (std::int64_t n : {25, 100, 400}) {
        BarrierQuery q{2.0, 1.9, 1.0, n, 0.0, 1.0};
        const double gap = joint_cross_terminal_prob(q, true) -
                           joint_cross_terminal_prob(q, false);
        CHECK(gap > 0.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    // and the residual after correction drops holding the sample noise fixed
    BarrierQuery coarse{2.0, 1.9, 1.0, 25, 0.0, 1.0};
    BarrierQuery fine{2.0, 1.9, 1.0, 400, 0.0, 1.0};
    McEstimate mc_coarse = mc_discrete_prob(703, coarse, 400000);
    McEstimate mc_fine = mc_discrete_prob(705, fine, 400000);
    const double err_coarse =
        std::fabs(mc_coarse.estimate - joint_cross_terminal_prob(coarse, false));
    const double err_fine =
        std::fabs(mc_fine.estimate - joint_cross_terminal_prob(fine, false));
    CHECK(err_fine < err_coarse);
}

TEST_CASE("queries are validated") {
    BarrierQuery bad{0.0, -1.0, 1.0, 50, 0.0, 1.0};
    CHECK_THROWS_AS(joint_cross_terminal_prob(bad, true), invalid_parameter);
    BarrierQuery bad2{1.0, 2.0, 1.0, 50, 0.0, 1.0};  // y above the barrier
    CHECK_THROWS_AS(joint_cross_terminal_prob(bad2, true), invalid_parameter);
    BarrierQuery bad3{1.0, 0.5, 1.0, 0, 0.0, 1.0};
    CHECK_THROWS_AS(mc_discrete_prob(1, bad3, 100), invalid_parameter);
    BarrierQuery bad4{1.0, 0.5, 0.7, 3, 0.0, 1.0};  // t * n not an integer
    CHECK_THROWS_AS(joint_cross_terminal_prob(bad4, true), invalid_parameter);
}