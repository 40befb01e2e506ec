#include <doctest.h>

#include <cmath>
#include <vector>

#include "evosi/rng.hpp"
#include "evosi/stats.hpp"

using namespace evosi;

TEST_CASE("wilson interval") {
    auto w = wilson_interval(0, 100);
    CHECK(w.value == 0.0);
    CHECK(w.low == 0.0);
    CHECK(w.high > 0.0);
    auto h = wilson_interval(50, 100);
    CHECK(h.low < 0.5);
    CHECK(h.high > 0.5);
    CHECK(h.low == doctest::Approx(1.0 - h.high));
}

TEST_CASE("wilson coverage on synthetic bernoulli streams") {
    for (double p : {0.02, 0.1, 0.3}) {
        rng_t g(static_cast<std::uint64_t>(p * 1000));
        int covered = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            std::int64_t k = 0;
            for (int i = 0; i < 500; ++i) k += uniform01(g) < p;
            auto w = wilson_interval(k, 500);
            if (w.low <= p && p <= w.high) ++covered;
        }
        CHECK(covered >= 930);
    }
}

TEST_CASE("weighted least squares") {
    std::vector<double> x, y, w;
    for (double n : {1e3, 4e3, 1.6e4, 6.4e4}) {
        x.push_back(std::log(n));
        y.push_back(std::log(std::pow(n, -1.0 / 3.0)));
        w.push_back(1.0);
    }
    auto f = weighted_least_squares(x, y, w);
    CHECK(std::abs(f.slope + 1.0 / 3.0) < 1e-12);
    std::vector<double> c(4, std::log(0.2));
    auto z = weighted_least_squares(x, c, w);
    CHECK(std::abs(z.slope) < 1e-12);
    CHECK(z.intercept == doctest::Approx(std::log(0.2)));
    CHECK(f.slope_ci_low <= f.slope);
    CHECK(f.slope <= f.slope_ci_high);
}

TEST_CASE("rank test direction and ks statistic") {
    rng_t g(8);
    std::vector<double> a, b;
    for (int i = 0; i < 2000; ++i) {
        a.push_back(uniform01(g) + 0.1);
        b.push_back(uniform01(g));
    }
    CHECK(mann_whitney_z(a, b) > 3.0);
    CHECK(mann_whitney_z(b, a) < -3.0);
    std::vector<double> same(100, 1.0);
    CHECK(mann_whitney_z(same, same) == 0.0);
    CHECK(ks_statistic(b, [](double x) { return std::clamp(x, 0.0, 1.0); }) < 0.05);
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(mean({1.0, 2.0, 3.0}) == 2.0);
    CHECK(variance({1.0, 2.0, 3.0}) == 1.0);
}
