#include <doctest.h>

#include <cmath>

#include "evosi/errors.hpp"
#include "evosi/mc_harness.hpp"

using namespace evosi;

namespace {

experiment_plan small_plan() {
    experiment_plan p;
    p.model = degree_model::regular(3);
    p.rho = 1.0;
    p.n_grid = {2000};
    p.trials_per_n = 2000;
    p.workers = 1;
    return p;
}

} // namespace

TEST_CASE("plan validation and process names") {
    auto p = small_plan();
    p.n_grid = {2000, 1000};
    CHECK_THROWS_AS(p.validate(), config_error);
    p.n_grid = {};
    CHECK_THROWS_AS(p.validate(), config_error);
    CHECK(parse_process("ab-avosi") == process_kind::ab_avosi);
    CHECK(std::string(to_string(process_kind::evosi)) == "evosi");
    CHECK_THROWS_AS(parse_process("sir"), config_error);
    CHECK(small_plan().effective_lambda() == doctest::Approx(1.0));
}

TEST_CASE("epsilon above one gives zero probability") {
    auto p = small_plan();
    p.epsilon = 1.1;
    p.n_grid = {200, 400};
    p.trials_per_n = 500;
    for (auto proc : {process_kind::avosi, process_kind::ab_avosi, process_kind::evosi}) {
        p.process = proc;
        for (const auto& e : estimate_outbreak_probability(p)) CHECK(e.value == 0.0);
    }
}

TEST_CASE("results do not depend on the worker count") {
    for (auto proc : {process_kind::avosi, process_kind::ab_avosi, process_kind::evosi}) {
        auto p = small_plan();
        p.process = proc;
        p.n_grid = {300, 600};
        p.trials_per_n = 700;
        p.mode = sequence_mode::nsw;
        p.model = degree_model::poisson(3.0);
        auto a = run_outbreaks(p);
        p.workers = 4;
        auto b = run_outbreaks(p);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].final_sizes == b[i].final_sizes);
    }
}

TEST_CASE("scaling fit") {
    std::vector<estimate> exact;
    for (std::int64_t n : {1000, 4000, 16000, 64000}) {
        estimate e;
        e.n = n;
        e.value = std::pow(double(n), -1.0 / 3.0);
        e.trials = 1000000;
        e.events = static_cast<std::int64_t>(e.value * e.trials);
        exact.push_back(e);
    }
    CHECK(std::abs(fit_scaling_exponent(exact).slope + 1.0 / 3.0) < 1e-12);
    for (auto& e : exact) e.value = 0.05;
    CHECK(std::abs(fit_scaling_exponent(exact).slope) < 1e-12);
    exact[2].events = 10;
    CHECK_THROWS_AS(fit_scaling_exponent(exact), insufficient_events);
    exact.pop_back();
    CHECK_THROWS_AS(fit_scaling_exponent(exact), insufficient_events);
}

TEST_CASE("subcritical rate suppresses outbreaks") {
    auto p = small_plan();
    p.n_grid = {10000};
    p.trials_per_n = 20000;
    const double crit = estimate_outbreak_probability(p).front().scaled;
    p.lambda_critical = false;
    p.lambda = critical_rate(p.model, p.rho) / 10.0;
    const double sub = estimate_outbreak_probability(p).front().scaled;
    CHECK(crit > 0.0);
    CHECK(sub < 0.1 * crit);
}

TEST_CASE("scaled probabilities agree across n") {
    auto p = small_plan();
    p.n_grid = {2000, 16000};
    p.trials_per_n = 10000;
    auto est = estimate_outbreak_probability(p);
    const auto& a = est[0];
    const auto& b = est[1];
    auto widen = [](const estimate& e) {
        const double c = std::cbrt(double(e.n));
        const double half = 1.25 * (e.ci_high - e.ci_low) / 2 * c;
        return std::pair{e.scaled - half, e.scaled + half};
    };
    auto [alo, ahi] = widen(a);
    auto [blo, bhi] = widen(b);
    CHECK(alo <= bhi);
    CHECK(blo <= ahi);
}

TEST_CASE("stage reports: degenerate cases") {
    auto p = small_plan();
    p.rho = 0.0;
    p.lambda_critical = false;
    p.lambda = 1.0;
    p.q = 0.1;
    p.trials_per_n = 200;
    auto s1 = stage1_report(p);
    CHECK(s1.N_q == doctest::Approx(3.0 * 0.1 * std::pow(2000.0, 2.0 / 3.0)));

    auto q = small_plan();
    q.q = 0.5;
    q.Q = 3.0;
    q.trials_per_n = 3000;
    auto s2 = stage2_report(q, 4);
    REQUIRE(s2.points.size() == 4);
    CHECK(s2.points[0].mean == 0.0);
    CHECK(s2.points[0].variance == 0.0);
    CHECK(s2.points[0].mean_limit == 0.0);
    CHECK(s2.points[0].variance_limit == 0.0);

    auto r = small_plan();
    r.Q = 1000.0;
    r.trials_per_n = 500;
    auto s3 = stage3_report(r);
    CHECK(s3.conditioned == 0);
    CHECK(s3.outbreaks == 0);
}

TEST_CASE("stage 1 on a moderate graph") {
    auto p = small_plan();
    p.n_grid = {100000};
    p.q = 0.1;
    p.trials_per_n = 4000;
    p.min_survivors = 300;
    auto s = stage1_report(p);
    CHECK(s.survivors >= 300);
    CHECK(s.window_fraction > 0.95);
    CHECK(s.ks < 0.15);
    for (double e : s.endpoints) CHECK(e > 0.0);
}

TEST_CASE("scaled probability is stable in epsilon above the cluster scale") {
    // 0.02 n sits below n^{2/3} at this size, so only 0.05 and 0.1 are compared
    auto p = small_plan();
    p.n_grid = {16000};
    p.trials_per_n = 20000;
    auto runs = run_outbreaks(p);
    auto a = outbreak_estimate(runs[0], 0.05);
    auto b = outbreak_estimate(runs[0], 0.1);
    CHECK(b.events <= a.events);
    CHECK(a.ci_low <= b.ci_high);
    CHECK(b.ci_low <= a.ci_high);
}

TEST_CASE("stage 2 variance at n = 1e6") {
    auto p = small_plan();
    p.n_grid = {1000000};
    p.q = 0.5;
    p.Q = 3.0;
    p.trials_per_n = 20000;
    p.min_survivors = 3000;
    p.workers = 0;
    auto s = stage2_report(p, 6);
    REQUIRE(s.survivors >= 3000);
    REQUIRE(s.points[2].s == doctest::Approx(1.5));
    CHECK(s.points[2].variance_limit == doctest::Approx(6.0));
    CHECK(std::abs(s.points[2].variance / 6.0 - 1.0) <= 0.25);
}
