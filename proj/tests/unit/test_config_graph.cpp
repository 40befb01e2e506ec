#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "evosi/config_graph.hpp"
#include "evosi/errors.hpp"

using namespace evosi;

namespace {

using edge_multiset = std::vector<std::pair<int, int>>;

edge_multiset canonical(const multi_graph& g) {
    edge_multiset e;
    for (auto [a, b] : g.ends) e.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(e.begin(), e.end());
    return e;
}

} // namespace

TEST_CASE("forced matchings") {
    rng_t g(3);
    auto one = build_configuration_model(degree_sequence({1, 1}), g);
    REQUIRE(one.edge_count() == 1);
    CHECK(canonical(one) == edge_multiset{{0, 1}});
    auto loop = build_configuration_model(degree_sequence({2, 0}), g);
    REQUIRE(loop.edge_count() == 1);
    CHECK(canonical(loop) == edge_multiset{{0, 0}});
    CHECK(loop.degree(0) == 2);
    CHECK_THROWS_AS(build_configuration_model(degree_sequence({1, 2}), g), odd_degree_sum);
}

TEST_CASE("four single stubs give each perfect matching a third of the time") {
    rng_t g(11);
    std::map<edge_multiset, int> freq;
    const int reps = 100000;
    for (int i = 0; i < reps; ++i) ++freq[canonical(build_configuration_model(degree_sequence({1, 1, 1, 1}), g))];
    CHECK(freq.size() == 3);
    for (const auto& [m, c] : freq) CHECK(std::abs(c / double(reps) - 1.0 / 3.0) < 0.01);
}

TEST_CASE("three degree-two vertices: relabelling symmetry") {
    rng_t g(17);
    std::map<edge_multiset, int> freq;
    const int reps = 150000;
    for (int i = 0; i < reps; ++i) ++freq[canonical(build_configuration_model(degree_sequence({2, 2, 2}), g))];
    // exact probabilities by enumerating the 15 matchings of stubs {0a,0b,1a,1b,2a,2b}
    std::map<edge_multiset, int> exact;
    std::vector<int> owner{0, 0, 1, 1, 2, 2};
    std::vector<int> stubs{0, 1, 2, 3, 4, 5};
    std::function<void(std::vector<int>, edge_multiset)> rec = [&](std::vector<int> left, edge_multiset acc) {
        if (left.empty()) {
            std::sort(acc.begin(), acc.end());
            ++exact[acc];
            return;
        }
        int a = left.front();
        for (std::size_t j = 1; j < left.size(); ++j) {
            auto rest = left;
            int b = rest[j];
            rest.erase(rest.begin() + j);
            rest.erase(rest.begin());
            auto next = acc;
            next.emplace_back(std::min(owner[a], owner[b]), std::max(owner[a], owner[b]));
            rec(rest, next);
        }
    };
    rec(stubs, {});
    int total = 0;
    for (const auto& [m, c] : exact) total += c;
    CHECK(total == 15);
    for (const auto& [m, c] : exact) {
        const double p = c / 15.0;
        const double se = std::sqrt(p * (1 - p) / reps);
        CHECK(std::abs(freq[m] / double(reps) - p) < 5 * se);
    }
    // relabelling 0 <-> 1 maps the multiset {00,12,12} to {11,02,02}; both equally likely
    edge_multiset a{{0, 0}, {1, 2}, {1, 2}}, b{{0, 2}, {0, 2}, {1, 1}};
    CHECK(exact[a] == exact[b]);
    CHECK(std::abs(freq[a] - freq[b]) < 5 * std::sqrt(2.0 * reps * exact[a] / 15.0));
}

TEST_CASE("degrees are preserved") {
    rng_t g(5);
    auto seq = sample_iid_degrees(degree_model::poisson(3.0), 5000, g);
    auto mg = build_configuration_model(seq, g);
    CHECK(mg.edge_count() * 2 == seq.total_degree());
    for (std::int32_t v = 0; v < mg.n; ++v) CHECK(mg.degree(v) == seq.degrees()[v]);
}

TEST_CASE("half-edge pool") {
    rng_t g(8);
    half_edge_pool one(std::vector<std::int32_t>{4});
    CHECK(one.draw(g) == 0);
    CHECK(one.owner(0) == 4);

    half_edge_pool two(std::vector<std::int32_t>{0, 1});
    two.remove(0);
    for (int i = 0; i < 10; ++i) CHECK(two.draw(g) == 1);
    two.remove(1);
    CHECK(two.empty());
    CHECK_THROWS_AS(two.draw(g), empty_pool);
    two.insert(1);
    CHECK(two.count() == 1);

    const int k = 10, draws = 1000000;
    half_edge_pool ten(std::vector<std::int32_t>(k, 0));
    std::vector<int> c(k, 0);
    for (int i = 0; i < draws; ++i) ++c[ten.draw(g)];
    const double p = 1.0 / k, sd = std::sqrt(draws * p * (1 - p));
    for (int x : c) CHECK(std::abs(x - draws * p) < 5 * sd);

    // uniformity after a removal in the middle
    ten.remove(3);
    std::fill(c.begin(), c.end(), 0);
    for (int i = 0; i < draws; ++i) ++c[ten.draw(g)];
    CHECK(c[3] == 0);
    const double p9 = 1.0 / 9, sd9 = std::sqrt(draws * p9 * (1 - p9));
    for (int i = 0; i < k; ++i)
        if (i != 3) CHECK(std::abs(c[i] - draws * p9) < 5 * sd9);
}
