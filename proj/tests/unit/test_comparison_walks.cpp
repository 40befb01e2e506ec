#include <doctest.h>

#include <cmath>
#include <vector>

#include "evosi/comparison_walks.hpp"
#include "evosi/epidemic_sim.hpp"
#include "evosi/errors.hpp"

using namespace evosi;

namespace {

struct walk_pair {
    walk_spec y, z;
};

walk_pair walks(const degree_model& m, std::int64_t n, double q, double C = 4.0) {
    auto st = sequence_stats::from_model(m);
    auto cfg = walk_config::for_model(m, C);
    const double rho = 1.0, lambda = critical_rate(m, rho);
    return {y_increment_pmf(m, st, n, q, rho, lambda, cfg), z_increment_pmf(m, st, n, q, rho, lambda, cfg)};
}

// CDF of an increment law on the integer grid lo..hi
std::vector<double> cdf_on(const walk_spec& w, int lo, int hi) {
    std::vector<double> c;
    double s = 0.0;
    for (int a = lo; a <= hi; ++a) c.push_back(s += w.p(a));
    return c;
}

} // namespace

TEST_CASE("walk pmfs are normalised and have the right support") {
    for (auto m : {degree_model::regular(3), degree_model::poisson(3.0)})
        for (std::int64_t n : {1000000LL, 100000000LL}) {
            auto w = walks(m, n, 0.1);
            CHECK(w.y.total() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(w.z.total() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(w.y.min_increment == -1);
            CHECK(w.z.min_increment == -2);
            for (double x : w.y.prob) CHECK((x >= 0.0 && x <= 1.0));
            for (double x : w.z.prob) CHECK((x >= 0.0 && x <= 1.0));
            CHECK(w.z.p(-2) > 0.0);
        }
}

TEST_CASE("regular(3) upper walk support") {
    auto w = walks(degree_model::regular(3), 1000000, 0.1);
    // k = 3 carries the sequence mass; other k only the small q_{k,n} perturbation
    CHECK(w.y.p(1) > 0.2);
    for (int inc = 2; inc <= w.y.max_increment(); ++inc) CHECK(w.y.p(inc) < 1e-3);
    CHECK(w.y.p(0) > 0.0);
}

TEST_CASE("scaled means have opposite signs and settle in n") {
    for (auto m : {degree_model::regular(3), degree_model::poisson(3.0)}) {
        std::vector<double> ys, zs;
        for (std::int64_t n : {1000000LL, 10000000LL, 100000000LL}) {
            auto w = walks(m, n, 0.1);
            ys.push_back(std::cbrt(double(n)) * w.y.mean());
            zs.push_back(std::cbrt(double(n)) * w.z.mean());
        }
        for (std::size_t i = 0; i < ys.size(); ++i) {
            CHECK(ys[i] > 0.0);
            CHECK(zs[i] < 0.0);
        }
        for (std::size_t i = 1; i < ys.size(); ++i) {
            CHECK(std::abs(ys[i] / ys[i - 1] - 1.0) < 0.10);
            CHECK(std::abs(zs[i] / zs[i - 1] - 1.0) < 0.10);
        }
    }
    // the -2 atom decays like n^{-1/3}
    auto a = walks(degree_model::regular(3), 1000000, 0.1).z.p(-2);
    auto b = walks(degree_model::regular(3), 1000000000, 0.1).z.p(-2);
    CHECK(a / b == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("second moment approaches sigma squared") {
    for (std::int64_t n : {1000000LL, 100000000LL}) {
        const double tol = 5.0 / std::cbrt(double(n));
        auto r = walks(degree_model::regular(3), n, 0.1);
        CHECK(std::abs(walk_second_moment(r.y) - 1.0) <= tol);
        CHECK(std::abs(walk_second_moment(r.z) - 1.0) <= tol);
        auto p = walks(degree_model::poisson(3.0), n, 0.1);
        CHECK(std::abs(walk_second_moment(p.y) - 3.0) <= tol);
        CHECK(std::abs(walk_second_moment(p.z) - 3.0) <= tol);
    }
    walk_spec zero;
    zero.n = 8;
    zero.min_increment = 0;
    zero.prob = {1.0};
    CHECK(walk_second_moment(zero) == 0.0);
}

TEST_CASE("exponential tilt") {
    walk_spec sym;
    sym.n = 1000;
    sym.min_increment = -1;
    sym.prob = {0.5, 0.0, 0.5};
    CHECK_THROWS_AS(solve_tilt(sym), no_root);

    std::vector<double> thetas;
    for (std::int64_t n : {1000000LL, 100000000LL}) {
        auto w = walks(degree_model::regular(3), n, 0.1);
        const double ty = solve_tilt(w.y);
        CHECK(ty > 0.0);
        CHECK(std::abs(tilt_mgf(w.y, ty) - 1.0) < 1e-10);
        const double tz = solve_tilt(w.z);
        CHECK(tz > 0.0);
        CHECK(std::abs(tilt_mgf(w.z, tz) - 1.0) < 1e-10);
        thetas.push_back(ty);
        // per-step multiplicative mean of exp(-theta n^{-1/3} Y) is one
        double mg = 0.0;
        for (int a = w.y.min_increment; a <= w.y.max_increment(); ++a)
            mg += w.y.p(a) * std::exp(-ty * a / std::cbrt(double(n)));
        CHECK(std::abs(mg - 1.0) < 1e-10);
    }
    CHECK(std::abs(thetas[1] / thetas[0] - 1.0) < 0.10);
}

TEST_CASE("walk simulation edge cases") {
    auto w = walks(degree_model::regular(3), 1000000, 0.1);
    walk_sampler s(w.y);
    rng_t g(1);
    CHECK_FALSE(simulate_walk_from(w.y, s, 0, g).survived);

    walk_spec up;
    up.n = 1000;
    up.N_q = 100;
    up.steps = 100;
    up.min_increment = 1;
    up.prob = {1.0};
    up.start_pmf = {0.0, 1.0};
    for (int i = 0; i < 100; ++i) {
        auto o = simulate_walk(up, g);
        CHECK(o.survived);
        CHECK(o.min_level == 1);
    }
    walk_spec none = up;
    none.steps = 0;
    CHECK_THROWS_AS(simulate_walk(none, g), invalid_regime);

    // survival is impossible, so endpoints cannot be collected
    walk_spec down = up;
    down.min_increment = -1;
    down.start_pmf = {0.0, 1.0};
    CHECK_THROWS_AS(conditioned_endpoint_sample(down, 1000, 3, 1), insufficient_survivors);
}

TEST_CASE("survival estimates are deterministic across worker counts") {
    auto w = walks(degree_model::regular(3), 1000000, 0.1);
    auto a = estimate_survival(w.y, 4000, 17, 1);
    auto b = estimate_survival(w.y, 4000, 17, 3);
    CHECK(a.survivors == b.survivors);
    CHECK(a.conditioned_endpoints == b.conditioned_endpoints);
    for (double e : a.conditioned_endpoints) CHECK(e > 0.0);
    auto z = estimate_survival(w.z, 4000, 17, 1);
    CHECK(z.survivors <= a.survivors);
}

TEST_CASE("increment laws are ordered on in-box states") {
    const auto m = degree_model::regular(3);
    const std::int64_t n = 1000000;
    const double q = 0.1;
    for (double C : {4.0, 8.0}) {
        auto cfg = walk_config::for_model(m, C);
        auto st = sequence_stats::from_model(m);
        auto y = y_increment_pmf(m, st, n, q, 1.0, 1.0, cfg);
        auto z = z_increment_pmf(m, st, n, q, 1.0, 1.0, cfg);
        const double Nq = y.N_q;
        const int vmax = static_cast<int>(std::floor(v_n(cfg, n)));
        rng_t g(static_cast<std::uint64_t>(C));
        int tested = 0;
        for (int rep = 0; rep < 3000 && tested < 500; ++rep) {
            // for Regular(3) the S_3 band forces I + sum_{k != 3} S_k <= q_3 / 4
            std::vector<std::int64_t> S(vmax + 1, 0);
            const auto budget = static_cast<std::int64_t>(std::floor(q_kn(cfg, n, q, 3) / 4.0));
            const auto I = 1 + static_cast<std::int64_t>(uniform_below(g, static_cast<std::uint64_t>(budget / 2)));
            const auto share = (budget - I) / vmax;
            std::int64_t others = 0;
            for (int k = 0; k <= vmax; ++k) {
                if (k == 3) continue;
                const auto hi = std::min<std::int64_t>(static_cast<std::int64_t>(q_kn(cfg, n, q, k) / (k + 1)), share);
                S[k] = static_cast<std::int64_t>(uniform_below(g, static_cast<std::uint64_t>(hi) + 1));
                others += S[k];
            }
            S[3] = n - I - others;
            REQUIRE(std::abs(double(S[3]) - double(n)) <= q_kn(cfg, n, q, 3) / 4.0);
            REQUIRE(I <= 2 * Nq);
            const auto X_I = 1 + static_cast<std::int64_t>(uniform_below(g, static_cast<std::uint64_t>(C * Nq)));
            epidemic_state s;
            s.n = n;
            s.S_k = S;
            s.S_count = n - I;
            s.I_count = I;
            s.X_I = X_I;
            s.X_t = X_I + s.susceptible_half_edges();
            if (std::abs(double(s.X_t - 1) - 3.0 * n) > 3.0 * Nq) continue;
            REQUIRE(s.ledger_ok());
            auto d = avosi_jump_distribution(s, 1.0, 1.0);
            // increment law of X_I under one jump
            walk_spec u;
            u.min_increment = -2;
            u.prob.assign(vmax + 1, 0.0);
            u.prob[0] = d.pair_infected;
            u.prob[1] = d.rewire_susceptible;
            u.prob[2] = d.rewire_infected;
            for (std::size_t k = 1; k < d.infect.size(); ++k) u.prob[k] += d.infect[k];
            const int hi = std::max({u.max_increment(), y.max_increment(), z.max_increment()});
            auto cz = cdf_on(z, -2, hi), cu = cdf_on(u, -2, hi), cy = cdf_on(y, -2, hi);
            for (std::size_t i = 0; i < cz.size(); ++i) {
                CHECK(cz[i] >= cu[i] - 1e-14);
                CHECK(cu[i] >= cy[i] - 1e-14);
            }
            ++tested;
        }
        CHECK(tested >= 100);
    }
}
