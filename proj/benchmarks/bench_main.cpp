#include <benchmark/benchmark.h>

#include "evosi/comparison_walks.hpp"
#include "evosi/config_graph.hpp"
#include "evosi/degree_model.hpp"
#include "evosi/epidemic_sim.hpp"
#include "evosi/limit_theory.hpp"

using namespace evosi;

namespace {

epidemic_params critical(const degree_model& m) {
    epidemic_params p;
    p.lambda = critical_rate(m, 1.0);
    p.rho = 1.0;
    return p;
}

void bm_avosi(benchmark::State& st) {
    const auto m = degree_model::regular(3);
    const degree_sequence seq(std::vector<int>(st.range(0), 3));
    const auto p = critical(m);
    std::uint64_t i = 0;
    for (auto _ : st) benchmark::DoNotOptimize(run_avosi(seq, p, derive_seed(1, i++)).final_size);
}
BENCHMARK(bm_avosi)->Arg(1000)->Arg(64000);

void bm_ab_avosi(benchmark::State& st) {
    const auto m = degree_model::regular(3);
    const degree_sequence seq(std::vector<int>(st.range(0), 3));
    const auto p = critical(m);
    std::uint64_t i = 0;
    for (auto _ : st) benchmark::DoNotOptimize(run_ab_avosi(seq, p, derive_seed(2, i++)).final_size);
}
BENCHMARK(bm_ab_avosi)->Arg(1000)->Arg(64000);

void bm_evosi(benchmark::State& st) {
    const auto m = degree_model::regular(3);
    const degree_sequence seq(std::vector<int>(st.range(0), 3));
    const auto p = critical(m);
    std::uint64_t i = 0;
    for (auto _ : st) {
        rng_t g(derive_seed(3, i));
        auto graph = build_configuration_model(seq, g);
        benchmark::DoNotOptimize(run_evosi(graph, p, derive_seed(4, i++)).final_size);
    }
}
BENCHMARK(bm_evosi)->Arg(1000)->Arg(64000);

void bm_configuration_model(benchmark::State& st) {
    rng_t g(5);
    const auto seq = sample_iid_degrees(degree_model::poisson(3.0), st.range(0), g);
    for (auto _ : st) benchmark::DoNotOptimize(build_configuration_model(seq, g).ends.size());
}
BENCHMARK(bm_configuration_model)->Arg(100000);

void bm_walk_survival(benchmark::State& st) {
    const auto m = degree_model::regular(3);
    const auto y = y_increment_pmf(m, sequence_stats::from_model(m), 1000000, 0.1, 1.0, 1.0, walk_config::for_model(m));
    const walk_sampler s(y);
    rng_t g(6);
    for (auto _ : st) benchmark::DoNotOptimize(simulate_walk(y, s, g).survived);
}
BENCHMARK(bm_walk_survival);

void bm_f1_series(benchmark::State& st) {
    const auto lc = make_limit_constants(degree_model::regular(3), 1.0);
    double x = 0.0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(f1_series(x, 0.1, lc));
        x = x > 3 ? 0.0 : x + 0.1;
    }
}
BENCHMARK(bm_f1_series);

void bm_c_f1lim(benchmark::State& st) {
    const auto lc = make_limit_constants(degree_model::regular(3), 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(c_f1lim(lc, static_cast<int>(st.range(0))).value);
}
BENCHMARK(bm_c_f1lim)->Arg(50)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
