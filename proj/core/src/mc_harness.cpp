#include "evosi/mc_harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evosi/config_graph.hpp"
#include "evosi/errors.hpp"
#include "evosi/limit_theory.hpp"
#include "evosi/parallel.hpp"

namespace evosi {

const char* to_string(process_kind p) {
    switch (p) {
    case process_kind::avosi: return "avosi";
    case process_kind::ab_avosi: return "ab-avosi";
    case process_kind::evosi: return "evosi";
    }
    return "?";
}

process_kind parse_process(const std::string& s) {
    if (s == "avosi") return process_kind::avosi;
    if (s == "ab-avosi" || s == "ab_avosi" || s == "ab") return process_kind::ab_avosi;
    if (s == "evosi") return process_kind::evosi;
    throw config_error("unknown process '" + s + "' (expected avosi, ab-avosi or evosi)");
}

double experiment_plan::effective_lambda() const {
    return lambda_critical ? critical_rate(model, rho) : lambda;
}

void experiment_plan::validate() const {
    if (n_grid.empty()) throw config_error("n grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw config_error("n must be positive");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw config_error("n grid must be strictly increasing");
    }
    if (trials_per_n < 1) throw config_error("trials must be at least 1");
    if (!(rho >= 0.0)) throw config_error("rho must be non-negative");
    if (!lambda_critical && !(lambda > 0.0)) throw config_error("lambda must be positive");
    if (!(epsilon > 0.0)) throw config_error("epsilon must be positive");
}

degree_sequence plan_sequence(const experiment_plan& plan, std::int64_t n) {
    rng_t g(derive_seed(plan.master_seed ^ 0x5eed5e9ULL, static_cast<std::uint64_t>(n)));
    return sample_iid_degrees(plan.model, n, g);
}

std::uint64_t trial_seed(std::uint64_t master, std::int64_t n, std::int64_t trial) {
    return derive_seed(derive_seed(master, static_cast<std::uint64_t>(n)),
                       static_cast<std::uint64_t>(trial));
}

trial_record run_trial(const experiment_plan& plan, const degree_sequence& fixed_seq,
                       const epidemic_params& params, std::int64_t n, std::int64_t trial) {
    const auto seed = trial_seed(plan.master_seed, n, trial);
    degree_sequence resampled;
    const degree_sequence* seq = &fixed_seq;
    if (plan.mode == sequence_mode::nsw) {
        rng_t g(derive_seed(seed, 11));
        resampled = sample_iid_degrees(plan.model, n, g);
        seq = &resampled;
    }
    switch (plan.process) {
    case process_kind::avosi: return run_avosi(*seq, params, seed);
    case process_kind::ab_avosi: return run_ab_avosi(*seq, params, seed);
    case process_kind::evosi: {
        rng_t g(derive_seed(seed, 12));
        auto graph = build_configuration_model(*seq, g);
        return run_evosi(graph, params, seed);
    }
    }
    throw std::logic_error("unknown process");
}

namespace {

epidemic_params base_params(const experiment_plan& plan) {
    epidemic_params p;
    p.lambda = plan.effective_lambda();
    p.rho = plan.rho;
    p.epsilon = plan.epsilon;
    return p;
}

double cbrt_n(std::int64_t n) { return std::cbrt(static_cast<double>(n)); }

} // namespace

std::vector<outbreak_run> run_outbreaks(const experiment_plan& plan) {
    plan.validate();
    const auto params = base_params(plan);
    std::vector<outbreak_run> out;
    for (auto n : plan.n_grid) {
        const auto seq = plan_sequence(plan, n);
        outbreak_run r;
        r.n = n;
        r.final_sizes = parallel_map<std::int64_t>(plan.trials_per_n, plan.workers, [&](std::int64_t i) {
            return run_trial(plan, seq, params, n, i).final_size;
        });
        out.push_back(std::move(r));
    }
    return out;
}

estimate outbreak_estimate(const outbreak_run& run, double epsilon) {
    estimate e;
    e.n = run.n;
    e.trials = static_cast<std::int64_t>(run.final_sizes.size());
    for (auto s : run.final_sizes)
        if (static_cast<double>(s) > epsilon * static_cast<double>(run.n)) ++e.events;
    auto w = wilson_interval(e.events, e.trials);
    e.value = w.value;
    e.ci_low = w.low;
    e.ci_high = w.high;
    e.scaled = cbrt_n(run.n) * e.value;
    return e;
}

std::vector<estimate> estimate_outbreak_probability(const experiment_plan& plan) {
    std::vector<estimate> out;
    for (const auto& r : run_outbreaks(plan)) out.push_back(outbreak_estimate(r, plan.epsilon));
    return out;
}

scaling_fit fit_scaling_exponent(const std::vector<estimate>& est, std::int64_t min_events) {
    if (est.size() < 4) throw insufficient_events("scaling fit needs at least 4 grid points");
    std::vector<double> x, y, w;
    for (const auto& e : est) {
        if (e.events < min_events)
            throw insufficient_events("grid point n=" + std::to_string(e.n) + " has only " +
                                      std::to_string(e.events) + " outbreak events");
        x.push_back(std::log(static_cast<double>(e.n)));
        y.push_back(std::log(e.value));
        // delta-method variance of log p-hat
        const double var = (1.0 - e.value) / (e.value * static_cast<double>(e.trials));
        w.push_back(var > 0.0 ? 1.0 / var : 1e12);
    }
    auto f = weighted_least_squares(x, y, w);
    return {f.slope, f.slope_ci_low, f.slope_ci_high, f.intercept};
}

stage1_diagnostics stage1_report(const experiment_plan& plan) {
    plan.validate();
    stage1_diagnostics d;
    d.n = plan.n_grid.front();
    d.q = plan.q;
    auto params = base_params(plan);
    d.checkpoint = plan.q / cbrt_n(d.n);
    params.checkpoints = {d.checkpoint};
    params.stop_after_checkpoints = true;
    const double r = plan.rho / params.lambda;
    d.N_q = (1 + r) * moments(plan.model, 1) * plan.q * std::pow(static_cast<double>(d.n), 2.0 / 3.0);
    d.window_half_width = 2.0 * std::pow(static_cast<double>(d.n), 0.6);
    const double norm = std::sqrt(sigma_sq(plan.model, plan.rho) * d.N_q);
    const auto seq = plan_sequence(plan, d.n);
    const std::int64_t cap = plan.max_trials > 0 ? plan.max_trials : 100 * plan.trials_per_n;
    std::int64_t in_window = 0;
    while (d.trials < cap && (d.trials == 0 || d.survivors < plan.min_survivors)) {
        const auto batch = std::min(plan.trials_per_n, cap - d.trials);
        const auto first = d.trials;
        auto recs = parallel_map<checkpoint_row>(batch, plan.workers, [&](std::int64_t i) {
            return run_trial(plan, seq, params, d.n, first + i).checkpoints.front();
        });
        for (const auto& row : recs) {
            if (!row.alive) continue;
            ++d.survivors;
            if (std::abs(static_cast<double>(row.jumps) - d.N_q) <= d.window_half_width) ++in_window;
            d.endpoints.push_back(static_cast<double>(row.X_I) / norm);
        }
        d.trials += batch;
    }
    d.survival = static_cast<double>(d.survivors) / static_cast<double>(d.trials);
    d.scaled_survival = std::sqrt(plan.q) * cbrt_n(d.n) * d.survival;
    if (d.survivors > 0) {
        d.window_fraction = static_cast<double>(in_window) / static_cast<double>(d.survivors);
        d.ks = ks_statistic(d.endpoints, meander_cdf);
        d.endpoint_mean = mean(d.endpoints);
    }
    return d;
}

stage2_diagnostics stage2_report(const experiment_plan& plan, int grid_points) {
    plan.validate();
    if (grid_points < 2) throw config_error("stage 2 needs at least two grid points");
    if (!(plan.Q > plan.q)) throw config_error("stage 2 needs Q > q");
    stage2_diagnostics d;
    d.n = plan.n_grid.front();
    auto params = base_params(plan);
    const double scale = cbrt_n(d.n);
    std::vector<double> s_grid;
    for (int j = 0; j < grid_points; ++j)
        s_grid.push_back(plan.q + (plan.Q - plan.q) * j / (grid_points - 1));
    for (double s : s_grid) params.checkpoints.push_back(s / scale);
    params.stop_after_checkpoints = true;
    const auto seq = plan_sequence(plan, d.n);
    const std::int64_t cap = plan.max_trials > 0 ? plan.max_trials : 100 * plan.trials_per_n;
    std::vector<std::vector<checkpoint_row>> recs;
    std::int64_t alive = 0;
    while (d.trials < cap && (d.trials == 0 || alive < plan.min_survivors)) {
        const auto batch = std::min(plan.trials_per_n, cap - d.trials);
        const auto first = d.trials;
        auto more = parallel_map<std::vector<checkpoint_row>>(batch, plan.workers, [&](std::int64_t i) {
            auto rows = run_trial(plan, seq, params, d.n, first + i).checkpoints;
            if (!rows.front().alive) rows.resize(1);
            return rows;
        });
        for (auto& rows : more) {
            alive += rows.front().alive;
            recs.push_back(std::move(rows));
        }
        d.trials += batch;
    }
    const double m1 = moments(plan.model, 1);
    const double dl = delta(plan.model);
    const double c2 = std::pow(diffusion_coef(plan.model), 2);
    d.takeoff_threshold = m1 * std::abs(dl) * plan.Q * plan.Q * scale / 4.0;
    std::vector<std::vector<double>> incs(s_grid.size());
    std::int64_t takeoff = 0;
    for (const auto& rows : recs) {
        if (!rows.front().alive) continue;
        ++d.survivors;
        for (std::size_t j = 0; j < s_grid.size(); ++j)
            incs[j].push_back(static_cast<double>(rows[j].X_I - rows.front().X_I) / scale);
        if (static_cast<double>(rows.back().X_I) >= d.takeoff_threshold) ++takeoff;
    }
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        const double s = s_grid[j];
        d.points.push_back({s, mean(incs[j]), variance(incs[j]),
                            m1 * dl / 2.0 * (s * s - plan.q * plan.q), c2 * (s - plan.q)});
    }
    d.takeoff_fraction = d.survivors > 0 ? static_cast<double>(takeoff) / static_cast<double>(d.survivors) : 0.0;
    return d;
}

stage3_diagnostics stage3_report(const experiment_plan& plan) {
    plan.validate();
    stage3_diagnostics d;
    d.n = plan.n_grid.front();
    d.trials = plan.trials_per_n;
    const double scale = cbrt_n(d.n);
    const double T = plan.Q / scale;
    const double m1 = moments(plan.model, 1);
    d.threshold = m1 * delta(plan.model) * plan.Q * plan.Q * scale / 4.0;
    const auto seq = plan_sequence(plan, d.n);

    auto probe = base_params(plan);
    probe.checkpoints = {T};
    probe.stop_after_checkpoints = true;
    auto at_T = parallel_map<checkpoint_row>(d.trials, plan.workers, [&](std::int64_t i) {
        return run_trial(plan, seq, probe, d.n, i).checkpoints.front();
    });
    std::vector<std::int64_t> chosen;
    for (std::int64_t i = 0; i < d.trials; ++i)
        if (static_cast<double>(at_T[i].X_I) > d.threshold) chosen.push_back(i);
    d.conditioned = static_cast<std::int64_t>(chosen.size());
    if (chosen.empty()) return d;

    // rerun the chosen trials to completion; identical seeds reproduce the path up to T
    auto full = base_params(plan);
    for (int j = 1; j <= 10; ++j) full.checkpoints.push_back(0.01 * j);
    full.checkpoints.push_back(T);
    std::sort(full.checkpoints.begin(), full.checkpoints.end());
    auto recs = parallel_map<trial_record>(d.conditioned, plan.workers, [&](std::int64_t i) {
        return run_trial(plan, seq, full, d.n, chosen[i]);
    });
    std::vector<double> band;
    const double slack = 5.0 / scale;
    for (const auto& r : recs) {
        if (!r.outbreak) continue;
        ++d.outbreaks;
        for (const auto& row : r.checkpoints) {
            if (row.t > 0.1 + 1e-12) continue;
            const double dev = std::abs(static_cast<double>(row.infected) / static_cast<double>(d.n) - m1 * row.t);
            band.push_back(std::max(0.0, dev - slack) / (row.t * row.t));
        }
    }
    d.fraction = static_cast<double>(d.outbreaks) / static_cast<double>(d.conditioned);
    d.band_rows = static_cast<std::int64_t>(band.size());
    if (!band.empty()) {
        std::sort(band.begin(), band.end());
        d.band_constant = band[static_cast<std::size_t>(0.99 * static_cast<double>(band.size() - 1))];
    }
    return d;
}

dominance_diagnostics dominance_report(const experiment_plan& plan) {
    plan.validate();
    dominance_diagnostics d;
    d.n = plan.n_grid.front();
    d.trials = plan.trials_per_n;
    auto sizes = [&](process_kind k, std::uint64_t tag) {
        auto p = plan;
        p.process = k;
        p.master_seed = derive_seed(plan.master_seed, tag);
        p.n_grid = {d.n};
        auto r = run_outbreaks(p).front();
        return std::vector<double>(r.final_sizes.begin(), r.final_sizes.end());
    };
    auto ab = sizes(process_kind::ab_avosi, 1001);
    auto evo = sizes(process_kind::evosi, 1002);
    auto avo = sizes(process_kind::avosi, 1003);
    auto q99 = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[static_cast<std::size_t>(0.99 * static_cast<double>(v.size() - 1))];
    };
    d.mean_ab = mean(ab);
    d.mean_evo = mean(evo);
    d.mean_avo = mean(avo);
    d.q99_ab = q99(ab);
    d.q99_evo = q99(evo);
    d.q99_avo = q99(avo);
    d.z_ab_over_evo = mann_whitney_z(ab, evo);
    d.z_evo_over_avo = mann_whitney_z(evo, avo);
    d.ordered = d.z_ab_over_evo <= 2.326 && d.z_evo_over_avo <= 2.326;
    return d;
}

} // namespace evosi
