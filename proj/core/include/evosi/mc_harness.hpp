#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evosi/degree_model.hpp"
#include "evosi/epidemic_sim.hpp"
#include "evosi/stats.hpp"

namespace evosi {

enum class process_kind { avosi, ab_avosi, evosi };
enum class sequence_mode { fixed, nsw };

const char* to_string(process_kind p);
process_kind parse_process(const std::string& s);

struct experiment_plan {
    degree_model model = degree_model::regular(3);
    double rho = 1.0;
    bool lambda_critical = true;
    double lambda = 1.0; // used when lambda_critical is false
    std::vector<std::int64_t> n_grid{2000};
    std::int64_t trials_per_n = 1000;
    double epsilon = 0.05;
    double q = 0.1;
    double Q = 3.0;
    std::uint64_t master_seed = default_seed;
    process_kind process = process_kind::avosi;
    sequence_mode mode = sequence_mode::fixed;
    int workers = 0;
    // stage-1 and stage-2 runs keep adding trial batches until this many survivors are seen (0: off)
    std::int64_t min_survivors = 0;
    std::int64_t max_trials = 0; // cap for the batch loop (0: 100 x trials_per_n)

    double effective_lambda() const;
    void validate() const;
};

struct estimate {
    std::int64_t n = 0;
    double value = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    std::int64_t trials = 0;
    std::int64_t events = 0;
    double scaled = 0.0; // n^{1/3} value
};

// final sizes per trial, kept so any epsilon can be evaluated afterwards
struct outbreak_run {
    std::int64_t n = 0;
    std::vector<std::int64_t> final_sizes;
};

degree_sequence plan_sequence(const experiment_plan& plan, std::int64_t n);
std::uint64_t trial_seed(std::uint64_t master, std::int64_t n, std::int64_t trial);

trial_record run_trial(const experiment_plan& plan, const degree_sequence& fixed_seq,
                       const epidemic_params& params, std::int64_t n, std::int64_t trial);

std::vector<outbreak_run> run_outbreaks(const experiment_plan& plan);
estimate outbreak_estimate(const outbreak_run& run, double epsilon);
std::vector<estimate> estimate_outbreak_probability(const experiment_plan& plan);

struct scaling_fit {
    double slope = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    double intercept = 0.0;
};

scaling_fit fit_scaling_exponent(const std::vector<estimate>& estimates,
                                 std::int64_t min_events = 50);

struct stage1_diagnostics {
    std::int64_t n = 0;
    double q = 0.0;
    double checkpoint = 0.0;
    double N_q = 0.0;
    double window_half_width = 0.0;
    std::int64_t trials = 0;
    std::int64_t survivors = 0;
    double survival = 0.0;
    double scaled_survival = 0.0; // q^{1/2} n^{1/3} P(survive to q n^{-1/3})
    double window_fraction = 0.0;
    double ks = 0.0;
    double endpoint_mean = 0.0;
    std::vector<double> endpoints;
};

stage1_diagnostics stage1_report(const experiment_plan& plan);

struct stage2_point {
    double s = 0.0;
    double mean = 0.0, variance = 0.0;
    double mean_limit = 0.0, variance_limit = 0.0;
};

struct stage2_diagnostics {
    std::int64_t n = 0;
    std::int64_t trials = 0;
    std::int64_t survivors = 0;
    std::vector<stage2_point> points;
    double takeoff_threshold = 0.0;
    double takeoff_fraction = 0.0;
};

stage2_diagnostics stage2_report(const experiment_plan& plan, int grid_points = 6);

struct stage3_diagnostics {
    std::int64_t n = 0;
    std::int64_t trials = 0;
    double threshold = 0.0;
    std::int64_t conditioned = 0;
    std::int64_t outbreaks = 0;
    double fraction = 0.0;
    // smallest C with |I_t/n - m1 t| <= C t^2 + 5 n^{-1/3} on 99% of early rows of outbreak paths
    double band_constant = 0.0;
    std::int64_t band_rows = 0;
};

stage3_diagnostics stage3_report(const experiment_plan& plan);

struct dominance_diagnostics {
    std::int64_t n = 0;
    std::int64_t trials = 0;
    double mean_ab = 0.0, mean_evo = 0.0, mean_avo = 0.0;
    double q99_ab = 0.0, q99_evo = 0.0, q99_avo = 0.0;
    // Mann-Whitney z for "first sample larger"; the ordering is rejected when z > 2.326
    double z_ab_over_evo = 0.0;
    double z_evo_over_avo = 0.0;
    bool ordered = false;
};

dominance_diagnostics dominance_report(const experiment_plan& plan);

} // namespace evosi
