#pragma once

#include <cstdint>
#include <vector>

#include "evosi/degree_model.hpp"
#include "evosi/rng.hpp"

namespace evosi {

enum class walk_kind { upper, lower };

// Degree frequencies p_{k,n} fed into the walk construction.
struct sequence_stats {
    std::vector<double> pk;

    static sequence_stats from_model(const degree_model& m);
    static sequence_stats from_sequence(const degree_sequence& s);
    double p(int k) const { return k >= 0 && k < static_cast<int>(pk.size()) ? pk[k] : 0.0; }
};

struct walk_config {
    double C = 4.0;      // constant in q_{k,n} and the -2 atom
    double eta = 1.0;    // exponential tail rate
    double C_exp = 1.0;  // exponential-moment constant entering v_n

    static walk_config for_model(const degree_model& m, double C = 4.0);
};

struct walk_spec {
    walk_kind kind = walk_kind::upper;
    std::int64_t n = 0;
    double q = 0.0;
    double rho_over_lambda = 1.0;
    double N_q = 0.0;
    std::int64_t steps = 0;
    double sigma = 1.0; // endpoint normalisation uses sigma * sqrt(N_q)
    int min_increment = -1;
    std::vector<double> prob; // prob[i] = P(increment = min_increment + i)
    std::vector<double> start_pmf;

    double p(int increment) const;
    int max_increment() const { return min_increment + static_cast<int>(prob.size()) - 1; }
    double mean() const;
    double total() const;
};

double q_kn(const walk_config& c, std::int64_t n, double q, int k);
double v_n(const walk_config& c, std::int64_t n);
double n_q(double rho_over_lambda, double m1, std::int64_t n, double q);

walk_spec y_increment_pmf(const degree_model& model, const sequence_stats& stats, std::int64_t n,
                          double q, double rho, double lambda, const walk_config& cfg);
walk_spec z_increment_pmf(const degree_model& model, const sequence_stats& stats, std::int64_t n,
                          double q, double rho, double lambda, const walk_config& cfg);

double walk_second_moment(const walk_spec& spec);

// Y: E[exp(-theta n^{-1/3} dY)] = 1, Z: E[exp(+theta n^{-1/3} dZ)] = 1
double solve_tilt(const walk_spec& spec);
// E[exp(-+theta n^{-1/3} d)] for the sign that matches the walk kind
double tilt_mgf(const walk_spec& spec, double theta);

struct walk_outcome {
    bool survived = false;
    double endpoint = 0.0;
    std::int64_t min_level = 0;
};

class walk_sampler {
public:
    explicit walk_sampler(const walk_spec& spec);
    int increment(rng_t& g) const;
    int start(rng_t& g) const;

private:
    int min_;
    std::vector<double> cdf_;
    std::vector<double> start_cdf_;
};

walk_outcome simulate_walk(const walk_spec& spec, rng_t& g);
walk_outcome simulate_walk(const walk_spec& spec, const walk_sampler& s, rng_t& g);
// fixed start value instead of the start law
walk_outcome simulate_walk_from(const walk_spec& spec, const walk_sampler& s, std::int64_t start,
                                rng_t& g);

struct survival_estimate {
    double p_hat = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    double n13_scaled = 0.0;
    std::int64_t trials = 0;
    std::int64_t survivors = 0;
    std::vector<double> conditioned_endpoints;
};

survival_estimate estimate_survival(const walk_spec& spec, std::int64_t trials,
                                    std::uint64_t master_seed, int workers = 1);

std::vector<double> conditioned_endpoint_sample(const walk_spec& spec, std::int64_t trials,
                                                std::uint64_t master_seed, int workers = 1);

} // namespace evosi
