#pragma once

#include <cstdint>
#include <vector>

#include "evosi/degree_model.hpp"
#include "evosi/rng.hpp"

namespace evosi {

struct limit_constants {
    double m1 = 0.0;
    double delta = 0.0;
    double sigma_sq = 0.0;
    double rho_over_lambda = 0.0; // at lambda = lambda_c
    double c_diff = 0.0;          // sqrt(m3 - 3 m2 + 2 m1)
    double c_par = 0.0;           // m1 delta / (2 c_diff)
    double c_prime = 0.0;         // (4 c_par)^{1/3} sigma sqrt((1 + rho/lambda) m1) / c_diff
};

limit_constants make_limit_constants(const degree_model& model, double rho);
// from raw inputs; used to check that only these quantities matter
limit_constants make_limit_constants(double m1, double m2, double m3, double sigma_sq,
                                     double rho_over_lambda);

// F2(x, q) = int_0^inf exp(-(b - x) u - c2 u^2 - u^3/3) du after rescaling t = u / (2 c_par^2)^{1/3}
double f2(double x, double q, const limit_constants& lc);

struct series_value {
    double value = 0.0;
    double truncation_bound = 0.0;
    int terms = 0;
};

// Airy series for F1; 0 when delta <= 0
series_value f1_series_detail(double x, double q, const limit_constants& lc);
double f1_series(double x, double q, const limit_constants& lc);

struct mc_estimate {
    double estimate = 0.0;
    double std_error = 0.0;
    double truncation_bound = 0.0; // ruin probability after the simulated horizon
    double horizon = 0.0;
    std::int64_t paths = 0;
};

// Path simulation of P(sigma x sqrt((1+rho/lambda) m1 q) + (m1 delta/2)(s^2-q^2) + C B_{s-q} > 0, s >= q).
// All x values share the same noise, so estimates are monotone in x path by path.
std::vector<mc_estimate> f1_mc_oracle_grid(const std::vector<double>& xs, double q,
                                           const limit_constants& lc, std::uint64_t seed,
                                           std::int64_t paths, double dt);
mc_estimate f1_mc_oracle(double x, double q, const limit_constants& lc, std::uint64_t seed,
                         std::int64_t paths, double dt);
// smallest horizon whose post-horizon ruin bound is below `target`
double f1_mc_horizon(const limit_constants& lc, double target, double* bound = nullptr);

double meander_cdf(double x);
double meander_sample(rng_t& g);

series_value c_f1lim(const limit_constants& lc, int zeros = 50);
// (pi sigma^2 (1 + rho/lambda) / (2 m1))^{-1/2}
double walk_limit_factor(const limit_constants& lc);
// sigma^{-1} sqrt(2 m1 / (pi (1 + rho/lambda))): q^{1/2} c_{q,Y} as q -> 0
double walk_survival_limit(const limit_constants& lc);
double c_main(const limit_constants& lc, int zeros = 50);

// E[F1(M, q)] with M a meander endpoint; finite-q consistency check
double expected_f1_meander(double q, const limit_constants& lc);

} // namespace evosi
