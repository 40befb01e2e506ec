#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace evosi {

struct interval {
    double value = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval for a binomial proportion
interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x); // unbiased

// sup |F_n - F| for a continuous reference CDF
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Mann-Whitney U test. Returns the normal-approximation z score (tie corrected) for the
// alternative "x tends to be larger than y"; large positive z rejects x <= y.
double mann_whitney_z(const std::vector<double>& x, const std::vector<double>& y);

double normal_cdf(double z);

struct linear_fit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double slope_ci_low = 0.0, slope_ci_high = 0.0;
};

// weighted least squares of y on x with weights w (inverse variances)
linear_fit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<double>& w);

} // namespace evosi
