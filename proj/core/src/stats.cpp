#include "evosi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evosi {

interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) throw std::invalid_argument("wilson interval needs at least one trial");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {p, std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

double mean(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    double m = mean(x), s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double mann_whitney_z(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t nx = x.size(), ny = y.size();
    if (nx == 0 || ny == 0) throw std::invalid_argument("empty sample");
    std::vector<std::pair<double, int>> all;
    all.reserve(nx + ny);
    for (double v : x) all.emplace_back(v, 0);
    for (double v : y) all.emplace_back(v, 1);
    std::sort(all.begin(), all.end());
    double rank_x = 0.0, tie_term = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        double r = 0.5 * static_cast<double>(i + 1 + j); // average of ranks i+1..j
        double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].second == 0) rank_x += r;
        i = j;
    }
    const double a = static_cast<double>(nx), b = static_cast<double>(ny), N = a + b;
    const double U = rank_x - a * (a + 1) / 2;
    const double mu = a * b / 2;
    const double var = a * b / 12 * ((N + 1) - tie_term / (N * (N - 1)));
    if (var <= 0.0) return 0.0;
    return (U - mu) / std::sqrt(var);
}

linear_fit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<double>& w) {
    if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
        throw std::invalid_argument("weighted fit needs matching vectors of length >= 2");
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("degenerate design in weighted fit");
    linear_fit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    // weights are inverse variances, so the slope variance is 1/sxx
    f.slope_se = std::sqrt(1.0 / sxx);
    f.slope_ci_low = f.slope - 1.959963984540054 * f.slope_se;
    f.slope_ci_high = f.slope + 1.959963984540054 * f.slope_se;
    return f;
}

} // namespace evosi
