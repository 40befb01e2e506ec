#include "evosi/comparison_walks.hpp"

#include <algorithm>
#include <cmath>

#include "evosi/errors.hpp"
#include "evosi/parallel.hpp"
#include "evosi/stats.hpp"

namespace evosi {

sequence_stats sequence_stats::from_model(const degree_model& m) { return {m.pmf()}; }

sequence_stats sequence_stats::from_sequence(const degree_sequence& s) {
    sequence_stats st;
    st.pk.resize(s.counts().size());
    for (std::size_t k = 0; k < st.pk.size(); ++k) st.pk[k] = s.empirical_pmf(static_cast<int>(k));
    return st;
}

walk_config walk_config::for_model(const degree_model& m, double C) {
    auto t = m.tail();
    return {C, t.eta, t.C};
}

double walk_spec::p(int increment) const {
    int i = increment - min_increment;
    return i >= 0 && i < static_cast<int>(prob.size()) ? prob[i] : 0.0;
}

double walk_spec::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < prob.size(); ++i) m += (min_increment + static_cast<double>(i)) * prob[i];
    return m;
}

double walk_spec::total() const {
    double s = 0.0;
    for (double x : prob) s += x;
    return s;
}

double q_kn(const walk_config& c, std::int64_t n, double q, int k) {
    return c.C * q * std::pow(static_cast<double>(n), 2.0 / 3.0) * std::exp(-c.eta * k / 2.0);
}

double v_n(const walk_config& c, std::int64_t n) {
    return 4.0 + std::log(static_cast<double>(n) * c.C_exp) / c.eta;
}

double n_q(double rho_over_lambda, double m1, std::int64_t n, double q) {
    return (1.0 + rho_over_lambda) * m1 * q * std::pow(static_cast<double>(n), 2.0 / 3.0);
}

namespace {

walk_spec base_spec(walk_kind kind, const degree_model& model, const sequence_stats& stats,
                    std::int64_t n, double q, double rho, double lambda) {
    if (n < 1 || !(q > 0.0) || !(lambda > 0.0) || rho < 0.0)
        throw std::invalid_argument("walk needs n >= 1, q > 0, lambda > 0, rho >= 0");
    walk_spec s;
    s.kind = kind;
    s.n = n;
    s.q = q;
    s.rho_over_lambda = rho / lambda;
    s.N_q = n_q(s.rho_over_lambda, moments(model, 1), n, q);
    double shift = std::pow(static_cast<double>(n), 0.6);
    double steps = kind == walk_kind::upper ? s.N_q - shift : s.N_q + shift;
    s.steps = static_cast<std::int64_t>(std::floor(std::max(0.0, steps)));
    s.sigma = std::sqrt(sigma_sq(model, rho));
    s.start_pmf = stats.pk;
    return s;
}

void finish_spec(walk_spec& s, std::vector<double> mass_by_inc) {
    // mass_by_inc indexed from min_increment; -1 slot receives the remainder
    double others = 0.0;
    const int minus_one = -1 - s.min_increment;
    for (std::size_t i = 0; i < mass_by_inc.size(); ++i) {
        if (static_cast<int>(i) == minus_one) continue;
        double x = mass_by_inc[i];
        if (!(x >= 0.0 && x <= 1.0)) throw invalid_regime("walk increment mass outside [0,1]");
        others += x;
    }
    double rest = 1.0 - others;
    if (!(rest >= 0.0 && rest <= 1.0)) throw invalid_regime("remainder mass outside [0,1]");
    mass_by_inc[minus_one] = rest;
    while (mass_by_inc.size() > 1 && mass_by_inc.back() == 0.0) mass_by_inc.pop_back();
    s.prob = std::move(mass_by_inc);
}

} // namespace

walk_spec y_increment_pmf(const degree_model& model, const sequence_stats& stats, std::int64_t n,
                          double q, double rho, double lambda, const walk_config& cfg) {
    auto s = base_spec(walk_kind::upper, model, stats, n, q, rho, lambda);
    const double nd = static_cast<double>(n);
    const double m1 = moments(model, 1);
    const double den = (1.0 + s.rho_over_lambda) * (m1 * nd - 3.0 * s.N_q);
    if (!(den > 0.0)) throw invalid_regime("m1 n <= 3 N_q");
    const int kmax = static_cast<int>(std::floor(v_n(cfg, n)));
    s.min_increment = -1;
    std::vector<double> mass(static_cast<std::size_t>(std::max(kmax - 2, 1) + 2), 0.0);
    for (int k = 3; k <= kmax; ++k)
        mass[k - 2 + 1] = (k * nd * stats.p(k) + q_kn(cfg, n, q, k)) / den;
    double rewire_inf = rho > 0.0 ? 2.0 * s.N_q / ((1.0 + lambda / rho) * nd) : 0.0;
    mass[1] = (2.0 * nd * stats.p(2) + q_kn(cfg, n, q, 2)) / den + rewire_inf;
    finish_spec(s, std::move(mass));
    return s;
}

walk_spec z_increment_pmf(const degree_model& model, const sequence_stats& stats, std::int64_t n,
                          double q, double rho, double lambda, const walk_config& cfg) {
    auto s = base_spec(walk_kind::lower, model, stats, n, q, rho, lambda);
    const double nd = static_cast<double>(n);
    const double m1 = moments(model, 1);
    const double r = 1.0 + s.rho_over_lambda;
    const double den_plus = r * (m1 * nd + 3.0 * s.N_q);
    const double den_minus = r * (m1 * nd - 3.0 * s.N_q);
    if (!(den_minus > 0.0)) throw invalid_regime("m1 n <= 3 N_q");
    const int kmax = static_cast<int>(std::floor(std::log(nd * cfg.C_exp) / cfg.eta));
    s.min_increment = -2;
    std::vector<double> mass(static_cast<std::size_t>(std::max(kmax - 2, 0) + 3), 0.0);
    for (int k = 2; k <= kmax; ++k) {
        double knp = k * nd * stats.p(k);
        mass[k - 2 + 2] = (knp - std::min(knp, 2.0 * q_kn(cfg, n, q, k))) / den_plus;
    }
    mass[0] = cfg.C * s.N_q / den_minus;
    finish_spec(s, std::move(mass));
    return s;
}

double walk_second_moment(const walk_spec& spec) {
    double m = 0.0;
    for (std::size_t i = 0; i < spec.prob.size(); ++i) {
        double x = spec.min_increment + static_cast<double>(i);
        m += x * x * spec.prob[i];
    }
    return m;
}

namespace {

// E[e^{a d}] - 1 and its derivative in a, summed with expm1 to keep small tilts accurate
void mgf_minus_one(const walk_spec& s, double a, double& f, double& df) {
    f = 0.0;
    df = 0.0;
    for (std::size_t i = 0; i < s.prob.size(); ++i) {
        double d = s.min_increment + static_cast<double>(i);
        if (s.prob[i] == 0.0) continue;
        f += s.prob[i] * std::expm1(a * d);
        df += s.prob[i] * d * std::exp(a * d);
    }
}

double tilt_sign(const walk_spec& s) { return s.kind == walk_kind::upper ? -1.0 : 1.0; }

} // namespace

double tilt_mgf(const walk_spec& spec, double theta) {
    double f, df;
    double scale = std::pow(static_cast<double>(spec.n), -1.0 / 3.0);
    mgf_minus_one(spec, tilt_sign(spec) * theta * scale, f, df);
    return 1.0 + f;
}

double solve_tilt(const walk_spec& spec) {
    const double sgn = tilt_sign(spec);
    const double scale = std::pow(static_cast<double>(spec.n), -1.0 / 3.0);
    const double m = spec.mean();
    // the root exists only when the tilted exponent starts downhill and eventually turns up
    bool has_opposite = false;
    for (std::size_t i = 0; i < spec.prob.size(); ++i) {
        double d = spec.min_increment + static_cast<double>(i);
        if (spec.prob[i] > 0.0 && sgn * d > 0.0) has_opposite = true;
    }
    if (!(sgn * m < 0.0) || !has_opposite)
        throw no_root("tilt equation has no positive root for this walk");
    auto g = [&](double theta, double& f, double& df) {
        mgf_minus_one(spec, sgn * theta * scale, f, df);
        df *= sgn * scale;
    };
    double lo = 0.0, hi = 1.0, f, df;
    for (;;) {
        g(hi, f, df);
        if (f > 0.0) break;
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw no_root("tilt root not bracketed");
    }
    // f(lo) <= 0 < f(hi) with lo possibly at the trivial root 0; move lo off it
    if (lo == 0.0) {
        double a = hi;
        for (int i = 0; i < 200; ++i) {
            a *= 0.5;
            g(a, f, df);
            if (f < 0.0) {
                lo = a;
                break;
            }
            hi = a;
        }
        if (lo == 0.0) throw no_root("tilt root indistinguishable from zero");
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        g(x, f, df);
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        double nx = df != 0.0 ? x - f / df : 0.5 * (lo + hi);
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (std::abs(nx - x) <= 1e-14 * std::abs(nx) || hi - lo <= 1e-15 * hi) return nx;
        x = nx;
    }
    throw no_root("tilt iteration did not converge");
}

walk_sampler::walk_sampler(const walk_spec& spec) : min_(spec.min_increment) {
    double s = 0.0;
    for (double p : spec.prob) cdf_.push_back(s += p);
    cdf_.back() = 1.0;
    s = 0.0;
    for (double p : spec.start_pmf) start_cdf_.push_back(s += p);
    if (start_cdf_.empty()) start_cdf_.push_back(1.0);
    start_cdf_.back() = 1.0;
}

int walk_sampler::increment(rng_t& g) const {
    double u = uniform01(g);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    auto i = std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1);
    return min_ + static_cast<int>(i);
}

int walk_sampler::start(rng_t& g) const {
    double u = uniform01(g);
    auto it = std::upper_bound(start_cdf_.begin(), start_cdf_.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - start_cdf_.begin(), start_cdf_.size() - 1));
}

walk_outcome simulate_walk_from(const walk_spec& spec, const walk_sampler& s, std::int64_t start,
                                rng_t& g) {
    if (spec.steps < 1) throw invalid_regime("walk horizon is shorter than one step");
    walk_outcome o;
    std::int64_t y = start;
    o.min_level = y;
    if (y <= 0) return o;
    for (std::int64_t l = 0; l < spec.steps; ++l) {
        y += s.increment(g);
        if (y < o.min_level) o.min_level = y;
        if (y <= 0) return o;
    }
    o.survived = true;
    o.endpoint = static_cast<double>(y) / (spec.sigma * std::sqrt(spec.N_q));
    return o;
}

walk_outcome simulate_walk(const walk_spec& spec, const walk_sampler& s, rng_t& g) {
    return simulate_walk_from(spec, s, s.start(g), g);
}

walk_outcome simulate_walk(const walk_spec& spec, rng_t& g) {
    walk_sampler s(spec);
    return simulate_walk(spec, s, g);
}

survival_estimate estimate_survival(const walk_spec& spec, std::int64_t trials,
                                    std::uint64_t master_seed, int workers) {
    if (spec.steps < 1) throw invalid_regime("walk horizon is shorter than one step");
    walk_sampler sampler(spec);
    auto out = parallel_map<walk_outcome>(trials, workers, [&](std::int64_t i) {
        rng_t g(derive_seed(master_seed, static_cast<std::uint64_t>(i)));
        return simulate_walk(spec, sampler, g);
    });
    survival_estimate e;
    e.trials = trials;
    for (const auto& o : out) {
        if (!o.survived) continue;
        ++e.survivors;
        e.conditioned_endpoints.push_back(o.endpoint);
    }
    auto w = wilson_interval(e.survivors, trials);
    e.p_hat = w.value;
    e.ci_low = w.low;
    e.ci_high = w.high;
    e.n13_scaled = std::cbrt(static_cast<double>(spec.n)) * e.p_hat;
    return e;
}

std::vector<double> conditioned_endpoint_sample(const walk_spec& spec, std::int64_t trials,
                                                std::uint64_t master_seed, int workers) {
    auto e = estimate_survival(spec, trials, master_seed, workers);
    if (e.survivors < 100) throw insufficient_survivors("fewer than 100 surviving walks");
    return std::move(e.conditioned_endpoints);
}

} // namespace evosi
