#include "evosi/limit_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "evosi/airy.hpp"
#include "evosi/errors.hpp"

namespace evosi {

namespace {

constexpr int asym_order = 8;         // orders of the Laplace expansion subtracted from F2
constexpr double ai_sup = 0.53566666; // max |Ai| on the real line, rounded up
constexpr int max_terms = 200;

const std::vector<double>& zero_table() {
    static const std::vector<double> z = airy_zeros(max_terms);
    return z;
}

// Taylor coefficients of exp(-c2 u^2 - u^3/3)
std::vector<double> weight_coeffs(double c2, int order) {
    std::vector<double> p(order + 1, 0.0), w(order + 1, 0.0);
    if (order >= 2) p[2] = -c2;
    if (order >= 3) p[3] = -1.0 / 3.0;
    w[0] = 1.0;
    for (int m = 1; m <= order; ++m) {
        double s = 0.0;
        for (int j = 1; j <= m; ++j) s += j * p[j] * w[m - j];
        w[m] = s / m;
    }
    return w;
}

std::vector<double> series_divide(const std::vector<double>& num, const std::vector<double>& den) {
    std::vector<double> r(num.size(), 0.0);
    for (std::size_t m = 0; m < num.size(); ++m) {
        double s = num[m];
        for (std::size_t j = 1; j <= m; ++j) s -= den[j] * r[m - j];
        r[m] = s / den[0];
    }
    return r;
}

double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

struct f2_shape {
    double b = 0.0;  // linear coefficient from q^2 term
    double c2 = 0.0; // quadratic coefficient
};

f2_shape shape(double q, const limit_constants& lc) {
    const double a3 = 2.0 * lc.c_par * lc.c_par;
    const double a = std::cbrt(a3);
    return {a3 * q * q / a, a3 * q / (a * a)};
}

// int_0^inf exp((x - b) u - c2 u^2 - u^3/3) du
double f2_integral(double x, const f2_shape& s) {
    const double lin = x - s.b;
    auto phi = [&](double u) { return lin * u - s.c2 * u * u - u * u * u / 3.0; };
    double peak = 0.0;
    const double disc = s.c2 * s.c2 + lin;
    if (disc > 0.0) peak = std::max(0.0, -s.c2 + std::sqrt(disc));
    const double top = phi(peak);
    double hi = peak + 1.0;
    while (phi(hi) - top > -45.0) hi = peak + 2.0 * (hi - peak);
    auto f = [&](double u) { return std::exp(phi(u) - top); };
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    std::vector<double> cuts{0.0};
    const double width = 1.0 / (std::abs(lin) + 1.0);
    for (double c : {peak - 4 * width, peak - width, peak, peak + width, peak + 4 * width})
        if (c > cuts.back() && c < hi) cuts.push_back(c);
    cuts.push_back(hi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += gk::integrate(f, cuts[i], cuts[i + 1], 12, 1e-13);
    return std::exp(top) * total;
}

} // namespace

limit_constants make_limit_constants(double m1, double m2, double m3, double sigma_sq,
                                     double rho_over_lambda) {
    limit_constants lc;
    lc.m1 = m1;
    lc.delta = -(m3 - 3 * m2 + 2 * m1) / m1 + 3 * (m2 - 2 * m1);
    lc.sigma_sq = sigma_sq;
    lc.rho_over_lambda = rho_over_lambda;
    lc.c_diff = std::sqrt(std::max(0.0, m3 - 3 * m2 + 2 * m1));
    lc.c_par = m1 * lc.delta / (2 * lc.c_diff);
    lc.c_prime = std::cbrt(4 * lc.c_par) * std::sqrt(sigma_sq) *
                 std::sqrt((1 + rho_over_lambda) * m1) / lc.c_diff;
    return lc;
}

limit_constants make_limit_constants(const degree_model& model, double rho) {
    return make_limit_constants(moments(model, 1), moments(model, 2), moments(model, 3),
                                sigma_sq(model, rho), rho_over_lambda_c(model));
}

double f2(double x, double q, const limit_constants& lc) {
    if (!(q >= 0.0)) throw std::invalid_argument("f2 needs q >= 0");
    return f2_integral(x, shape(q, lc));
}

series_value f1_series_detail(double x, double q, const limit_constants& lc) {
    series_value out;
    if (!(lc.delta > 0.0)) return out; // F1 vanishes identically
    if (!(x >= 0.0) || !(q > 0.0)) throw std::invalid_argument("f1 series needs x >= 0, q > 0");
    const auto sh = shape(q, lc);
    const double y = lc.c_prime * std::sqrt(q) * x;
    const auto w = weight_coeffs(sh.c2, asym_order);

    // closed part: f(s) = Ai(s+y)/Ai(s) and its derivatives at s = b resum the subtracted
    // Laplace terms over all zeros at once
    const auto fc = series_divide(airy_taylor(sh.b + y, asym_order), airy_taylor(sh.b, asym_order));
    double S = fc[0];
    for (int m = 1; m <= asym_order; ++m)
        S += w[m] * (m % 2 ? -1.0 : 1.0) * factorial(m) * fc[m];

    const auto& z = zero_table();
    for (int k = 0; k < max_terms; ++k) {
        const double zk = z[k];
        const double L = sh.b - zk;
        double asym = 0.0, Lp = 1.0 / L;
        for (int m = 0; m <= asym_order; ++m) {
            asym += w[m] * factorial(m) * Lp;
            Lp /= L;
        }
        const double res = f2_integral(zk, sh) - asym;
        double ai, aip;
        airy_pair(zk, ai, aip);
        S += res * airy_ai(zk + y) / aip;
        const double bound = std::abs(res) * ai_sup / std::abs(aip);
        out.terms = k + 1;
        if (k >= 4 && bound * (k + 1) / 5.0 < 1e-12) {
            out.truncation_bound = bound * (k + 1) / 5.0;
            break;
        }
        if (k + 1 == max_terms) throw series_divergence("F1 series did not settle within 200 terms");
    }
    const double sigma = std::sqrt(lc.sigma_sq);
    const double pre = std::exp(-2 * lc.c_par * sigma * std::pow(q, 1.5) * x *
                                std::sqrt((1 + lc.rho_over_lambda) * lc.m1) / lc.c_diff);
    out.value = std::clamp(1.0 - pre * S, 0.0, 1.0);
    return out;
}

double f1_series(double x, double q, const limit_constants& lc) {
    return f1_series_detail(x, q, lc).value;
}

double f1_mc_horizon(const limit_constants& lc, double target, double* bound) {
    if (!(lc.delta > 0.0)) throw std::invalid_argument("horizon bound needs delta > 0");
    const double beta = lc.m1 * lc.delta / 2.0, C = lc.c_diff;
    auto ruin = [&](double U) {
        double s = 0.0;
        for (int j = 0; j < 60; ++j) {
            const double u = std::ldexp(U, j);
            const double zscore = beta * u * u / (C * std::sqrt(2.0 * u));
            s += std::erfc(zscore / std::sqrt(2.0));
        }
        return s;
    };
    double U = 0.01;
    while (ruin(U) >= target) U *= 1.05;
    if (bound) *bound = ruin(U);
    return U;
}

std::vector<mc_estimate> f1_mc_oracle_grid(const std::vector<double>& xs, double q,
                                           const limit_constants& lc, std::uint64_t seed,
                                           std::int64_t paths, double dt) {
    if (!(dt > 0.0 && dt <= 1e-3)) throw std::invalid_argument("dt must lie in (0, 1e-3]");
    if (paths < 1) throw std::invalid_argument("paths must be positive");
    double tail = 0.0;
    const double U = f1_mc_horizon(lc, 1e-4, &tail);
    const auto steps = static_cast<std::int64_t>(std::ceil(U / dt));
    const double beta = lc.m1 * lc.delta / 2.0, C = lc.c_diff;
    const double vol = C * std::sqrt(dt), kill = 2.0 / (C * C * dt);
    const double start_scale = std::sqrt(lc.sigma_sq * (1 + lc.rho_over_lambda) * lc.m1 * q);

    std::vector<std::int64_t> alive_count(xs.size(), 0);
    std::vector<double> P(xs.size());
    std::vector<char> alive(xs.size());
    std::normal_distribution<double> normal;
    for (std::int64_t p = 0; p < paths; ++p) {
        rng_t g(derive_seed(seed, static_cast<std::uint64_t>(p)));
        std::size_t live = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            P[i] = start_scale * xs[i];
            alive[i] = P[i] > 0.0;
            live += alive[i];
        }
        double s = q;
        for (std::int64_t st = 0; st < steps && live > 0; ++st) {
            const double s2 = s + dt;
            const double drift = beta * (s2 * s2 - s * s);
            const double noise = vol * normal(g);
            const double u = uniform01(g);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (!alive[i]) continue;
                const double nxt = P[i] + drift + noise;
                // Brownian bridge: chance the path dipped below 0 between grid points
                if (nxt <= 0.0 || u < std::exp(-kill * P[i] * nxt)) {
                    alive[i] = 0;
                    --live;
                } else {
                    P[i] = nxt;
                }
            }
            s = s2;
        }
        for (std::size_t i = 0; i < xs.size(); ++i) alive_count[i] += alive[i];
    }
    std::vector<mc_estimate> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double ph = static_cast<double>(alive_count[i]) / static_cast<double>(paths);
        out[i] = {ph, std::sqrt(ph * (1 - ph) / static_cast<double>(paths)), tail, U, paths};
    }
    return out;
}

mc_estimate f1_mc_oracle(double x, double q, const limit_constants& lc, std::uint64_t seed,
                         std::int64_t paths, double dt) {
    return f1_mc_oracle_grid({x}, q, lc, seed, paths, dt).front();
}

double meander_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x * x / 2.0); }

double meander_sample(rng_t& g) { return std::sqrt(-2.0 * std::log(uniform01_open(g))); }

series_value c_f1lim(const limit_constants& lc, int zeros) {
    if (!(lc.delta > 0.0)) throw std::invalid_argument("c_f1lim needs delta > 0");
    if (zeros < 1 || zeros > max_terms) throw std::invalid_argument("zero count must be in 1..200");
    const auto w = weight_coeffs(0.0, asym_order);
    // g(s) = Ai'(s)/Ai(s) has unit residues at the zeros
    const auto t = airy_taylor(0.0, asym_order + 1);
    std::vector<double> num(asym_order + 1), den(t.begin(), t.begin() + asym_order + 1);
    for (int m = 0; m <= asym_order; ++m) num[m] = (m + 1) * t[m + 1];
    const auto gc = series_divide(num, den);
    double S = gc[0];
    for (int m = 1; m <= asym_order; ++m) S += w[m] * (m % 2 ? -1.0 : 1.0) * factorial(m) * gc[m];
    const auto& z = zero_table();
    const f2_shape sh{};
    double last = 0.0;
    for (int k = 0; k < zeros; ++k) {
        const double L = -z[k];
        double asym = 0.0, Lp = 1.0 / (L * L);
        for (int m = 1; m <= asym_order; ++m) {
            asym += w[m] * factorial(m) * Lp;
            Lp /= L;
        }
        last = f2_integral(z[k], sh) + 1.0 / z[k] - asym;
        S += last;
    }
    series_value out;
    out.terms = zeros;
    out.truncation_bound = std::abs(last) * zeros / 5.0 * std::sqrt(std::numbers::pi / 2) * lc.c_prime;
    out.value = -lc.c_prime * S * std::sqrt(std::numbers::pi / 2);
    return out;
}

double walk_limit_factor(const limit_constants& lc) {
    return 1.0 / std::sqrt(std::numbers::pi * lc.sigma_sq * (1 + lc.rho_over_lambda) / (2 * lc.m1));
}

double walk_survival_limit(const limit_constants& lc) {
    return std::sqrt(2 * lc.m1 / (std::numbers::pi * (1 + lc.rho_over_lambda))) /
           std::sqrt(lc.sigma_sq);
}

double c_main(const limit_constants& lc, int zeros) {
    return walk_limit_factor(lc) * c_f1lim(lc, zeros).value;
}

double expected_f1_meander(double q, const limit_constants& lc) {
    if (!(lc.delta > 0.0)) return 0.0;
    auto f = [&](double x) { return x <= 0.0 ? 0.0 : f1_series(x, q, lc) * x * std::exp(-x * x / 2); };
    using gk = boost::math::quadrature::gauss_kronrod<double, 21>;
    return gk::integrate(f, 0.0, 3.0, 8, 1e-9) + gk::integrate(f, 3.0, 12.0, 8, 1e-9);
}

} // namespace evosi
