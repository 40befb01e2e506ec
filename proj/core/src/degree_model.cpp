#include "evosi/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "evosi/errors.hpp"

namespace evosi {

degree_model degree_model::poisson(double mu) {
    if (!(mu > 0.0) || mu > 200.0)
        throw std::invalid_argument("poisson mean must lie in (0, 200]");
    degree_model m;
    m.kind_ = degree_kind::poisson;
    m.param_ = mu;
    double pk = std::exp(-mu);
    // stop once k^4 p_k is negligible; ratios are < 1/2 past 2 mu so the tail is geometric
    for (int k = 0;; ++k) {
        if (k > 0) pk *= mu / k;
        m.pmf_.push_back(pk);
        double k4 = std::pow(static_cast<double>(k), 4);
        if (k > 2.0 * mu + 10 && pk * k4 < 1e-18) break;
    }
    // eta = 1: p_k e^k <= E[e^D] = exp(mu (e - 1))
    m.tail_ = {std::exp(mu * (std::exp(1.0) - 1.0)), 1.0};
    m.finish();
    return m;
}

degree_model degree_model::regular(int d) {
    if (d < 0) throw std::invalid_argument("regular degree must be non-negative");
    degree_model m;
    m.kind_ = degree_kind::regular;
    m.param_ = d;
    m.pmf_.assign(d + 1, 0.0);
    m.pmf_[d] = 1.0;
    m.tail_ = {std::exp(static_cast<double>(d)), 1.0};
    m.finish();
    return m;
}

degree_model degree_model::explicit_pmf(std::vector<double> pk) {
    if (pk.empty()) throw std::invalid_argument("empty pmf");
    double s = 0.0;
    for (double p : pk) {
        if (!(p >= 0.0)) throw std::invalid_argument("negative probability in pmf");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("pmf does not sum to 1");
    while (pk.size() > 1 && pk.back() == 0.0) pk.pop_back();
    degree_model m;
    m.kind_ = degree_kind::explicit_pmf;
    m.pmf_ = std::move(pk);
    double C = 0.0;
    for (std::size_t k = 0; k < m.pmf_.size(); ++k)
        C = std::max(C, m.pmf_[k] * std::exp(static_cast<double>(k)));
    m.tail_ = {C, 1.0};
    m.finish();
    return m;
}

void degree_model::finish() {
    cdf_.resize(pmf_.size());
    double s = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
        s += pmf_[k];
        cdf_[k] = s;
    }
    cdf_.back() = 1.0;
}

double degree_model::p(int k) const {
    if (k < 0 || k >= static_cast<int>(pmf_.size())) return 0.0;
    return pmf_[k];
}

std::string degree_model::label() const {
    std::ostringstream os;
    switch (kind_) {
    case degree_kind::poisson: os << "poisson:" << param_; break;
    case degree_kind::regular: os << "regular:" << static_cast<int>(param_); break;
    case degree_kind::explicit_pmf:
        os << "explicit:";
        for (std::size_t k = 0; k < pmf_.size(); ++k) {
            if (pmf_[k] == 0.0) continue;
            os << k << '=' << pmf_[k] << (k + 1 < pmf_.size() ? "," : "");
        }
        break;
    }
    return os.str();
}

double degree_model::exp_moment(double c) const {
    if (kind_ == degree_kind::poisson) return std::exp(param_ * (std::exp(c) - 1.0));
    double s = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k)
        s += pmf_[k] * std::exp(c * static_cast<double>(k));
    return s;
}

int degree_model::sample(rng_t& g) const {
    double u = uniform01(g);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
}

double moments(const degree_model& model, int r, moment_path path) {
    if (r < 1 || r > 4) throw std::invalid_argument("moment order must be in 1..4");
    if (path == moment_path::closed_form) {
        double x = model.param();
        switch (model.kind()) {
        case degree_kind::poisson:
            switch (r) {
            case 1: return x;
            case 2: return x * x + x;
            case 3: return x * x * x + 3 * x * x + x;
            default: return x * x * x * x + 6 * x * x * x + 7 * x * x + x;
            }
        case degree_kind::regular: return std::pow(x, r);
        case degree_kind::explicit_pmf: break;
        }
    }
    // summation from the tail up keeps small terms from being swamped
    const auto& pk = model.pmf();
    double s = 0.0;
    for (std::size_t k = pk.size(); k-- > 0;) s += std::pow(static_cast<double>(k), r) * pk[k];
    return s;
}

double critical_rate(const degree_model& model, double rho, moment_path path) {
    double m1 = moments(model, 1, path), m2 = moments(model, 2, path);
    double den = m2 - 2 * m1;
    if (!(den > 0.0))
        throw subcritical_structure("m2 - 2 m1 <= 0: no critical infection rate");
    return rho * m1 / den;
}

double delta(const degree_model& model, moment_path path) {
    double m1 = moments(model, 1, path), m2 = moments(model, 2, path),
           m3 = moments(model, 3, path);
    if (!(m1 > 0.0)) throw std::invalid_argument("m1 must be positive");
    return -(m3 - 3 * m2 + 2 * m1) / m1 + 3 * (m2 - 2 * m1);
}

double rho_over_lambda_c(const degree_model& model, moment_path path) {
    double m1 = moments(model, 1, path), m2 = moments(model, 2, path);
    if (!(m2 - 2 * m1 > 0.0))
        throw subcritical_structure("m2 - 2 m1 <= 0: no critical infection rate");
    return (m2 - 2 * m1) / m1;
}

double sigma_sq(const degree_model& model, double rho, moment_path path) {
    double m1 = moments(model, 1, path), m2 = moments(model, 2, path),
           m3 = moments(model, 3, path);
    // sum k (k-2)^2 p_k
    double s = m3 - 4 * m2 + 4 * m1;
    if (rho > 0.0) {
        double lc = critical_rate(model, rho, path);
        return s / ((1 + rho / lc) * m1) + rho / (rho + lc);
    }
    double r = rho_over_lambda_c(model, path);
    return s / ((1 + r) * m1) + r / (1 + r);
}

double diffusion_coef(const degree_model& model, moment_path path) {
    double m1 = moments(model, 1, path), m2 = moments(model, 2, path),
           m3 = moments(model, 3, path);
    return std::sqrt(std::max(0.0, m3 - 3 * m2 + 2 * m1));
}

model_constants constants(const degree_model& model, double rho) {
    model_constants c;
    c.m1 = moments(model, 1);
    c.m2 = moments(model, 2);
    c.m3 = moments(model, 3);
    c.rho = rho;
    c.lambda_c = critical_rate(model, rho);
    c.delta = delta(model);
    c.sigma_sq = sigma_sq(model, rho);
    c.drift_coef = c.m1 * c.delta;
    c.diffusion_coef = diffusion_coef(model);
    return c;
}

degree_sequence::degree_sequence(std::vector<int> degrees) : degrees_(std::move(degrees)) {
    int mx = 0;
    for (int d : degrees_) {
        if (d < 0) throw std::invalid_argument("negative degree");
        mx = std::max(mx, d);
        total_ += d;
    }
    counts_.assign(mx + 1, 0);
    for (int d : degrees_) ++counts_[d];
}

std::int64_t degree_sequence::count(int k) const {
    if (k < 0 || k >= static_cast<int>(counts_.size())) return 0;
    return counts_[k];
}

double degree_sequence::empirical_pmf(int k) const {
    if (degrees_.empty()) return 0.0;
    return static_cast<double>(count(k)) / static_cast<double>(degrees_.size());
}

degree_sequence degree_sequence::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open degree file " + path);
    std::vector<int> d;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        try {
            std::size_t used = 0;
            long v = std::stol(line.substr(b), &used);
            if (v < 0) throw std::invalid_argument("negative");
            d.push_back(static_cast<int>(v));
        } catch (const std::exception&) {
            throw config_error(path + ":" + std::to_string(lineno) + ": expected a non-negative integer");
        }
    }
    return degree_sequence(std::move(d));
}

degree_sequence sample_iid_degrees(const degree_model& model, std::int64_t n, rng_t& g) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    std::vector<int> d(static_cast<std::size_t>(n));
    std::int64_t sum = 0;
    for (auto& x : d) {
        x = model.sample(g);
        sum += x;
    }
    bool fixed = false;
    if (sum % 2 != 0) {
        ++d[0];
        fixed = true;
    }
    degree_sequence s(std::move(d));
    s.parity_fixed_ = fixed;
    return s;
}

assumption_audit audit_assumptions(const degree_sequence& seq, const degree_model& model,
                                   double eta, double exponent) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    assumption_audit a;
    const double n = static_cast<double>(seq.n());
    a.h1_eta = eta;
    a.h1_C = 2.0 * std::sqrt(model.exp_moment(2.0 * eta));
    double s = 0.0;
    for (int k = 0; k <= seq.max_degree(); ++k)
        s += static_cast<double>(seq.count(k)) * std::exp(eta * k);
    a.h1_observed = s / n;
    a.h1_pass = a.h1_observed <= a.h1_C;
    a.max_degree = seq.max_degree();
    a.max_degree_bound = std::log(n * a.h1_C) / eta;

    const int K = std::max(seq.max_degree(), model.max_support());
    const double kmax_remark = std::log(n) / eta;
    const double L = std::log(2.0 * (kmax_remark + 1.0) / 0.01);
    a.h3_exponent_target = exponent;
    a.h3_sufficient_pass = true;
    for (int k = 0; k <= K; ++k) {
        double pe = seq.empirical_pmf(k), pm = model.p(k);
        if (pe == 0.0 && pm == 0.0) continue;
        a.h2_sup = std::max(a.h2_sup, std::abs(pe - pm));
        double dev = std::abs(static_cast<double>(seq.count(k)) - n * pm);
        a.h3_stat += std::pow(k + 1.0, 4) * dev;
        a.h3_last_term = k;
        if (k <= kmax_remark) {
            a.h3_max_dev = std::max(a.h3_max_dev, dev);
            double mu = n * pm;
            double u = std::max(std::sqrt(3.0 * mu * L), 3.0 * L);
            if (dev > u) a.h3_sufficient_pass = false;
        }
    }
    a.h3_exponent_certified = a.h3_stat > 0.0 ? std::log(a.h3_stat) / std::log(n) : 0.0;
    a.h3_pass = a.h3_stat <= std::pow(n, exponent);
    a.h3_remark_constant = a.h3_max_dev * std::pow(std::log(n), 5) / std::pow(n, exponent);
    return a;
}

} // namespace evosi
