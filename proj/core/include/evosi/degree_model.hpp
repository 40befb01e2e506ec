#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evosi/rng.hpp"

namespace evosi {

enum class degree_kind { poisson, regular, explicit_pmf };

// p*_k <= C exp(-eta k)
struct tail_bound {
    double C = 1.0;
    double eta = 1.0;
};

enum class moment_path { closed_form, summation };

class degree_model {
public:
    static degree_model poisson(double mu);
    static degree_model regular(int d);
    // pk[k] = probability of degree k; must sum to 1 within 1e-12
    static degree_model explicit_pmf(std::vector<double> pk);

    degree_kind kind() const { return kind_; }
    double param() const { return param_; }
    const std::vector<double>& pmf() const { return pmf_; }
    double p(int k) const;
    int max_support() const { return static_cast<int>(pmf_.size()) - 1; }
    tail_bound tail() const { return tail_; }
    std::string label() const;

    // E[exp(c D)] by pmf summation
    double exp_moment(double c) const;

    int sample(rng_t& g) const;

private:
    degree_model() = default;
    void finish();

    degree_kind kind_ = degree_kind::explicit_pmf;
    double param_ = 0.0;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
    tail_bound tail_;
};

struct model_constants {
    double lambda_c = 0.0;
    double delta = 0.0;
    double sigma_sq = 0.0;
    double rho = 0.0;
    double drift_coef = 0.0;     // m1 * delta
    double diffusion_coef = 0.0; // sqrt(m3 - 3 m2 + 2 m1)
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
};

double moments(const degree_model& model, int r, moment_path path = moment_path::closed_form);
double critical_rate(const degree_model& model, double rho,
                     moment_path path = moment_path::closed_form);
double delta(const degree_model& model, moment_path path = moment_path::closed_form);
// rho/lambda_c; does not depend on rho
double rho_over_lambda_c(const degree_model& model, moment_path path = moment_path::closed_form);
double sigma_sq(const degree_model& model, double rho,
                moment_path path = moment_path::closed_form);
double diffusion_coef(const degree_model& model, moment_path path = moment_path::closed_form);
model_constants constants(const degree_model& model, double rho);

class degree_sequence {
public:
    degree_sequence() = default;
    explicit degree_sequence(std::vector<int> degrees);

    const std::vector<int>& degrees() const { return degrees_; }
    std::int64_t n() const { return static_cast<std::int64_t>(degrees_.size()); }
    // number of vertices of degree k
    std::int64_t count(int k) const;
    const std::vector<std::int64_t>& counts() const { return counts_; }
    double empirical_pmf(int k) const;
    int max_degree() const { return static_cast<int>(counts_.size()) - 1; }
    std::int64_t total_degree() const { return total_; }
    bool parity_fixed() const { return parity_fixed_; }

    static degree_sequence load(const std::string& path);

private:
    friend degree_sequence sample_iid_degrees(const degree_model&, std::int64_t, rng_t&);
    std::vector<int> degrees_;
    std::vector<std::int64_t> counts_;
    std::int64_t total_ = 0;
    bool parity_fixed_ = false;
};

degree_sequence sample_iid_degrees(const degree_model& model, std::int64_t n, rng_t& g);

struct assumption_audit {
    // (H1)
    double h1_eta = 0.0;
    double h1_C = 0.0;
    double h1_observed = 0.0;
    bool h1_pass = false;
    // (H2)
    double h2_sup = 0.0;
    // (H3) weighted l1 statistic and the exponent it certifies: stat = n^exponent
    double h3_stat = 0.0;
    double h3_exponent_certified = 0.0;
    double h3_exponent_target = 0.0;
    bool h3_pass = false;
    // per-degree sufficient condition, checked against binomial concentration
    double h3_max_dev = 0.0;
    double h3_remark_constant = 0.0;
    bool h3_sufficient_pass = false;
    int h3_last_term = 0;
    int max_degree = 0;
    double max_degree_bound = 0.0;
};

assumption_audit audit_assumptions(const degree_sequence& seq, const degree_model& model,
                                   double eta, double exponent = 0.62);

} // namespace evosi
