// evosi command line: constants, audit, simulate, outbreak, scaling, walks, meander, f1, stages.
// exit 0 on success, 1 on config/usage errors, 2 on runtime errors

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evosi/comparison_walks.hpp"
#include "evosi/degree_model.hpp"
#include "evosi/epidemic_sim.hpp"
#include "evosi/errors.hpp"
#include "evosi/limit_theory.hpp"
#include "evosi/mc_harness.hpp"
#include "evosi/parallel.hpp"
#include "evosi/run_config.hpp"
#include "evosi/stats.hpp"

using json = nlohmann::ordered_json;
using namespace evosi;

namespace {

// flags win over the config file; both go through run_config so errors name the field
class settings {
public:
    settings(run_config file, run_config flags) : file_(std::move(file)), flags_(std::move(flags)) {}

    const run_config& src(const std::string& k) const { return flags_.has(k) ? flags_ : file_; }
    bool has(const std::string& k) const { return flags_.has(k) || file_.has(k); }

    std::string str(const std::string& k, const std::string& def) const { return src(k).raw(k).value_or(def); }
    double num(const std::string& k, double def) const { return src(k).get_double(k).value_or(def); }
    std::int64_t integer(const std::string& k, std::int64_t def) const { return src(k).get_int(k).value_or(def); }
    std::vector<std::int64_t> ints(const std::string& k, std::vector<std::int64_t> def) const {
        return src(k).get_int_list(k).value_or(std::move(def));
    }
    std::vector<double> nums(const std::string& k, std::vector<double> def) const {
        return src(k).get_double_list(k).value_or(std::move(def));
    }

    degree_model model() const {
        const auto spec = str("model", "regular:3");
        try {
            return parse_model_spec(spec);
        } catch (const config_error& e) {
            throw config_error(src("model").where("model") + ": " + e.what());
        }
    }

private:
    run_config file_, flags_;
};

// shortest text that reads back to the same double
std::string g17(double x) {
    char b[40];
    auto r = std::to_chars(b, b + sizeof b, x);
    return std::string(b, r.ptr);
}

struct output {
    std::string prefix; // empty: CSV to stdout
    bool json_stdout = false;

    void emit(const std::string& csv, const json& summary) const {
        const std::string js = summary.dump(2) + "\n";
        if (prefix.empty()) {
            std::cout << (json_stdout ? js : csv);
            return;
        }
        write(prefix + ".csv", csv);
        write(prefix + ".json", js);
        std::cerr << "wrote " << prefix << ".csv and " << prefix << ".json\n";
    }

    static void write(const std::string& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << text;
        if (!f) throw std::runtime_error("write failed for " + path);
    }
};

struct context {
    settings cfg;
    output out;
    std::uint64_t seed;
    int workers;
};

json model_json(const degree_model& m, double rho) {
    return {{"model", m.label()}, {"rho", rho}};
}

experiment_plan make_plan(const context& c, std::vector<std::int64_t> default_n, std::int64_t default_trials) {
    experiment_plan p;
    p.model = c.cfg.model();
    p.rho = c.cfg.num("rho", 1.0);
    if (c.cfg.has("lambda")) {
        p.lambda_critical = false;
        p.lambda = c.cfg.num("lambda", 1.0);
    }
    p.n_grid = c.cfg.ints("n", std::move(default_n));
    p.trials_per_n = c.cfg.integer("trials", default_trials);
    const auto eps = c.cfg.nums("eps", {0.05});
    if (eps.empty()) throw config_error(c.cfg.src("eps").where("eps") + ": empty list");
    p.epsilon = eps.front();
    p.q = c.cfg.num("q", 0.1);
    p.Q = c.cfg.num("Q", 3.0);
    p.master_seed = c.seed;
    p.workers = c.workers;
    p.process = parse_process(c.cfg.str("process", "avosi"));
    const auto mode = c.cfg.str("mode", "fixed");
    if (mode == "fixed")
        p.mode = sequence_mode::fixed;
    else if (mode == "nsw")
        p.mode = sequence_mode::nsw;
    else
        throw config_error(c.cfg.src("mode").where("mode") + ": expected fixed or nsw, got '" + mode + "'");
    p.min_survivors = c.cfg.integer("min_survivors", 0);
    p.max_trials = c.cfg.integer("max_trials", 0);
    p.validate();
    return p;
}

json plan_json(const experiment_plan& p) {
    json j = model_json(p.model, p.rho);
    j["lambda"] = p.effective_lambda();
    j["lambda_mode"] = p.lambda_critical ? "critical" : "explicit";
    j["process"] = to_string(p.process);
    j["sequence_mode"] = p.mode == sequence_mode::nsw ? "nsw" : "fixed";
    j["n"] = p.n_grid;
    j["trials_per_n"] = p.trials_per_n;
    j["epsilon"] = p.epsilon;
    j["q"] = p.q;
    j["Q"] = p.Q;
    j["seed"] = p.master_seed;
    return j;
}

int cmd_constants(const context& c) {
    const auto m = c.cfg.model();
    const double rho = c.cfg.num("rho", 1.0);
    const int zeros = static_cast<int>(c.cfg.integer("zeros", 50));
    const auto lc = make_limit_constants(m, rho);
    std::vector<std::pair<std::string, double>> rows{
        {"m1", moments(m, 1)},
        {"m2", moments(m, 2)},
        {"m3", moments(m, 3)},
        {"lambda_c", critical_rate(m, rho)},
        {"delta", delta(m)},
        {"sigma2", sigma_sq(m, rho)},
        {"c_diff", lc.c_diff},
    };
    if (lc.delta > 0) {
        rows.emplace_back("c_f1lim", c_f1lim(lc, zeros).value);
        rows.emplace_back("c_main", c_main(lc, zeros));
    }
    rows.emplace_back("walk_survival_limit", walk_survival_limit(lc));

    json j = model_json(m, rho);
    std::string csv = "quantity,value\n";
    for (const auto& [k, v] : rows) {
        j[k] = v;
        csv += k + "," + g17(v) + "\n";
    }
    if (lc.delta <= 0) j["note"] = "delta <= 0: F1 vanishes, no c_f1lim or c_main";
    if (c.out.prefix.empty() && !c.out.json_stdout) {
        std::printf("model %s, rho %g\n", m.label().c_str(), rho);
        for (const auto& [k, v] : rows) std::printf("  %-20s %.12g\n", k.c_str(), v);
        return 0;
    }
    c.out.emit(csv, j);
    return 0;
}

int cmd_audit(const context& c) {
    const auto m = c.cfg.model();
    const auto n = c.cfg.integer("n", 100000);
    if (n < 1) throw config_error(c.cfg.src("n").where("n") + ": must be positive");
    degree_sequence seq;
    if (c.cfg.has("sequence")) {
        seq = degree_sequence::load(c.cfg.str("sequence", ""));
    } else {
        rng_t g(derive_seed(c.seed, 1));
        seq = sample_iid_degrees(m, n, g);
    }
    const double eta = c.cfg.num("eta", m.tail().eta);
    const double expo = c.cfg.num("exponent", 0.62);
    const auto a = audit_assumptions(seq, m, eta, expo);
    json j = model_json(m, c.cfg.num("rho", 1.0));
    j["n"] = seq.n();
    j["seed"] = c.seed;
    j["parity_fixed"] = seq.parity_fixed();
    j["h1"] = {{"eta", a.h1_eta}, {"C", a.h1_C}, {"observed", a.h1_observed}, {"pass", a.h1_pass}};
    j["h2_sup"] = a.h2_sup;
    j["h3"] = {{"stat", a.h3_stat},
               {"exponent_certified", a.h3_exponent_certified},
               {"exponent_target", a.h3_exponent_target},
               {"pass", a.h3_pass},
               {"max_dev", a.h3_max_dev},
               {"remark_constant", a.h3_remark_constant},
               {"sufficient_pass", a.h3_sufficient_pass},
               {"last_term", a.h3_last_term}};
    j["max_degree"] = a.max_degree;
    j["max_degree_bound"] = a.max_degree_bound;
    std::string csv = "k,count,empirical,model\n";
    for (int k = 0; k <= seq.max_degree(); ++k)
        csv += std::to_string(k) + "," + std::to_string(seq.count(k)) + "," + g17(seq.empirical_pmf(k)) + "," +
               g17(m.p(k)) + "\n";
    c.out.emit(csv, j);
    return a.h1_pass && a.h3_pass ? 0 : 2;
}

int cmd_simulate(const context& c) {
    auto p = make_plan(c, {2000}, 10);
    if (p.n_grid.size() != 1) throw config_error(c.cfg.src("n").where("n") + ": simulate takes a single n");
    const auto n = p.n_grid[0];
    epidemic_params ep;
    ep.lambda = p.effective_lambda();
    ep.rho = p.rho;
    ep.epsilon = p.epsilon;
    ep.sample_clock = true;
    ep.checkpoints = c.cfg.nums("checkpoints", {});
    validate(ep);
    const auto seq = plan_sequence(p, n);
    std::cerr << "simulate: " << p.trials_per_n << " " << to_string(p.process) << " trials at n=" << n << "\n";
    auto recs = parallel_map<trial_record>(p.trials_per_n, p.workers,
                                           [&](std::int64_t i) { return run_trial(p, seq, ep, n, i); });
    std::ostringstream csv;
    csv << "trial,seed,model,n,lambda,rho,final_size,gamma,outbreak,initial_degree,jumps";
    for (auto t : ep.checkpoints) csv << ",I@" << g17(t) << ",XI@" << g17(t);
    csv << "\n";
    std::int64_t outbreaks = 0;
    double total = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        csv << i << ',' << r.seed << ',' << p.model.label() << ',' << r.n << ',' << g17(ep.lambda) << ','
            << g17(ep.rho) << ',' << r.final_size << ',' << g17(r.gamma) << ',' << (r.outbreak ? 1 : 0) << ','
            << r.initial_degree << ',' << r.jumps;
        for (const auto& row : r.checkpoints) csv << ',' << row.infected << ',' << row.X_I;
        csv << '\n';
        outbreaks += r.outbreak;
        total += static_cast<double>(r.final_size);
    }
    json j;
    j["plan"] = plan_json(p);
    j["checkpoints"] = ep.checkpoints;
    j["mean_final_size"] = total / static_cast<double>(recs.size());
    j["outbreaks"] = outbreaks;
    j["clock"] = p.process == process_kind::evosi ? "real" : "time-changed";
    c.out.emit(csv.str(), j);
    return 0;
}

std::string estimates_csv(const std::vector<std::pair<double, std::vector<estimate>>>& by_eps) {
    std::string csv = "eps,n,trials,events,p,ci_low,ci_high,scaled\n";
    for (const auto& [eps, est] : by_eps)
        for (const auto& e : est)
            csv += g17(eps) + "," + std::to_string(e.n) + "," + std::to_string(e.trials) + "," +
                   std::to_string(e.events) + "," + g17(e.value) + "," + g17(e.ci_low) + "," + g17(e.ci_high) + "," +
                   g17(e.scaled) + "\n";
    return csv;
}

json estimate_json(const estimate& e) {
    return {{"n", e.n},           {"trials", e.trials},   {"events", e.events}, {"p", e.value},
            {"ci_low", e.ci_low}, {"ci_high", e.ci_high}, {"scaled", e.scaled}};
}

int outbreak_like(const context& c, bool scaling) {
    auto p = make_plan(c, scaling ? std::vector<std::int64_t>{1000, 4000, 16000, 64000} : std::vector<std::int64_t>{2000},
                       scaling ? 20000 : 1000);
    const auto eps_list = c.cfg.nums("eps", {p.epsilon});
    for (double e : eps_list)
        if (!(e > 0)) throw config_error(c.cfg.src("eps").where("eps") + ": must be positive");
    std::cerr << (scaling ? "scaling" : "outbreak") << ": " << p.trials_per_n << " trials per n over "
              << p.n_grid.size() << " sizes\n";
    const auto runs = run_outbreaks(p);
    json j;
    j["plan"] = plan_json(p);
    j["epsilon"] = eps_list;
    j["results"] = json::array();
    std::vector<std::pair<double, std::vector<estimate>>> by_eps;
    bool fit_failed = false;
    for (double eps : eps_list) {
        std::vector<estimate> est;
        for (const auto& r : runs) est.push_back(outbreak_estimate(r, eps));
        json r;
        r["eps"] = eps;
        r["estimates"] = json::array();
        for (const auto& e : est) r["estimates"].push_back(estimate_json(e));
        if (est.size() >= 4 || scaling) {
            try {
                auto f = fit_scaling_exponent(est, c.cfg.integer("min_events", 50));
                r["slope"] = {{"value", f.slope}, {"ci_low", f.ci_low}, {"ci_high", f.ci_high}, {"intercept", f.intercept}};
            } catch (const insufficient_events& e) {
                r["slope"] = nullptr;
                r["slope_error"] = e.what();
                fit_failed = true;
            }
        }
        j["results"].push_back(r);
        by_eps.emplace_back(eps, std::move(est));
    }
    j["note"] = "Monte Carlo tolerances are engineering budgets; intervals are Wilson 95%";
    c.out.emit(estimates_csv(by_eps), j);
    return scaling && fit_failed ? 2 : 0;
}

int cmd_walks(const context& c) {
    const auto m = c.cfg.model();
    const double rho = c.cfg.num("rho", 1.0);
    const double lambda = c.cfg.has("lambda") ? c.cfg.num("lambda", 1.0) : critical_rate(m, rho);
    const auto n = c.cfg.integer("n", 1000000);
    const double q = c.cfg.num("q", 0.1);
    const auto cfg = walk_config::for_model(m, c.cfg.num("C", 4.0));
    const auto st = sequence_stats::from_model(m);
    const auto trials = c.cfg.integer("trials", 0);
    json j = model_json(m, rho);
    j["lambda"] = lambda;
    j["n"] = n;
    j["q"] = q;
    j["seed"] = c.seed;
    std::string csv = "walk,increment,probability\n";
    std::uint64_t k = 0;
    for (auto kind : {walk_kind::upper, walk_kind::lower}) {
        const bool up = kind == walk_kind::upper;
        const auto w = up ? y_increment_pmf(m, st, n, q, rho, lambda, cfg) : z_increment_pmf(m, st, n, q, rho, lambda, cfg);
        for (std::size_t i = 0; i < w.prob.size(); ++i)
            csv += std::string(up ? "Y" : "Z") + "," + std::to_string(w.min_increment + static_cast<int>(i)) + "," +
                   g17(w.prob[i]) + "\n";
        json wj{{"N_q", w.N_q},
                {"steps", w.steps},
                {"mean_scaled", std::cbrt(static_cast<double>(n)) * w.mean()},
                {"second_moment", walk_second_moment(w)},
                {"total", w.total()}};
        try {
            wj["tilt"] = solve_tilt(w);
        } catch (const no_root& e) {
            wj["tilt"] = nullptr;
        }
        if (trials > 0) {
            std::cerr << "walks: " << trials << " " << (up ? "Y" : "Z") << " paths\n";
            auto s = estimate_survival(w, trials, derive_seed(c.seed, ++k), c.workers);
            wj["survival"] = {{"trials", s.trials},
                              {"survivors", s.survivors},
                              {"p", s.p_hat},
                              {"ci_low", s.ci_low},
                              {"ci_high", s.ci_high},
                              {"n13_scaled", s.n13_scaled},
                              {"q12_n13_scaled", std::sqrt(q) * s.n13_scaled}};
        }
        j[up ? "Y" : "Z"] = wj;
    }
    j["q12_survival_limit"] = walk_survival_limit(make_limit_constants(m, rho));
    c.out.emit(csv, j);
    return 0;
}

int cmd_meander(const context& c) {
    const auto source = c.cfg.str("source", "epidemic");
    std::vector<double> xs;
    json j;
    if (source == "limit") {
        const auto samples = c.cfg.integer("samples", 100000);
        rng_t g(derive_seed(c.seed, 2));
        for (std::int64_t i = 0; i < samples; ++i) xs.push_back(meander_sample(g));
    } else if (source == "walk") {
        const auto m = c.cfg.model();
        const double rho = c.cfg.num("rho", 1.0);
        const auto w = y_increment_pmf(m, sequence_stats::from_model(m), c.cfg.integer("n", 1000000),
                                       c.cfg.num("q", 0.1), rho, critical_rate(m, rho), walk_config::for_model(m));
        xs = conditioned_endpoint_sample(w, c.cfg.integer("trials", 100000), c.seed, c.workers);
        j = model_json(m, rho);
    } else if (source == "epidemic") {
        auto p = make_plan(c, {1000000}, 20000);
        if (!c.cfg.has("q")) p.q = 0.05;
        if (!c.cfg.has("min_survivors")) p.min_survivors = 5000;
        std::cerr << "meander: avoSI survivors at q n^(-1/3)\n";
        const auto s = stage1_report(p);
        xs = s.endpoints;
        j["plan"] = plan_json(p);
        j["stage1"] = {{"trials", s.trials},       {"survivors", s.survivors},   {"N_q", s.N_q},
                       {"checkpoint", s.checkpoint}, {"window_fraction", s.window_fraction},
                       {"scaled_survival", s.scaled_survival}};
    } else {
        throw config_error(c.cfg.src("source").where("source") + ": expected epidemic, walk or limit");
    }
    j["source"] = source;
    j["seed"] = c.seed;
    j["samples"] = xs.size();
    if (!xs.empty()) {
        j["mean"] = mean(xs);
        j["mean_limit"] = std::sqrt(std::acos(-1.0) / 2);
        j["ks"] = ks_statistic(xs, meander_cdf);
    }
    std::sort(xs.begin(), xs.end());
    std::string csv = "endpoint,empirical_cdf,meander_cdf\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        csv += g17(xs[i]) + "," + g17(static_cast<double>(i + 1) / static_cast<double>(xs.size())) + "," +
               g17(meander_cdf(xs[i])) + "\n";
    c.out.emit(csv, j);
    return 0;
}

int cmd_f1(const context& c) {
    const auto m = c.cfg.model();
    const double rho = c.cfg.num("rho", 1.0);
    const auto lc = make_limit_constants(m, rho);
    const auto xs = c.cfg.nums("x", {0.5, 1.0, 2.0});
    const auto qs = c.cfg.nums("q", {0.1});
    const auto paths = c.cfg.integer("paths", 0);
    const double dt = c.cfg.num("dt", 1e-3);
    json j = model_json(m, rho);
    j["delta"] = lc.delta;
    j["rows"] = json::array();
    std::string csv = "x,q,f1,truncation_bound,terms,mc,mc_std_error\n";
    for (double q : qs) {
        std::vector<mc_estimate> mc;
        if (paths > 0) mc = f1_mc_oracle_grid(xs, q, lc, derive_seed(c.seed, std::hash<double>{}(q)), paths, dt);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const auto s = f1_series_detail(xs[i], q, lc);
            json r{{"x", xs[i]}, {"q", q}, {"f1", s.value}, {"truncation_bound", s.truncation_bound}, {"terms", s.terms}};
            csv += g17(xs[i]) + "," + g17(q) + "," + g17(s.value) + "," + g17(s.truncation_bound) + "," +
                   std::to_string(s.terms) + ",";
            if (!mc.empty()) {
                r["mc"] = mc[i].estimate;
                r["mc_std_error"] = mc[i].std_error;
                csv += g17(mc[i].estimate) + "," + g17(mc[i].std_error);
            } else {
                csv += ",";
            }
            csv += "\n";
            j["rows"].push_back(r);
        }
    }
    if (lc.delta > 0) {
        const int zeros = static_cast<int>(c.cfg.integer("zeros", 50));
        j["c_f1lim"] = c_f1lim(lc, zeros).value;
        j["c_main"] = c_main(lc, zeros);
    }
    if (c.out.prefix.empty() && !c.out.json_stdout && !paths) {
        for (const auto& r : j["rows"])
            std::printf("F1(x=%g, q=%g) = %.12g\n", r["x"].get<double>(), r["q"].get<double>(), r["f1"].get<double>());
        return 0;
    }
    c.out.emit(csv, j);
    return 0;
}

int cmd_stages(const context& c) {
    const auto which = c.cfg.ints("stage", {1, 2, 3});
    json j;
    std::string csv = "stage,quantity,s,value\n";
    auto row = [&](int st, const std::string& k, double s, double v) {
        csv += std::to_string(st) + "," + k + "," + g17(s) + "," + g17(v) + "\n";
    };
    for (auto st : which) {
        if (st < 1 || st > 3) throw config_error(c.cfg.src("stage").where("stage") + ": stages are 1, 2 and 3");
        auto p = make_plan(c, {100000}, 20000);
        p.master_seed = derive_seed(c.seed, static_cast<std::uint64_t>(st));
        std::cerr << "stages: stage " << st << "\n";
        if (st == 1) {
            const auto s = stage1_report(p);
            j["stage1"] = {{"n", s.n},         {"q", s.q},   {"trials", s.trials},
                           {"survivors", s.survivors}, {"survival", s.survival},
                           {"scaled_survival", s.scaled_survival}, {"N_q", s.N_q},
                           {"window_fraction", s.window_fraction}, {"ks", s.ks}, {"endpoint_mean", s.endpoint_mean}};
            row(1, "scaled_survival", s.q, s.scaled_survival);
            row(1, "window_fraction", s.q, s.window_fraction);
            row(1, "ks", s.q, s.ks);
            row(1, "endpoint_mean", s.q, s.endpoint_mean);
        } else if (st == 2) {
            const auto s = stage2_report(p, static_cast<int>(c.cfg.integer("grid", 6)));
            json pts = json::array();
            for (const auto& pt : s.points) {
                pts.push_back({{"s", pt.s},
                               {"mean", pt.mean},
                               {"variance", pt.variance},
                               {"mean_limit", pt.mean_limit},
                               {"variance_limit", pt.variance_limit}});
                row(2, "mean", pt.s, pt.mean);
                row(2, "variance", pt.s, pt.variance);
                row(2, "mean_limit", pt.s, pt.mean_limit);
                row(2, "variance_limit", pt.s, pt.variance_limit);
            }
            j["stage2"] = {{"n", s.n},
                           {"trials", s.trials},
                           {"survivors", s.survivors},
                           {"points", pts},
                           {"takeoff_threshold", s.takeoff_threshold},
                           {"takeoff_fraction", s.takeoff_fraction}};
            row(2, "takeoff_fraction", p.Q, s.takeoff_fraction);
        } else {
            const auto s = stage3_report(p);
            j["stage3"] = {{"n", s.n},
                           {"trials", s.trials},
                           {"threshold", s.threshold},
                           {"conditioned", s.conditioned},
                           {"outbreaks", s.outbreaks},
                           {"fraction", s.fraction},
                           {"band_constant", s.band_constant},
                           {"band_rows", s.band_rows}};
            if (s.conditioned == 0) j["stage3"]["note"] = "empty conditioning set";
            row(3, "fraction", p.Q, s.fraction);
            row(3, "band_constant", p.Q, s.band_constant);
        }
        j["plan"] = plan_json(p);
    }
    c.out.emit(csv, j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"evoSI epidemics on configuration-model graphs: simulation, comparison walks and limit constants"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    std::map<std::string, std::string> given;
    std::string config_path, out_prefix;
    std::uint64_t seed = default_seed;
    int workers = 0;
    bool as_json = false;

    struct sub {
        const char* name;
        const char* help;
        std::vector<std::string> keys;
    };
    const std::vector<std::string> model_keys{"model", "rho", "lambda"};
    auto with = [&](std::vector<std::string> extra) {
        auto k = model_keys;
        k.insert(k.end(), extra.begin(), extra.end());
        return k;
    };
    const std::vector<sub> subs{
        {"constants", "degree-model constants and limit constants", with({"zeros"})},
        {"audit", "sample a degree sequence and audit its tail assumptions", with({"n", "eta", "exponent", "sequence"})},
        {"simulate", "per-trial records of one process", with({"n", "trials", "eps", "process", "mode", "checkpoints"})},
        {"outbreak", "outbreak probability per n", with({"n", "trials", "eps", "process", "mode", "min_events"})},
        {"scaling", "outbreak probability over an n grid with the fitted exponent",
         with({"n", "trials", "eps", "process", "mode", "min_events"})},
        {"walks", "comparison walk increments, tilts and survival", with({"n", "q", "C", "trials"})},
        {"meander", "endpoints against the meander law", with({"source", "n", "q", "trials", "samples", "mode",
                                                                "min_survivors", "max_trials"})},
        {"f1", "F1 series with optional path-simulation check", with({"x", "q", "paths", "dt", "zeros"})},
        {"stages", "stage diagnostics 1 to 3", with({"stage", "n", "q", "Q", "trials", "eps", "grid", "min_survivors",
                                                   "max_trials"})},
    };
    std::map<std::string, std::string> names;
    for (const auto& s : subs) {
        auto* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--config", config_path, "key = value file; [section] named after the subcommand");
        sc->add_option("--seed", seed, "master seed")->capture_default_str();
        sc->add_option("--out", out_prefix, "write PREFIX.csv and PREFIX.json instead of printing");
        sc->add_option("--workers", workers, "worker threads (0: all cores); results do not depend on it");
        sc->add_flag("--json", as_json, "print the JSON summary instead of the table/CSV");
        for (const auto& k : s.keys) {
            std::string flag = "--" + k;
            std::replace(flag.begin(), flag.end(), '_', '-');
            sc->add_option_function<std::string>(flag, [&given, k](const std::string& v) { given[k] = v; },
                                                  "same as '" + k + "' in the config file");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        run_config file = config_path.empty() ? run_config::parse("", "<none>") : run_config::load(config_path);
        file = file.for_section(cmd);
        std::string text;
        for (const auto& [k, v] : given) text += k + " = " + v + "\n";
        auto flags = run_config::parse(text, "<command line>").for_section(cmd);
        if (!app.get_subcommands().front()->count("--seed") && file.has("seed"))
            seed = static_cast<std::uint64_t>(*file.get_int("seed"));
        if (!app.get_subcommands().front()->count("--workers") && file.has("workers"))
            workers = static_cast<int>(*file.get_int("workers"));
        if (out_prefix.empty() && file.has("out")) out_prefix = *file.raw("out");
        context c{settings(file, flags), output{out_prefix, as_json}, seed, workers};

        if (cmd == "constants") return cmd_constants(c);
        if (cmd == "audit") return cmd_audit(c);
        if (cmd == "simulate") return cmd_simulate(c);
        if (cmd == "outbreak") return outbreak_like(c, false);
        if (cmd == "scaling") return outbreak_like(c, true);
        if (cmd == "walks") return cmd_walks(c);
        if (cmd == "meander") return cmd_meander(c);
        if (cmd == "f1") return cmd_f1(c);
        if (cmd == "stages") return cmd_stages(c);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
