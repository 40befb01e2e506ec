#include <cmath>
#include <stdexcept>

#include "evosi/epidemic_sim.hpp"
#include "evosi/errors.hpp"

namespace evosi {

void validate(const epidemic_params& p) {
    if (!(p.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(p.rho >= 0.0)) throw std::invalid_argument("rho must be non-negative");
    if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    for (std::size_t i = 1; i < p.checkpoints.size(); ++i)
        if (p.checkpoints[i] < p.checkpoints[i - 1])
            throw std::invalid_argument("checkpoints must be ascending");
}

epidemic_state epidemic_state::initial(const degree_sequence& seq, std::int64_t seed_vertex) {
    epidemic_state s;
    s.n = seq.n();
    s.S_k.assign(seq.counts().begin(), seq.counts().end());
    s.S_k.resize(s.S_k.size() + 5, 0);
    int d = seq.degrees()[seed_vertex];
    --s.S_k[d];
    s.S_count = s.n - 1;
    s.I_count = 1;
    s.X_I = d;
    s.X_t = seq.total_degree();
    return s;
}

std::int64_t epidemic_state::susceptible_half_edges() const {
    std::int64_t x = 0;
    for (std::size_t k = 1; k < S_k.size(); ++k) x += static_cast<std::int64_t>(k) * S_k[k];
    return x;
}

bool epidemic_state::ledger_ok() const {
    std::int64_t s = 0;
    for (auto c : S_k) {
        if (c < 0) return false;
        s += c;
    }
    return X_I >= 0 && X_t >= 0 && I_count >= 0 && S_count == s && I_count + S_count == n &&
           X_t == X_I + susceptible_half_edges();
}

void epidemic_state::move_susceptible(int from, int to) {
    if (to >= static_cast<int>(S_k.size())) S_k.resize(to + 5, 0);
    --S_k[from];
    ++S_k[to];
}

double jump_distribution::total() const {
    double s = pair_infected + rewire_susceptible + rewire_infected;
    for (double x : infect) s += x;
    return s;
}

double jump_distribution::mean_increment() const {
    double m = -2.0 * pair_infected - rewire_susceptible;
    for (std::size_t k = 1; k < infect.size(); ++k) m += (static_cast<double>(k) - 2.0) * infect[k];
    return m;
}

jump_distribution avosi_jump_distribution(const epidemic_state& s, double lambda, double rho) {
    if (s.X_t - 1 <= 0) throw degenerate_state("no partner half-edge: X_t - 1 = 0");
    if (s.X_I < 1) throw degenerate_state("no infected half-edge");
    jump_distribution d;
    const double pair = lambda / ((lambda + rho) * static_cast<double>(s.X_t - 1));
    const double rew = rho / ((lambda + rho) * static_cast<double>(s.n));
    d.infect.assign(s.S_k.size(), 0.0);
    for (std::size_t k = 1; k < s.S_k.size(); ++k)
        d.infect[k] = pair * static_cast<double>(k) * static_cast<double>(s.S_k[k]);
    d.pair_infected = pair * static_cast<double>(s.X_I - 1);
    d.rewire_susceptible = rew * static_cast<double>(s.S_count);
    d.rewire_infected = rew * static_cast<double>(s.I_count);
    return d;
}

double drift(const epidemic_state& s, double lambda, double rho) {
    double k2 = 0.0;
    for (std::size_t k = 1; k < s.S_k.size(); ++k)
        k2 += static_cast<double>(k * k) * static_cast<double>(s.S_k[k]);
    double xt1 = static_cast<double>(s.X_t - 1);
    return -2.0 * xt1 + k2 -
           (rho / lambda) * (static_cast<double>(s.S_count) / static_cast<double>(s.n)) * xt1;
}

checkpoint_row snapshot(const epidemic_state& s) {
    return {s.t, s.jumps, s.X_I, s.X_t, s.I_count, s.X_I > 0 && s.X_t > 1};
}

namespace detail {

clock_tracker::clock_tracker(const epidemic_params& p, std::uint64_t seed)
    : p_(p), g_(make_stream(seed, stream::clock)),
      active_(p.sample_clock || !p.checkpoints.empty()) {}

bool clock_tracker::advance(epidemic_state& s, trial_record& rec, double rate) {
    if (!active_) return true;
    double nt = s.t + exponential(g_, rate);
    while (next_ < p_.checkpoints.size() && p_.checkpoints[next_] < nt) {
        auto row = snapshot(s);
        row.t = p_.checkpoints[next_];
        rec.checkpoints.push_back(row);
        ++next_;
    }
    s.t = nt;
    return !(p_.stop_after_checkpoints && !p_.checkpoints.empty() &&
             next_ == p_.checkpoints.size());
}

void clock_tracker::finish(const epidemic_state& s, trial_record& rec) {
    if (!active_) return;
    while (next_ < p_.checkpoints.size()) {
        auto row = snapshot(s);
        row.t = p_.checkpoints[next_];
        rec.checkpoints.push_back(row);
        ++next_;
    }
    if (rec.completed) rec.gamma = s.t;
}

std::int64_t seed_vertex(std::int64_t n, const epidemic_params& p, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("graph has no vertices");
    if (p.initial_vertex >= 0) {
        if (p.initial_vertex >= n) throw std::invalid_argument("initial vertex out of range");
        return p.initial_vertex;
    }
    auto g = make_stream(seed, stream::init);
    return static_cast<std::int64_t>(uniform_below(g, static_cast<std::uint64_t>(n)));
}

} // namespace detail

trial_record run_avosi(const degree_sequence& seq, const epidemic_params& p, std::uint64_t seed,
                       const state_observer& observe) {
    validate(p);
    trial_record rec;
    rec.seed = seed;
    rec.n = seq.n();
    const auto v0 = detail::seed_vertex(seq.n(), p, seed);
    rec.initial_degree = seq.degrees()[v0];
    auto s = epidemic_state::initial(seq, v0);
    auto jump = make_stream(seed, stream::jump);
    detail::clock_tracker clock(p, seed);
    const double speed = 1.0 + p.rho / p.lambda;

    while (s.X_I > 0 && s.X_t > 1) {
        if (!clock.advance(s, rec, speed * static_cast<double>(s.X_t - 1))) {
            rec.completed = false;
            break;
        }
        auto c = detail::draw_jump(jump, s, p.lambda, p.rho);
        if (c.pair) {
            auto idx = static_cast<std::int64_t>(c.index);
            if (idx < s.X_I - 1) {
                s.X_I -= 2;
            } else {
                idx -= s.X_I - 1;
                int k = 1;
                while (idx >= k * s.S_k[k]) {
                    idx -= k * s.S_k[k];
                    ++k;
                }
                --s.S_k[k];
                --s.S_count;
                ++s.I_count;
                s.X_I += k - 2;
            }
            s.X_t -= 2;
        } else {
            auto idx = static_cast<std::int64_t>(c.index);
            if (idx >= s.I_count) {
                idx -= s.I_count;
                int k = 0;
                while (idx >= s.S_k[k]) {
                    idx -= s.S_k[k];
                    ++k;
                }
                s.move_susceptible(k, k + 1);
                --s.X_I;
            }
        }
        ++s.jumps;
        if (observe) observe(s);
    }
    clock.finish(s, rec);
    rec.final_size = s.I_count;
    rec.jumps = s.jumps;
    rec.outbreak = static_cast<double>(rec.final_size) > p.epsilon * static_cast<double>(rec.n);
    return rec;
}

} // namespace evosi
