#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "evosi/config_graph.hpp"
#include "evosi/degree_model.hpp"
#include "evosi/rng.hpp"

namespace evosi {

struct epidemic_params {
    double lambda = 1.0;
    double rho = 1.0;
    // times on the time-changed clock (real clock for evoSI), ascending
    std::vector<double> checkpoints;
    double epsilon = 0.05;
    // sample holding times even without checkpoints (gives gamma)
    bool sample_clock = false;
    // end the trial once the last checkpoint is passed; final_size is then a lower bound
    bool stop_after_checkpoints = false;
    // vertex infected at time 0, or -1 for a uniformly chosen one
    std::int64_t initial_vertex = -1;
};

void validate(const epidemic_params& p);

// Counters of the on-the-fly exploration (avoSI and AB-avoSI).
struct epidemic_state {
    std::int64_t n = 0;
    std::int64_t X_t = 0;           // unpaired half-edges
    std::int64_t X_I = 0;           // unpaired infected half-edges
    std::vector<std::int64_t> S_k;  // susceptible vertices by current half-edge count
    std::int64_t I_count = 0;
    std::int64_t S_count = 0;
    double t = 0.0;
    std::int64_t jumps = 0;

    static epidemic_state initial(const degree_sequence& seq, std::int64_t seed_vertex);
    std::int64_t susceptible_half_edges() const;
    bool ledger_ok() const;
    void move_susceptible(int from, int to);
};

struct checkpoint_row {
    double t = 0.0;
    std::int64_t jumps = 0;
    std::int64_t X_I = 0; // for evoSI: number of S-I edges
    std::int64_t X_t = 0;
    std::int64_t infected = 0;
    bool alive = false;
};

struct trial_record {
    std::uint64_t seed = 0;
    std::int64_t n = 0;
    std::int64_t final_size = 1;
    double gamma = std::numeric_limits<double>::quiet_NaN();
    std::int64_t jumps = 0;
    bool outbreak = false;
    bool completed = true;
    int initial_degree = 0;
    std::vector<checkpoint_row> checkpoints;
};

struct jump_distribution {
    // infect[k]: pair with a half-edge of a susceptible vertex holding k half-edges (k >= 1)
    std::vector<double> infect;
    double pair_infected = 0.0;
    double rewire_susceptible = 0.0;
    double rewire_infected = 0.0;

    double total() const;
    // expected change of X_I
    double mean_increment() const;
};

jump_distribution avosi_jump_distribution(const epidemic_state& s, double lambda, double rho);

double drift(const epidemic_state& s, double lambda, double rho);

checkpoint_row snapshot(const epidemic_state& s);

using state_observer = std::function<void(const epidemic_state&)>;

// Stream layout inside one trial; every runner derives these from the trial seed.
enum class stream : std::uint64_t { init = 0, jump = 1, clock = 2, aux = 3 };
inline rng_t make_stream(std::uint64_t trial_seed, stream s) {
    return rng_t(derive_seed(trial_seed, static_cast<std::uint64_t>(s)));
}

trial_record run_avosi(const degree_sequence& seq, const epidemic_params& p, std::uint64_t seed,
                       const state_observer& observe = {});

trial_record run_ab_avosi(const degree_sequence& seq, const epidemic_params& p, std::uint64_t seed,
                          const state_observer& observe = {});

trial_record run_evosi(const multi_graph& g, const epidemic_params& p, std::uint64_t seed);

namespace detail {

// shared by both exploration simulators: one draw decides pairing vs rewiring, one draws
// the index inside the chosen block
struct jump_choice {
    bool pair = true;
    std::uint64_t index = 0;
};

inline jump_choice draw_jump(rng_t& g, const epidemic_state& s, double lambda, double rho) {
    jump_choice c;
    c.pair = rho <= 0.0 || uniform01(g) * (lambda + rho) < lambda;
    c.index = c.pair ? uniform_below(g, static_cast<std::uint64_t>(s.X_t - 1))
                     : uniform_below(g, static_cast<std::uint64_t>(s.n));
    return c;
}

// AB guard on jump ordinals: the initial infection has A = 0 and a never-rewired half-edge
// has B = -1, so B < A holds until the target was rewired after the source got infected.
inline bool ab_can_infect(std::int64_t A_source, std::int64_t B_target) {
    return B_target < A_source;
}

std::int64_t seed_vertex(std::int64_t n, const epidemic_params& p, std::uint64_t seed);

// Advances the time-changed clock and fills checkpoint rows that the next holding time jumps over.
class clock_tracker {
public:
    clock_tracker(const epidemic_params& p, std::uint64_t seed);
    bool active() const { return active_; }
    // returns false once every checkpoint is filled and the caller asked to stop there
    bool advance(epidemic_state& s, trial_record& rec, double rate);
    void finish(const epidemic_state& s, trial_record& rec);

private:
    const epidemic_params& p_;
    rng_t g_;
    bool active_;
    std::size_t next_ = 0;
};

} // namespace detail

} // namespace evosi
