#include <vector>

#include "evosi/epidemic_sim.hpp"

namespace evosi {

namespace {

constexpr std::int64_t unset = -1;

struct ab_world {
    std::vector<std::int64_t> A, B;
    std::vector<std::int64_t> inf, inf_pos;
    std::vector<std::vector<std::int64_t>> vhe;
    std::vector<std::vector<std::int32_t>> bucket;
    std::vector<std::int64_t> vpos;

    void push_infected(std::int64_t h) {
        inf_pos[h] = static_cast<std::int64_t>(inf.size());
        inf.push_back(h);
    }
    void pop_infected(std::int64_t h) {
        auto p = inf_pos[h];
        auto last = inf.back();
        inf[p] = last;
        inf_pos[last] = p;
        inf.pop_back();
        inf_pos[h] = unset;
    }
    void bucket_add(std::int32_t v, std::size_t k) {
        if (k >= bucket.size()) bucket.resize(k + 5);
        vpos[v] = static_cast<std::int64_t>(bucket[k].size());
        bucket[k].push_back(v);
    }
    void bucket_drop(std::int32_t v, std::size_t k) {
        auto p = vpos[v];
        auto last = bucket[k].back();
        bucket[k][p] = last;
        vpos[last] = p;
        bucket[k].pop_back();
    }
};

} // namespace

trial_record run_ab_avosi(const degree_sequence& seq, const epidemic_params& p, std::uint64_t seed,
                          const state_observer& observe) {
    validate(p);
    trial_record rec;
    rec.seed = seed;
    rec.n = seq.n();
    const auto v0 = detail::seed_vertex(seq.n(), p, seed);
    rec.initial_degree = seq.degrees()[v0];
    auto s = epidemic_state::initial(seq, v0);

    const auto& deg = seq.degrees();
    const auto H = static_cast<std::size_t>(seq.total_degree());
    ab_world w;
    w.A.assign(H, unset);
    w.B.assign(H, unset);
    w.inf_pos.assign(H, unset);
    w.inf.reserve(H);
    w.vhe.resize(deg.size());
    w.bucket.resize(s.S_k.size());
    w.vpos.assign(deg.size(), unset);
    std::int64_t h = 0;
    for (std::size_t v = 0; v < deg.size(); ++v) {
        for (int j = 0; j < deg[v]; ++j, ++h) {
            if (static_cast<std::int64_t>(v) == v0) {
                w.A[h] = 0;
                w.push_infected(h);
            } else {
                w.vhe[v].push_back(h);
            }
        }
        if (static_cast<std::int64_t>(v) != v0) w.bucket_add(static_cast<std::int32_t>(v), deg[v]);
    }

    auto jump = make_stream(seed, stream::jump);
    auto aux = make_stream(seed, stream::aux);
    detail::clock_tracker clock(p, seed);
    const double speed = 1.0 + p.rho / p.lambda;

    while (s.X_I > 0 && s.X_t > 1) {
        if (!clock.advance(s, rec, speed * static_cast<double>(s.X_t - 1))) {
            rec.completed = false;
            break;
        }
        auto c = detail::draw_jump(jump, s, p.lambda, p.rho);
        const std::int64_t now = s.jumps + 1;
        const auto src = w.inf[uniform_below(aux, static_cast<std::uint64_t>(s.X_I))];
        auto idx = static_cast<std::int64_t>(c.index);
        if (c.pair) {
            if (idx < s.X_I - 1) {
                auto sp = w.inf_pos[src];
                auto partner = w.inf[idx < sp ? idx : idx + 1];
                w.pop_infected(src);
                w.pop_infected(partner);
                s.X_I -= 2;
            } else {
                idx -= s.X_I - 1;
                std::size_t k = 1;
                while (idx >= static_cast<std::int64_t>(k) * s.S_k[k]) {
                    idx -= static_cast<std::int64_t>(k) * s.S_k[k];
                    ++k;
                }
                auto v = w.bucket[k][idx / static_cast<std::int64_t>(k)];
                auto& list = w.vhe[v];
                auto slot = static_cast<std::size_t>(idx % static_cast<std::int64_t>(k));
                auto target = list[slot];
                w.pop_infected(src);
                --s.X_I;
                list[slot] = list.back();
                list.pop_back();
                w.bucket_drop(v, k);
                if (detail::ab_can_infect(w.A[src], w.B[target])) {
                    --s.S_k[k];
                    --s.S_count;
                    ++s.I_count;
                    for (auto x : list) {
                        if (w.A[x] == unset) w.A[x] = now;
                        w.push_infected(x);
                        ++s.X_I;
                    }
                    list.clear();
                } else {
                    s.move_susceptible(static_cast<int>(k), static_cast<int>(k) - 1);
                    w.bucket_add(v, k - 1);
                }
            }
            s.X_t -= 2;
        } else {
            w.B[src] = now;
            if (idx >= s.I_count) {
                idx -= s.I_count;
                std::size_t k = 0;
                while (idx >= s.S_k[k]) {
                    idx -= s.S_k[k];
                    ++k;
                }
                auto v = w.bucket[k][idx];
                w.pop_infected(src);
                --s.X_I;
                w.vhe[v].push_back(src);
                w.bucket_drop(v, k);
                w.bucket_add(v, k + 1);
                s.move_susceptible(static_cast<int>(k), static_cast<int>(k) + 1);
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
