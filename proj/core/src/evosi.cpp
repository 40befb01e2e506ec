#include <array>
#include <vector>

#include "evosi/epidemic_sim.hpp"

namespace evosi {

namespace {

constexpr std::int64_t absent = -1;

// Mutable copy of a multigraph with O(1) end moves.
struct live_graph {
    std::vector<std::array<std::int32_t, 2>> ends;
    std::vector<std::array<std::int64_t, 2>> slot; // position of each end in its adjacency list
    std::vector<std::vector<std::int32_t>> adj;     // edge ids; a self-loop appears twice

    explicit live_graph(const multi_graph& g) : adj(g.n) {
        ends.resize(g.ends.size());
        slot.resize(g.ends.size());
        for (std::size_t e = 0; e < g.ends.size(); ++e) {
            ends[e] = {g.ends[e].first, g.ends[e].second};
            for (int side = 0; side < 2; ++side) {
                auto v = ends[e][side];
                slot[e][side] = static_cast<std::int64_t>(adj[v].size());
                adj[v].push_back(static_cast<std::int32_t>(e));
            }
        }
    }

    // the slot of edge e at vertex v sits in adj[v]; find which side it is by slot match
    void detach(std::int32_t e, int side) {
        auto v = ends[e][side];
        auto p = slot[e][side];
        auto last = adj[v].back();
        adj[v][p] = last;
        // the moved entry is edge `last`; fix whichever of its sides pointed at the old back
        auto old = static_cast<std::int64_t>(adj[v].size()) - 1;
        if (ends[last][0] == v && slot[last][0] == old)
            slot[last][0] = p;
        else
            slot[last][1] = p;
        adj[v].pop_back();
    }

    void attach(std::int32_t e, int side, std::int32_t v) {
        ends[e][side] = v;
        slot[e][side] = static_cast<std::int64_t>(adj[v].size());
        adj[v].push_back(e);
    }
};

struct edge_pool {
    std::vector<std::int32_t> items;
    std::vector<std::int64_t> pos;

    explicit edge_pool(std::size_t m) : pos(m, absent) {}
    bool has(std::int32_t e) const { return pos[e] != absent; }
    void add(std::int32_t e) {
        if (has(e)) return;
        pos[e] = static_cast<std::int64_t>(items.size());
        items.push_back(e);
    }
    void drop(std::int32_t e) {
        if (!has(e)) return;
        auto p = pos[e];
        auto last = items.back();
        items[p] = last;
        pos[last] = p;
        items.pop_back();
        pos[e] = absent;
    }
};

} // namespace

trial_record run_evosi(const multi_graph& graph, const epidemic_params& p, std::uint64_t seed) {
    validate(p);
    trial_record rec;
    rec.seed = seed;
    rec.n = graph.n;
    const auto n = static_cast<std::int64_t>(graph.n);
    const auto v0 = static_cast<std::int32_t>(detail::seed_vertex(n, p, seed));
    rec.initial_degree = graph.degree(v0);

    live_graph g(graph);
    edge_pool si(g.ends.size());
    std::vector<char> infected(graph.n, 0);
    infected[v0] = 1;
    std::int64_t infected_count = 1;
    for (auto e : g.adj[v0]) {
        auto other = g.ends[e][0] == v0 ? g.ends[e][1] : g.ends[e][0];
        if (!infected[other]) si.add(e);
    }

    auto jump = make_stream(seed, stream::jump);
    auto clock = make_stream(seed, stream::clock);
    const double total = p.lambda + p.rho;
    double t = 0.0;
    std::int64_t jumps = 0;
    std::size_t next_cp = 0;
    auto take = [&](double at, bool alive) {
        rec.checkpoints.push_back({at, jumps, static_cast<std::int64_t>(si.items.size()), 0,
                                   infected_count, alive});
    };

    while (!si.items.empty()) {
        double nt = t + exponential(clock, total * static_cast<double>(si.items.size()));
        while (next_cp < p.checkpoints.size() && p.checkpoints[next_cp] < nt)
            take(p.checkpoints[next_cp++], true);
        if (p.stop_after_checkpoints && !p.checkpoints.empty() && next_cp == p.checkpoints.size()) {
            rec.completed = false;
            break;
        }
        t = nt;
        auto e = si.items[uniform_below(jump, si.items.size())];
        const int s_side = infected[g.ends[e][0]] ? 1 : 0;
        const auto sv = g.ends[e][s_side];
        if (uniform01(jump) * total < p.lambda) {
            infected[sv] = 1;
            ++infected_count;
            for (auto f : g.adj[sv]) {
                auto other = g.ends[f][0] == sv ? g.ends[f][1] : g.ends[f][0];
                if (infected[other])
                    si.drop(f);
                else
                    si.add(f);
            }
        } else {
            // the susceptible end keeps its stub; the infected end moves to a uniform vertex
            auto target = static_cast<std::int32_t>(uniform_below(jump, static_cast<std::uint64_t>(n)));
            g.detach(e, 1 - s_side);
            g.attach(e, 1 - s_side, target);
            if (!infected[target]) si.drop(e);
        }
        ++jumps;
    }
    while (next_cp < p.checkpoints.size()) take(p.checkpoints[next_cp++], false);
    if (rec.completed) rec.gamma = t;
    rec.final_size = infected_count;
    rec.jumps = jumps;
    rec.outbreak = static_cast<double>(rec.final_size) > p.epsilon * static_cast<double>(rec.n);
    return rec;
}

} // namespace evosi
