#include "evosi/config_graph.hpp"

#include "evosi/errors.hpp"

namespace evosi {

half_edge_pool::half_edge_pool(const degree_sequence& seq) {
    owner_.reserve(static_cast<std::size_t>(seq.total_degree()));
    const auto& d = seq.degrees();
    for (std::size_t v = 0; v < d.size(); ++v)
        for (int j = 0; j < d[v]; ++j) owner_.push_back(static_cast<std::int32_t>(v));
    entries_.resize(owner_.size());
    pos_.resize(owner_.size());
    for (std::size_t i = 0; i < owner_.size(); ++i) entries_[i] = pos_[i] = static_cast<std::int64_t>(i);
}

half_edge_pool::half_edge_pool(std::vector<std::int32_t> owner) : owner_(std::move(owner)) {
    entries_.resize(owner_.size());
    pos_.resize(owner_.size());
    for (std::size_t i = 0; i < owner_.size(); ++i) entries_[i] = pos_[i] = static_cast<std::int64_t>(i);
}

std::int64_t half_edge_pool::draw(rng_t& g) const {
    if (entries_.empty()) throw empty_pool("draw from an empty half-edge pool");
    return entries_[uniform_below(g, entries_.size())];
}

void half_edge_pool::remove(std::int64_t id) {
    if (entries_.empty()) throw empty_pool("remove from an empty half-edge pool");
    std::int64_t p = pos_[id];
    if (p < 0) throw std::invalid_argument("half-edge not in pool");
    std::int64_t last = entries_.back();
    entries_[p] = last;
    pos_[last] = p;
    entries_.pop_back();
    pos_[id] = -1;
}

void half_edge_pool::insert(std::int64_t id) {
    if (pos_[id] >= 0) return;
    pos_[id] = static_cast<std::int64_t>(entries_.size());
    entries_.push_back(id);
}

multi_graph build_configuration_model(const degree_sequence& seq, rng_t& g) {
    if (seq.total_degree() % 2 != 0)
        throw odd_degree_sum("sum of degrees is odd; apply the parity fix first");
    multi_graph G;
    G.n = static_cast<std::int32_t>(seq.n());
    G.adjacency.resize(G.n);
    for (std::int32_t v = 0; v < G.n; ++v) G.adjacency[v].reserve(seq.degrees()[v]);
    G.ends.reserve(static_cast<std::size_t>(seq.total_degree() / 2));
    half_edge_pool pool(seq);
    while (!pool.empty()) {
        auto a = pool.draw(g);
        pool.remove(a);
        auto b = pool.draw(g);
        pool.remove(b);
        auto e = static_cast<std::int32_t>(G.ends.size());
        std::int32_t u = pool.owner(a), v = pool.owner(b);
        G.ends.emplace_back(u, v);
        G.adjacency[u].push_back(e);
        G.adjacency[v].push_back(e);
    }
    return G;
}

} // namespace evosi
