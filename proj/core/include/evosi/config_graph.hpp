#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evosi/degree_model.hpp"
#include "evosi/rng.hpp"

namespace evosi {

// Flat pool of half-edge ids with swap-remove. Ids are 0..capacity-1.
class half_edge_pool {
public:
    half_edge_pool() = default;
    // one half-edge per stub; owner[id] is the vertex of half-edge id
    explicit half_edge_pool(const degree_sequence& seq);
    explicit half_edge_pool(std::vector<std::int32_t> owner);

    std::int64_t count() const { return static_cast<std::int64_t>(entries_.size()); }
    bool empty() const { return entries_.empty(); }
    bool contains(std::int64_t id) const { return pos_[id] >= 0; }
    std::int32_t owner(std::int64_t id) const { return owner_[id]; }
    std::int64_t at(std::int64_t i) const { return entries_[i]; }

    std::int64_t draw(rng_t& g) const;
    void remove(std::int64_t id);
    // adds back a previously removed id
    void insert(std::int64_t id);

private:
    std::vector<std::int64_t> entries_;
    std::vector<std::int64_t> pos_;
    std::vector<std::int32_t> owner_;
};

struct multi_graph {
    std::int32_t n = 0;
    // edge e joins ends[e].first and ends[e].second; a self-loop has equal ends
    std::vector<std::pair<std::int32_t, std::int32_t>> ends;
    // edge ids per vertex; a self-loop is listed twice
    std::vector<std::vector<std::int32_t>> adjacency;

    std::int64_t edge_count() const { return static_cast<std::int64_t>(ends.size()); }
    int degree(std::int32_t v) const { return static_cast<int>(adjacency[v].size()); }
};

multi_graph build_configuration_model(const degree_sequence& seq, rng_t& g);

} // namespace evosi
