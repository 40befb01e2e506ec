#pragma once

// Exact final-size law of evoSI on a small multigraph by enumerating the CTMC state space.
// Shared by the unit tests and the acceptance runner.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <utility>
#include <vector>

namespace oracle {

struct ctmc_state {
    unsigned infected = 0;
    std::vector<std::pair<int, int>> edges; // sorted, each pair sorted

    bool operator<(const ctmc_state& o) const {
        return infected != o.infected ? infected < o.infected : edges < o.edges;
    }
};

inline ctmc_state normalize(ctmc_state s) {
    for (auto& e : s.edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(s.edges.begin(), s.edges.end());
    return s;
}

// returns P(final size = j) for j = 0..n
inline std::vector<double> evosi_final_size_law(int n, std::vector<std::pair<int, int>> edges,
                                                int seed_vertex, double lambda, double rho) {
    struct move {
        ctmc_state to;
        double rate;
    };
    auto moves = [&](const ctmc_state& s) {
        std::vector<move> out;
        for (std::size_t i = 0; i < s.edges.size(); ++i) {
            auto [a, b] = s.edges[i];
            bool ia = s.infected >> a & 1u, ib = s.infected >> b & 1u;
            if (ia == ib) continue;
            int sv = ia ? b : a;
            ctmc_state inf = s;
            inf.infected |= 1u << sv;
            out.push_back({normalize(inf), lambda});
            for (int w = 0; w < n; ++w) {
                ctmc_state r = s;
                r.edges[i] = {sv, w};
                out.push_back({normalize(r), rho / n});
            }
        }
        return out;
    };
    ctmc_state start{1u << seed_vertex, edges};
    start = normalize(start);
    std::map<ctmc_state, int> index;
    std::vector<ctmc_state> states;
    std::queue<ctmc_state> todo;
    index[start] = 0;
    states.push_back(start);
    todo.push(start);
    while (!todo.empty()) {
        auto s = todo.front();
        todo.pop();
        for (auto& m : moves(s)) {
            if (index.count(m.to)) continue;
            index[m.to] = static_cast<int>(states.size());
            states.push_back(m.to);
            todo.push(m.to);
        }
    }
    const int N = static_cast<int>(states.size());
    // embedded jump chain: h_j(i) = P(absorb with j infected | start in i)
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(N, N);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, n + 1);
    for (int i = 0; i < N; ++i) {
        auto ms = moves(states[i]);
        double total = 0.0;
        for (auto& m : ms) total += m.rate;
        if (total == 0.0) {
            B(i, std::popcount(states[i].infected)) = 1.0;
            continue;
        }
        for (auto& m : ms) A(i, index[m.to]) -= m.rate / total;
    }
    Eigen::MatrixXd H = A.partialPivLu().solve(B);
    std::vector<double> law(n + 1);
    for (int j = 0; j <= n; ++j) law[j] = H(0, j);
    return law;
}

} // namespace oracle
