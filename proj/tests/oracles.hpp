#pragma once

/*
 * Independent brute-force oracles for small integer-weighted graphs. Walk
 * enumeration runs as a dynamic program over (length, vertex, accumulated
 * weight); the twisted-recurrence closure rule is applied on top: a vertex
 * carries zero recurrence iff an exact zero closed walk exists, or its SCC
 * holds closed walks of both strict signs (x copies of a weight -y walk and
 * -y copies of a weight x walk concatenate to zero).
 */

#include <functional>
#include <map>
#include <random>
#include <set>

#include "flowcert/cochain.hpp"
#include "flowcert/transition.hpp"

namespace oracle {

using flowcert::Cochain1;
using flowcert::TransitionGraph;

struct IntGraph {
    const TransitionGraph& g;
    std::vector<long> w;

    IntGraph(const TransitionGraph& graph, const Cochain1& xi) : g(graph) {
        for (const auto& q : xi.w) {
            if (q.get_den() != 1) throw std::runtime_error("oracle: non-integer weight");
            w.push_back(q.get_num().get_si());
        }
    }
};

// Achievable weights of closed walks through `start` with 1..max_len edges.
inline std::set<long> closed_walk_weights(const IntGraph& ig, int start, int max_len) {
    long wmax = 1;
    for (long x : ig.w) wmax = std::max(wmax, std::abs(x));
    long cap = wmax * max_len;
    std::set<std::pair<int, long>> cur{{start, 0}};
    std::set<long> out;
    for (int len = 1; len <= max_len; ++len) {
        std::set<std::pair<int, long>> nxt;
        for (auto [v, acc] : cur)
            for (int e : ig.g.out_edges[size_t(v)]) {
                long a2 = acc + ig.w[size_t(e)];
                if (std::abs(a2) > cap) continue;
                nxt.insert({ig.g.edges[size_t(e)].to, a2});
            }
        for (auto [v, acc] : nxt)
            if (v == start) out.insert(acc);
        cur = std::move(nxt);
    }
    return out;
}

// Plain reachability matrix (DFS, no library code).
inline std::vector<std::vector<char>> reachability(const TransitionGraph& g) {
    int n = g.vertex_count;
    std::vector<std::vector<char>> reach(size_t(n), std::vector<char>(size_t(n), 0));
    for (int v = 0; v < n; ++v) {
        std::vector<int> stack{v};
        reach[size_t(v)][size_t(v)] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int e : g.out_edges[size_t(x)]) {
                int y = g.edges[size_t(e)].to;
                if (!reach[size_t(v)][size_t(y)]) {
                    reach[size_t(v)][size_t(y)] = 1;
                    stack.push_back(y);
                }
            }
        }
    }
    return reach;
}

inline std::vector<bool> r_by_walks(const IntGraph& ig, int max_len) {
    std::vector<bool> in_r(size_t(ig.g.vertex_count), false);
    for (int v = 0; v < ig.g.vertex_count; ++v)
        in_r[size_t(v)] = !closed_walk_weights(ig, v, max_len).empty();
    return in_r;
}

struct TwistedOracle {
    std::vector<bool> in_r, in_rxi;
    std::vector<char> zero_edge;       // lies on an exact zero closed walk
    std::vector<int> component;        // zero component per vertex, -1 off R_xi
    std::vector<char> interior_edge;   // both ends in one component of one SCC
};

inline TwistedOracle twisted_oracle(const IntGraph& ig, int max_len) {
    TwistedOracle oc;
    int n = ig.g.vertex_count;
    oc.in_r = r_by_walks(ig, max_len);
    oc.in_rxi.assign(size_t(n), false);
    oc.zero_edge.assign(size_t(ig.g.edge_count()), 0);
    oc.component.assign(size_t(n), -1);
    oc.interior_edge.assign(size_t(ig.g.edge_count()), 0);

    auto reach = reachability(ig.g);
    auto same_scc = [&](int a, int b) { return reach[size_t(a)][size_t(b)] && reach[size_t(b)][size_t(a)]; };

    // per-vertex sign data over cycles anywhere in the vertex's SCC
    std::vector<char> scc_pos(size_t(n), 0), scc_neg(size_t(n), 0);
    for (int v = 0; v < n; ++v) {
        for (int u = 0; u < n; ++u) {
            if (!same_scc(u, v)) continue;
            for (long w : closed_walk_weights(ig, u, n)) {
                scc_pos[size_t(v)] = scc_pos[size_t(v)] || w > 0;
                scc_neg[size_t(v)] = scc_neg[size_t(v)] || w < 0;
            }
        }
    }
    std::vector<char> mixed(size_t(n), 0);
    for (int v = 0; v < n; ++v) mixed[size_t(v)] = scc_pos[size_t(v)] && scc_neg[size_t(v)];

    for (int v = 0; v < n; ++v) {
        if (!oc.in_r[size_t(v)]) continue;
        if (mixed[size_t(v)]) {
            oc.in_rxi[size_t(v)] = true;
            continue;
        }
        oc.in_rxi[size_t(v)] = closed_walk_weights(ig, v, max_len).count(0) > 0;
    }

    // zero edges: e on a zero closed walk of simple-cycle length (mixed SCCs
    // get every internal edge by the closure rule)
    for (int e = 0; e < ig.g.edge_count(); ++e) {
        int u = ig.g.edges[size_t(e)].from, v = ig.g.edges[size_t(e)].to;
        if (!same_scc(u, v)) continue;
        if (mixed[size_t(u)]) {
            oc.zero_edge[size_t(e)] = 1;
            continue;
        }
        // need a walk v -> u of weight exactly -w(e), <= n edges
        long target = -ig.w[size_t(e)];
        std::set<std::pair<int, long>> cur{{v, 0}};
        for (int len = 0; len < n && !oc.zero_edge[size_t(e)]; ++len) {
            if (len > 0) {
                std::set<std::pair<int, long>> nxt;
                long cap = 1;
                for (long x : ig.w) cap = std::max(cap, std::abs(x));
                cap *= n + 1;
                for (auto [x, acc] : cur)
                    for (int e2 : ig.g.out_edges[size_t(x)]) {
                        long a2 = acc + ig.w[size_t(e2)];
                        if (std::abs(a2) > cap) continue;
                        nxt.insert({ig.g.edges[size_t(e2)].to, a2});
                    }
                cur = std::move(nxt);
            }
            for (auto [x, acc] : cur)
                if (x == u && acc == target && (len > 0 || u == v)) oc.zero_edge[size_t(e)] = 1;
        }
    }

    // components: connected pieces of zero edges (undirected)
    std::vector<int> parent(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) parent[size_t(v)] = v;
    std::function<int(int)> find = [&](int x) {
        return parent[size_t(x)] == x ? x : parent[size_t(x)] = find(parent[size_t(x)]);
    };
    for (int e = 0; e < ig.g.edge_count(); ++e)
        if (oc.zero_edge[size_t(e)])
            parent[size_t(find(ig.g.edges[size_t(e)].from))] = find(ig.g.edges[size_t(e)].to);
    std::map<int, int> ids;
    for (int v = 0; v < n; ++v) {
        if (!oc.in_rxi[size_t(v)]) continue;
        int root = find(v);
        auto it = ids.find(root);
        if (it == ids.end()) it = ids.emplace(root, int(ids.size())).first;
        oc.component[size_t(v)] = it->second;
    }
    for (int e = 0; e < ig.g.edge_count(); ++e) {
        int u = ig.g.edges[size_t(e)].from, v = ig.g.edges[size_t(e)].to;
        oc.interior_edge[size_t(e)] = oc.in_rxi[size_t(u)] && oc.in_rxi[size_t(v)] &&
                                      same_scc(u, v) && oc.component[size_t(u)] >= 0 &&
                                      oc.component[size_t(u)] == oc.component[size_t(v)];
    }
    return oc;
}

// (A): exact integer potential on the interior edges.
inline bool condition_a_oracle(const IntGraph& ig, const TwistedOracle& oc) {
    int n = ig.g.vertex_count;
    std::vector<long> pot(size_t(n), 0);
    std::vector<char> fixed(size_t(n), 0);
    bool changed = true;
    int guard = 0;
    while (changed && guard++ <= 4 * n + 8) {
        changed = false;
        for (int e = 0; e < ig.g.edge_count(); ++e) {
            if (!oc.interior_edge[size_t(e)]) continue;
            int u = ig.g.edges[size_t(e)].from, v = ig.g.edges[size_t(e)].to;
            long need = ig.w[size_t(e)];
            if (u == v) {
                if (need != 0) return false;
                continue;
            }
            if (!fixed[size_t(u)] && !fixed[size_t(v)]) {
                fixed[size_t(u)] = fixed[size_t(v)] = 1;
                pot[size_t(u)] = 0;
                pot[size_t(v)] = need;
                changed = true;
            } else if (fixed[size_t(u)] && !fixed[size_t(v)]) {
                pot[size_t(v)] = pot[size_t(u)] + need;
                fixed[size_t(v)] = 1;
                changed = true;
            } else if (!fixed[size_t(u)] && fixed[size_t(v)]) {
                pot[size_t(u)] = pot[size_t(v)] - need;
                fixed[size_t(u)] = 1;
                changed = true;
            } else if (pot[size_t(v)] - pot[size_t(u)] != need) {
                return false;
            }
        }
    }
    return true;
}

// (B): no closed walk of weight >= 0 through a C_xi vertex, and no strictly
// positive cycle anywhere in an SCC holding C_xi vertices.
inline bool condition_b_oracle(const IntGraph& ig, const TwistedOracle& oc, int max_len) {
    auto reach = reachability(ig.g);
    for (int v = 0; v < ig.g.vertex_count; ++v) {
        if (!oc.in_r[size_t(v)] || oc.in_rxi[size_t(v)]) continue;
        for (long w : closed_walk_weights(ig, v, max_len))
            if (w >= 0) return false;
        for (int u = 0; u < ig.g.vertex_count; ++u) {
            if (!(reach[size_t(v)][size_t(u)] && reach[size_t(u)][size_t(v)])) continue;
            for (long w : closed_walk_weights(ig, u, ig.g.vertex_count))
                if (w > 0) return false;
        }
    }
    return true;
}

inline std::pair<TransitionGraph, Cochain1> random_graph(std::mt19937& rng, int max_vertices,
                                                         int max_edges, long wmax) {
    TransitionGraph g;
    g.vertex_count = 1 + int(rng() % size_t(max_vertices));
    Cochain1 xi;
    int edges = 1 + int(rng() % size_t(max_edges));
    for (int e = 0; e < edges; ++e) {
        int u = int(rng() % size_t(g.vertex_count));
        int v = int(rng() % size_t(g.vertex_count));
        g.add_edge(u, v);
        long w = long(rng() % size_t(2 * wmax + 1)) - wmax;
        xi.w.push_back(flowcert::Rat(w));
    }
    g.finalize();
    return {std::move(g), std::move(xi)};
}

}  // namespace oracle
