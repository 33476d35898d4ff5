#include "flowcert/transition.hpp"

#include <algorithm>
#include <queue>

namespace flowcert {

void TransitionGraph::finalize() {
    out_edges.assign(size_t(vertex_count), {});
    in_edges.assign(size_t(vertex_count), {});
    for (int e = 0; e < edge_count(); ++e) {
        const Edge& ed = edges[size_t(e)];
        if (ed.from < 0 || ed.from >= vertex_count || ed.to < 0 || ed.to >= vertex_count)
            throw GraphError("edge references missing vertex");
        if (ed.duration < 1.0) throw GraphError("edge duration < 1");
        out_edges[size_t(ed.from)].push_back(e);
        in_edges[size_t(ed.to)].push_back(e);
    }
}

namespace {

// Iterative Tarjan; grids produce thousands of vertices.
struct TarjanState {
    const TransitionGraph& g;
    std::vector<int> index, low, comp;
    std::vector<char> on_stack;
    std::vector<int> stack;
    int next_index = 0;
    int next_comp = 0;

    explicit TarjanState(const TransitionGraph& gr)
        : g(gr),
          index(size_t(gr.vertex_count), -1),
          low(size_t(gr.vertex_count), 0),
          comp(size_t(gr.vertex_count), -1),
          on_stack(size_t(gr.vertex_count), 0) {}

    void run(int root) {
        struct Frame {
            int v;
            size_t next_out;
        };
        std::vector<Frame> frames;
        frames.push_back({root, 0});
        index[size_t(root)] = low[size_t(root)] = next_index++;
        stack.push_back(root);
        on_stack[size_t(root)] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& outs = g.out_edges[size_t(f.v)];
            if (f.next_out < outs.size()) {
                int w = g.edges[size_t(outs[f.next_out++])].to;
                if (index[size_t(w)] < 0) {
                    index[size_t(w)] = low[size_t(w)] = next_index++;
                    stack.push_back(w);
                    on_stack[size_t(w)] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[size_t(w)]) {
                    low[size_t(f.v)] = std::min(low[size_t(f.v)], index[size_t(w)]);
                }
            } else {
                if (low[size_t(f.v)] == index[size_t(f.v)]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[size_t(w)] = 0;
                        comp[size_t(w)] = next_comp;
                        if (w == f.v) break;
                    }
                    ++next_comp;
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[size_t(frames.back().v)] = std::min(low[size_t(frames.back().v)], low[size_t(v)]);
            }
        }
    }
};

}  // namespace

RecurrenceReport scc_decompose(const TransitionGraph& g) {
    TarjanState ts(g);
    for (int v = 0; v < g.vertex_count; ++v)
        if (ts.index[size_t(v)] < 0) ts.run(v);

    RecurrenceReport rep;
    rep.vertex_count = g.vertex_count;
    rep.scc_id = ts.comp;
    rep.scc_vertices.assign(size_t(ts.next_comp), {});
    for (int v = 0; v < g.vertex_count; ++v) rep.scc_vertices[size_t(ts.comp[size_t(v)])].push_back(v);

    rep.scc_nontrivial.assign(size_t(ts.next_comp), false);
    for (const auto& e : g.edges)
        if (ts.comp[size_t(e.from)] == ts.comp[size_t(e.to)])
            rep.scc_nontrivial[size_t(ts.comp[size_t(e.from)])] = true;

    rep.in_r.assign(size_t(g.vertex_count), false);
    for (int v = 0; v < g.vertex_count; ++v)
        rep.in_r[size_t(v)] = rep.scc_nontrivial[size_t(ts.comp[size_t(v)])];

    for (const auto& vs : rep.scc_vertices) {
        if (rep.scc_nontrivial[size_t(rep.scc_id[size_t(vs.front())])])
            rep.transitive_components.push_back(vs);
    }

    rep.condensation_out.assign(size_t(ts.next_comp), {});
    for (const auto& e : g.edges) {
        int a = ts.comp[size_t(e.from)], b = ts.comp[size_t(e.to)];
        if (a != b) rep.condensation_out[size_t(a)].push_back(b);
    }
    for (auto& outs : rep.condensation_out) {
        std::sort(outs.begin(), outs.end());
        outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
    }
    return rep;
}

std::vector<int> RecurrenceReport::r_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < vertex_count; ++v)
        if (in_r[size_t(v)]) out.push_back(v);
    return out;
}

bool RecurrenceReport::edge_in_r_xi_interior(const TransitionGraph& g, int e) const {
    if (!has_xi) return false;
    int u = g.edges[size_t(e)].from, v = g.edges[size_t(e)].to;
    if (!in_r_xi[size_t(u)] || !in_r_xi[size_t(v)]) return false;
    if (scc_id[size_t(u)] != scc_id[size_t(v)]) return false;
    if (!edge_local.empty() && !edge_local[size_t(e)]) return false;
    return r_xi_component[size_t(u)] == r_xi_component[size_t(v)] && r_xi_component[size_t(u)] >= 0;
}

bool chain_exists(const TransitionGraph& g, int u, int v, int n_min) {
    if (n_min < 1) throw GraphError("chain_exists: n_min must be >= 1");
    int n = g.vertex_count;
    // forward reachability from u, backward from v
    auto bfs = [&](int s, bool forward) {
        std::vector<char> seen(size_t(n), 0);
        std::queue<int> q;
        q.push(s);
        seen[size_t(s)] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            const auto& adj = forward ? g.out_edges[size_t(x)] : g.in_edges[size_t(x)];
            for (int e : adj) {
                int y = forward ? g.edges[size_t(e)].to : g.edges[size_t(e)].from;
                if (!seen[size_t(y)]) {
                    seen[size_t(y)] = 1;
                    q.push(y);
                }
            }
        }
        return seen;
    };
    auto from_u = bfs(u, true);
    auto to_v = bfs(v, false);

    std::vector<char> relevant(size_t(n), 0);
    bool any = false;
    for (int x = 0; x < n; ++x) {
        relevant[size_t(x)] = from_u[size_t(x)] && to_v[size_t(x)];
        any = any || relevant[size_t(x)];
    }
    if (!any) return false;

    // Any cycle inside the relevant subgraph allows arbitrary padding.
    auto rep = scc_decompose(g);
    for (const auto& e : g.edges) {
        if (!relevant[size_t(e.from)] || !relevant[size_t(e.to)]) continue;
        if (rep.scc_id[size_t(e.from)] == rep.scc_id[size_t(e.to)]) return true;
    }

    // Otherwise the relevant subgraph is a DAG: longest u->v path decides.
    // Longest path by edge count via DP in topological order (scc ids from
    // Tarjan are reverse-topological).
    std::vector<int> order;
    for (int x = 0; x < n; ++x)
        if (relevant[size_t(x)]) order.push_back(x);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return rep.scc_id[size_t(a)] > rep.scc_id[size_t(b)];
    });
    const int kNone = -1 << 20;
    std::vector<int> longest(size_t(n), kNone);
    longest[size_t(u)] = 0;
    for (int x : order) {
        if (longest[size_t(x)] == kNone) continue;
        for (int e : g.out_edges[size_t(x)]) {
            int y = g.edges[size_t(e)].to;
            if (!relevant[size_t(y)]) continue;
            longest[size_t(y)] = std::max(longest[size_t(y)], longest[size_t(x)] + 1);
        }
    }
    return longest[size_t(v)] >= n_min;
}

CycleBasis::CycleBasis(const TransitionGraph& g) : g_(&g) {
    int n = g.vertex_count;
    tree_flag_.assign(size_t(g.edge_count()), 0);
    parent_edge_.assign(size_t(n), -1);
    parent_.assign(size_t(n), -1);
    depth_.assign(size_t(n), 0);
    comp_.assign(size_t(n), -1);

    std::vector<char> edge_used(size_t(g.edge_count()), 0);
    int comp_id = 0;
    for (int root = 0; root < n; ++root) {
        if (comp_[size_t(root)] >= 0) continue;
        comp_[size_t(root)] = comp_id;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            auto visit = [&](int e, int other) {
                if (comp_[size_t(other)] >= 0 || other == v) return;
                comp_[size_t(other)] = comp_id;
                parent_[size_t(other)] = v;
                parent_edge_[size_t(other)] = e;
                depth_[size_t(other)] = depth_[size_t(v)] + 1;
                tree_flag_[size_t(e)] = 1;
                edge_used[size_t(e)] = 1;
                q.push(other);
            };
            for (int e : g.out_edges[size_t(v)]) visit(e, g.edges[size_t(e)].to);
            for (int e : g.in_edges[size_t(v)]) visit(e, g.edges[size_t(e)].from);
        }
        ++comp_id;
    }
    for (int e = 0; e < g.edge_count(); ++e)
        if (!tree_flag_[size_t(e)]) non_tree_.push_back(e);
}

std::vector<std::pair<int, int>> CycleBasis::tree_path(int u, int v) const {
    std::vector<std::pair<int, int>> up, down;
    if (comp_[size_t(u)] != comp_[size_t(v)]) return {};
    int a = u, b = v;
    while (depth_[size_t(a)] > depth_[size_t(b)]) {
        int e = parent_edge_[size_t(a)];
        // climbing from a to parent(a): sign +1 if edge points a->parent
        up.emplace_back(e, g_->edges[size_t(e)].from == a ? +1 : -1);
        a = parent_[size_t(a)];
    }
    while (depth_[size_t(b)] > depth_[size_t(a)]) {
        int e = parent_edge_[size_t(b)];
        down.emplace_back(e, g_->edges[size_t(e)].to == b ? +1 : -1);
        b = parent_[size_t(b)];
    }
    while (a != b) {
        int ea = parent_edge_[size_t(a)];
        up.emplace_back(ea, g_->edges[size_t(ea)].from == a ? +1 : -1);
        a = parent_[size_t(a)];
        int eb = parent_edge_[size_t(b)];
        down.emplace_back(eb, g_->edges[size_t(eb)].to == b ? +1 : -1);
        b = parent_[size_t(b)];
    }
    std::reverse(down.begin(), down.end());
    up.insert(up.end(), down.begin(), down.end());
    return up;
}

std::vector<std::pair<int, int>> CycleBasis::cycle_edges(int basis_index) const {
    int e = non_tree_[size_t(basis_index)];
    std::vector<std::pair<int, int>> cyc;
    cyc.emplace_back(e, +1);
    auto back = tree_path(g_->edges[size_t(e)].to, g_->edges[size_t(e)].from);
    cyc.insert(cyc.end(), back.begin(), back.end());
    return cyc;
}

std::vector<Rat> CycleBasis::pair_all(const std::vector<Rat>& weights) const {
    // Tree potential P with P(root)=0 and P(head)-P(tail)=w on tree edges;
    // then pairing(C_e) = w(e) - (P(to) - P(from)).
    int n = g_->vertex_count;
    std::vector<Rat> pot(size_t(n), Rat(0));
    std::vector<int> order(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) order[size_t(v)] = v;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return depth_[size_t(a)] < depth_[size_t(b)]; });
    for (int v : order) {
        int e = parent_edge_[size_t(v)];
        if (e < 0) continue;
        const auto& ed = g_->edges[size_t(e)];
        if (ed.to == v)
            pot[size_t(v)] = pot[size_t(ed.from)] + weights[size_t(e)];
        else
            pot[size_t(v)] = pot[size_t(ed.to)] - weights[size_t(e)];
    }
    std::vector<Rat> out;
    out.reserve(non_tree_.size());
    for (int e : non_tree_) {
        const auto& ed = g_->edges[size_t(e)];
        out.push_back(weights[size_t(e)] - (pot[size_t(ed.to)] - pot[size_t(ed.from)]));
    }
    return out;
}

Rat CycleBasis::pair_one(int basis_index, const std::vector<Rat>& weights) const {
    Rat s = 0;
    for (auto [e, sgn] : cycle_edges(basis_index)) s += Rat(sgn) * weights[size_t(e)];
    return s;
}

}  // namespace flowcert
