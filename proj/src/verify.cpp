#include "flowcert/io.hpp"

/*
 * Independent certificate checker. Deliberately shares no analysis code with
 * the synthesis path: SCCs via Kosaraju (the library uses Tarjan), cycle
 * pairings via its own DFS spanning forest. Everything is recomputed from
 * the raw certificate data.
 */

namespace flowcert {

namespace {

std::vector<int> kosaraju_scc(const TransitionGraph& g) {
    int n = g.vertex_count;
    std::vector<int> order;
    order.reserve(static_cast<size_t>(n));
    std::vector<char> seen(size_t(n), 0);
    for (int root = 0; root < n; ++root) {
        if (seen[size_t(root)]) continue;
        std::vector<std::pair<int, size_t>> st{{root, 0}};
        seen[size_t(root)] = 1;
        while (!st.empty()) {
            auto& [v, i] = st.back();
            if (i < g.out_edges[size_t(v)].size()) {
                int to = g.edges[size_t(g.out_edges[size_t(v)][i++])].to;
                if (!seen[size_t(to)]) {
                    seen[size_t(to)] = 1;
                    st.push_back({to, 0});
                }
            } else {
                order.push_back(v);
                st.pop_back();
            }
        }
    }
    std::vector<int> comp(size_t(n), -1);
    int c = 0;
    for (size_t i = order.size(); i-- > 0;) {
        int root = order[i];
        if (comp[size_t(root)] >= 0) continue;
        std::vector<int> st{root};
        comp[size_t(root)] = c;
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (int e : g.in_edges[size_t(v)]) {
                int u = g.edges[size_t(e)].from;
                if (comp[size_t(u)] < 0) {
                    comp[size_t(u)] = c;
                    st.push_back(u);
                }
            }
        }
        ++c;
    }
    return comp;
}

// Pairing of every independent cycle via DFS tree potentials.
bool class_pairings_match(const TransitionGraph& g, const std::vector<Rat>& a,
                          const std::vector<Rat>& b) {
    int n = g.vertex_count;
    std::vector<Rat> pa(size_t(n), Rat(0)), pb(size_t(n), Rat(0));
    std::vector<char> seen(size_t(n), 0);
    std::vector<char> tree(size_t(g.edge_count()), 0);
    std::vector<std::vector<std::pair<int, int>>> und(static_cast<size_t>(n));
    for (int e = 0; e < g.edge_count(); ++e) {
        und[size_t(g.edges[size_t(e)].from)].push_back({e, g.edges[size_t(e)].to});
        und[size_t(g.edges[size_t(e)].to)].push_back({e, g.edges[size_t(e)].from});
    }
    for (int root = 0; root < n; ++root) {
        if (seen[size_t(root)]) continue;
        seen[size_t(root)] = 1;
        std::vector<int> st{root};
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (auto [e, other] : und[size_t(v)]) {
                if (seen[size_t(other)]) continue;
                seen[size_t(other)] = 1;
                tree[size_t(e)] = 1;
                int sgn = g.edges[size_t(e)].to == other ? +1 : -1;
                pa[size_t(other)] = pa[size_t(v)] + Rat(sgn) * a[size_t(e)];
                pb[size_t(other)] = pb[size_t(v)] + Rat(sgn) * b[size_t(e)];
                st.push_back(other);
            }
        }
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        if (tree[size_t(e)]) continue;
        const auto& ed = g.edges[size_t(e)];
        Rat ca = a[size_t(e)] - (pa[size_t(ed.to)] - pa[size_t(ed.from)]);
        Rat cb = b[size_t(e)] - (pb[size_t(ed.to)] - pb[size_t(ed.from)]);
        if (ca != cb) return false;
    }
    return true;
}

}  // namespace

VerifyResult verify_certificate(const ParsedCertificate& cert, const GraphFile& gf) {
    const TransitionGraph& g = gf.graph;
    std::string h = graph_hash(g, gf.weights);
    if (h != cert.hash)
        return {false, "GraphMismatch: certificate hash " + cert.hash + " but graph " + h};
    if (cert.omega3.size() != g.edge_count() || cert.xi.size() != g.edge_count())
        return {false, "GraphMismatch: edge count differs"};
    if (int(cert.in_r_xi.size()) != g.vertex_count)
        return {false, "GraphMismatch: vertex count differs"};

    auto comp = kosaraju_scc(g);
    // claimed (L2) edges must join one zero component inside one SCC
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!cert.edge_interior[size_t(e)]) continue;
        int u = g.edges[size_t(e)].from, v = g.edges[size_t(e)].to;
        if (!cert.in_r_xi[size_t(u)] || !cert.in_r_xi[size_t(v)] ||
            comp[size_t(u)] != comp[size_t(v)] ||
            cert.r_xi_component[size_t(u)] != cert.r_xi_component[size_t(v)])
            return {false, "interior claim unsound on edge " + std::to_string(e)};
    }

    // (L2): zero on claimed interior edges; (L1): strictly negative elsewhere.
    for (int e = 0; e < g.edge_count(); ++e) {
        const Rat& w3 = cert.omega3.w[size_t(e)];
        if (cert.edge_interior[size_t(e)]) {
            if (rat_abs(w3) > cert.zero_tol)
                return {false, "L2 violated on edge " + std::to_string(e)};
        } else if (w3 > -cert.zero_tol) {
            return {false, "L1 violated on edge " + std::to_string(e)};
        }
    }
    // class preservation: all independent cycle pairings agree exactly
    if (!class_pairings_match(g, cert.omega3.w, cert.xi.w))
        return {false, "class check failed: omega3 is not cohomologous to xi"};
    return {true, ""};
}

}  // namespace flowcert
