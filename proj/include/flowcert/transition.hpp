#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowcert/rational.hpp"

namespace flowcert {

// Points live in at most 3 coordinates (spec non-goal: dim > 3).
struct Pt {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    double& operator[](int i) { return x[size_t(i)]; }
    double operator[](int i) const { return x[size_t(i)]; }
};

using Polyline = std::vector<Pt>;

// Directed multigraph of boxes. Each edge is one time-tau chain step; the
// optional polyline is the integrated trajectory in unwrapped coordinates,
// ending at the target box anchor (trajectory plus closing jump).
struct TransitionGraph {
    struct Edge {
        int from = 0;
        int to = 0;
        double duration = 1.0;
        Polyline path;  // empty for file-loaded graphs
    };

    int vertex_count = 0;
    std::vector<Edge> edges;

    std::vector<std::vector<int>> out_edges;  // vertex -> edge ids
    std::vector<std::vector<int>> in_edges;

    void add_edge(int u, int v, double duration = 1.0, Polyline path = {}) {
        edges.push_back(Edge{u, v, duration, std::move(path)});
    }

    // Builds adjacency and validates vertex references and durations.
    void finalize();

    int edge_count() const { return int(edges.size()); }
};

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// scc id per vertex (reverse topological order: edges go from higher scc
// rank to lower or stay), non-trivial = has an internal edge.
struct RecurrenceReport {
    int vertex_count = 0;
    std::vector<int> scc_id;                   // per vertex
    std::vector<std::vector<int>> scc_vertices;
    std::vector<bool> scc_nontrivial;
    std::vector<bool> in_r;                    // vertex in a non-trivial SCC
    std::vector<std::vector<int>> transitive_components;  // = non-trivial SCCs

    // Condensation DAG on scc ids (deduplicated edges, no self-loops).
    std::vector<std::vector<int>> condensation_out;

    // Filled by twisted::compute_r_xi.
    bool has_xi = false;
    std::vector<bool> in_r_xi;
    std::vector<bool> in_c_xi;
    std::vector<int> r_xi_component;  // -1 off R_xi; component ids of the zero part
    std::vector<int> scc_class;       // SccSignClass per scc (as int; see twisted.hpp)
    std::vector<Rat> scc_min_mean, scc_max_mean;  // valid for non-trivial SCCs

    // Per edge: trajectory stays local (never crosses half a period). Only
    // local edges belong to the restriction of the class to R_xi; a winding
    // trajectory between R_xi boxes is an (L1) route, not an (L2) one.
    // Empty means every edge is local (combinatorial graphs).
    std::vector<char> edge_local;

    int scc_count() const { return int(scc_vertices.size()); }
    std::vector<int> r_vertices() const;

    // True iff e's endpoints lie in one SCC and in one R_xi zero component.
    bool edge_in_r_xi_interior(const TransitionGraph& g, int e) const;
};

RecurrenceReport scc_decompose(const TransitionGraph& g);

// True iff a walk u -> v with at least n_min edges exists. Walks may pad
// inside non-trivial SCCs; otherwise the relevant subgraph is a DAG and the
// longest path decides.
bool chain_exists(const TransitionGraph& g, int u, int v, int n_min);

// Cycle space of the underlying undirected multigraph via a BFS spanning
// forest. Basis cycles are indexed by non-tree edges; any closed walk's
// basis coordinates are just its signed non-tree edge counts.
class CycleBasis {
  public:
    explicit CycleBasis(const TransitionGraph& g);

    int basis_size() const { return int(non_tree_.size()); }
    const std::vector<int>& non_tree_edges() const { return non_tree_; }
    bool is_tree_edge(int e) const { return tree_flag_[size_t(e)]; }

    // Basis cycle as signed edge list: the non-tree edge (+1) followed by
    // the tree path back (signs; -1 = traversed against direction).
    std::vector<std::pair<int, int>> cycle_edges(int basis_index) const;

    // Pairing of every basis cycle with a cochain, O(V + E) total.
    std::vector<Rat> pair_all(const std::vector<Rat>& weights) const;
    Rat pair_one(int basis_index, const std::vector<Rat>& weights) const;

    // Tree path u -> v as signed edge list (empty if different components).
    std::vector<std::pair<int, int>> tree_path(int u, int v) const;

    int component_of(int v) const { return comp_[size_t(v)]; }

  private:
    const TransitionGraph* g_;
    std::vector<int> non_tree_;
    std::vector<char> tree_flag_;
    std::vector<int> parent_edge_;  // tree edge id into vertex, -1 at roots
    std::vector<int> parent_;       // parent vertex, -1 at roots
    std::vector<int> depth_;
    std::vector<int> comp_;
};

// Integer coordinates over a fixed CycleBasis.
struct CycleVector {
    std::vector<long> coeff;  // indexed by basis position

    bool is_zero() const {
        for (long c : coeff)
            if (c != 0) return false;
        return true;
    }
    long l1_norm() const {
        long s = 0;
        for (long c : coeff) s += c < 0 ? -c : c;
        return s;
    }
};

}  // namespace flowcert
