#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "flowcert/cochain.hpp"

namespace flowcert {

struct NoCycle : GraphError {
    using GraphError::GraphError;
};

enum class SccSignClass {
    AllZero,
    AllNegative,
    AllPositive,
    MixedSigns,
    NonNegWithZero,
    NonPosWithZero,
};

const char* scc_sign_class_name(SccSignClass c);

// Two thresholds realize the closure semantics of the zero-pairing test:
// eta_class decides whether a cycle mean counts as a genuine sign (mixing
// at this scale means 0 is approached arbitrarily well), eta_tight decides
// exact attainment in the tight-edge analysis. Rational inputs use the same
// small value for both; numeric pipelines scale eta_class with the jump
// resolution |xi|*(pad + delta_grid).
struct ZeroTol {
    Rat eta_class = rat_parse("1/1000000000");
    Rat eta_tight = rat_parse("1/1000000000");

    static ZeroTol uniform(const Rat& eta) { return ZeroTol{eta, eta}; }
};

// Exact (min_mean, max_mean) over directed cycles inside one SCC
// (Karp's dynamic program). Throws NoCycle on trivial SCCs.
std::pair<Rat, Rat> cycle_mean_range(const TransitionGraph& g, const Cochain1& xi,
                                     const std::vector<int>& scc_vertices);

SccSignClass classify_scc(const Rat& min_mean, const Rat& max_mean, const ZeroTol& tol);

// Vertices of the SCC through which a closed walk of total weight 0 passes
// (within the closure semantics above). Mixed sign classes yield the whole
// SCC; boundary classes reduce to non-trivial SCCs of the tight-edge
// subgraph under a Bellman-Ford potential.
std::vector<int> zero_walk_vertices(const TransitionGraph& g, const Cochain1& xi,
                                    const std::vector<int>& scc_vertices, const ZeroTol& tol);

// Augments the report with R_xi, C_xi = R - R_xi, per-SCC sign classes and
// the zero-component partition of R_xi. `edge_local` (optional, per edge)
// marks trajectories that stay local; non-local edges never join zero
// components (their routes leave the neighborhood of the component).
void compute_r_xi(const TransitionGraph& g, const Cochain1& xi, RecurrenceReport& rep,
                  const ZeroTol& tol, const std::vector<char>* edge_local = nullptr);

struct PeriodLattice {
    Rat generator = 0;      // 0 encodes trivial (dense=false) or dense (dense=true)
    bool dense = false;
    std::vector<Rat> cycle_pairings;  // basis-cycle pairings inside the SCC
};

PeriodLattice period_lattice(const TransitionGraph& g, const Cochain1& xi,
                             const std::vector<int>& scc_vertices,
                             const Rat& eta_zero = rat_parse("1/1000000000"));

// Abelian-cover test oracle: truncated lift with levels in q*Z cap [-W, W],
// recurrent vertices projected to the base; result intersected with the
// doubled-window projection.
struct LiftResult {
    std::vector<bool> projected_recurrent;  // per base vertex
    bool stable = true;                     // projection unchanged when W doubles
};

LiftResult lift_graph(const TransitionGraph& g, const Cochain1& xi, const Rat& window,
                      const Rat& quantum);

}  // namespace flowcert
