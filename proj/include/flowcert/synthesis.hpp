#pragma once

#include <string>
#include <variant>

#include "flowcert/conditions.hpp"

namespace flowcert {

struct EmptyInput : GraphError {
    using GraphError::GraphError;
};
struct SynthesisContractViolated : GraphError {
    using GraphError::GraphError;
};

// Lemma-style word decomposition: blocks whose first and last letters agree,
// at most as many blocks as distinct letters, split at the last occurrence
// of the leading letter.
std::vector<std::string> decompose_word(const std::string& word, int alphabet_size);

// f(v) = max total weight over finite walks from v inside the C_xi-induced
// subgraph (empty walk included, so f >= 0). Longest-path relaxation;
// terminates because internal cycles are negative under (B).
Potential0 sup_potential(const TransitionGraph& g, const Cochain1& xi,
                         const RecurrenceReport& rep);

// Subtracts the coboundary of the zero-extended R_xi potential witness so
// the result vanishes on every R_xi interior edge; cohomologous to input.
Cochain1 zero_on_r_xi(const TransitionGraph& g, const Cochain1& omega, const RecurrenceReport& rep,
                      const Rat& eta_zero);

// Discrete replacement of the smoothing step: a coboundary making every
// SCC-internal non-interior edge at most -epsilon while interior edges stay
// untouched (endpoints share a contracted node). epsilon comes from the max
// contracted cycle mean, so the reweighting is the best uniform margin.
struct DescentResult {
    Cochain1 omega;
    Rat epsilon;  // per-edge margin achieved on SCC-internal non-interior edges
};
DescentResult descent_potential(const TransitionGraph& g, const Cochain1& omega,
                                const RecurrenceReport& rep, const Rat& eta_tight);

// Conley-style potential: constant on SCCs, strictly decreasing along
// condensation edges; reverse-topological longest-path rank normalized
// to [0, 1].
Potential0 conley_potential(const TransitionGraph& g, const RecurrenceReport& rep);

struct LyapunovCertificate {
    Cochain1 xi;      // input class representative
    Cochain1 omega3;
    Potential0 f;     // sup potential, zero-extended
    Potential0 L1;
    Rat lambda = 0;
    std::vector<char> edge_interior;  // per edge: R_xi interior ((L2) edges)
    std::vector<bool> in_r_xi;        // per vertex
    std::vector<int> r_xi_component;  // per vertex, -1 off R_xi

    bool l1_ok = false;   // strict negativity off the R_xi interiors
    bool l2_ok = false;   // zero on R_xi interior edges
    bool class_ok = false;  // basis pairings of omega3 equal xi exactly
    Rat epsilon0 = 0;     // achieved (L1) margin
    Rat zero_tol = 0;     // tolerance used for the (L2) check

    bool valid() const { return l1_ok && l2_ok && class_ok; }
};

LyapunovCertificate combine(const TransitionGraph& g, const Cochain1& xi, const Cochain1& omega2,
                            const Potential0& f, const Potential0& L1,
                            const RecurrenceReport& rep, const ZeroTol& tol);

struct Refusal {
    std::string condition;  // "A" or "B"
    SignedCycle witness;
    Rat pairing = 0;
};

using PipelineResult = std::variant<LyapunovCertificate, Refusal>;

// compute_r_xi -> (A),(B) -> sup potential -> zero on R_xi -> descent
// reweighting -> Conley combine. `rep` must carry R_xi data for `g`.
PipelineResult pipeline(const TransitionGraph& g, const Cochain1& xi, const RecurrenceReport& rep,
                        const ZeroTol& tol);

// Convenience: runs scc_decompose + compute_r_xi first.
PipelineResult pipeline(const TransitionGraph& g, const Cochain1& xi, const ZeroTol& tol);

}  // namespace flowcert
