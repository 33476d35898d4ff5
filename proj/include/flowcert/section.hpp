#pragma once

#include "flowcert/synthesis.hpp"

namespace flowcert {

struct NotIntegral : GraphError {
    using GraphError::GraphError;
};
struct NotASection : GraphError {
    using GraphError::GraphError;
};

// True iff all basis-cycle pairings are integers (within eta).
bool is_integral(const TransitionGraph& g, const Cochain1& xi, const Rat& eta_zero);

struct CircleMap {
    std::vector<Rat> lift;    // F per vertex (BFS-tree integration of omega3)
    std::vector<Rat> angle;   // F mod 1, in [0, 1)
    std::vector<int> base;    // base vertex per weakly-connected component
};

// Requires an empty R_xi, a valid certificate and an integral class. Every
// edge then has a strictly negative lift increment.
CircleMap build_circle_map(const TransitionGraph& g, const LyapunovCertificate& cert,
                           const Rat& eta_zero);

struct CrossSection {
    Rat theta;                    // in [0, 1)
    std::vector<int> edges;       // K: edges crossing the level
    std::vector<Rat> crossing_at; // representative crossed level per edge (first crossing)
};

// K = edges whose descending lift interval [F(u)+w3, F(u)) contains a
// representative of theta mod 1; the closed lower end owns boundary hits.
CrossSection extract_cross_section(const TransitionGraph& g, const LyapunovCertificate& cert,
                                   const CircleMap& map, const Rat& theta);

// Signed crossing count of one edge traversal against level theta.
long edge_crossing_count(const Rat& lift_from, const Rat& w3, const Rat& theta);

// Crossings of a signed cycle; equals minus the cycle's omega3 pairing.
long cycle_crossing_count(const TransitionGraph& g, const LyapunovCertificate& cert,
                          const CircleMap& map, const SignedCycle& cycle, const Rat& theta);

}  // namespace flowcert
