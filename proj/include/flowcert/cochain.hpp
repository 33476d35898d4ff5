#pragma once

#include "flowcert/transition.hpp"

namespace flowcert {

// Edge cochain: one exact rational weight per edge; carries omega, xi and
// the synthesized forms omega_1..omega_3.
struct Cochain1 {
    std::vector<Rat> w;

    static Cochain1 zeros(const TransitionGraph& g) {
        return Cochain1{std::vector<Rat>(size_t(g.edge_count()), Rat(0))};
    }
    int size() const { return int(w.size()); }
};

// Vertex potential; houses f, L, L1 and extension witnesses.
struct Potential0 {
    std::vector<Rat> v;

    static Potential0 zeros(const TransitionGraph& g) {
        return Potential0{std::vector<Rat>(size_t(g.vertex_count), Rat(0))};
    }
    int size() const { return int(v.size()); }
};

}  // namespace flowcert
