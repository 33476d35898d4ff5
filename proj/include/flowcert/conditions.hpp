#pragma once

#include <optional>

#include "flowcert/twisted.hpp"

namespace flowcert {

struct NotApplicable : GraphError {
    using GraphError::GraphError;
};

// Signed edge list (edge id, +-1); the witness currency for cycles.
using SignedCycle = std::vector<std::pair<int, int>>;

Rat cycle_pairing(const Cochain1& xi, const SignedCycle& cycle);

struct ConditionA {
    bool holds = false;
    Potential0 witness;        // dg = xi on R_xi interior edges (within eta)
    SignedCycle violating_cycle;  // nonempty iff !holds
    Rat violation_pairing = 0;
};

struct ConditionB {
    bool holds = false;
    std::optional<Rat> bound_b;    // max closed-walk weight through C_xi <= -b
    std::optional<Rat> scaling_s;  // s = 1/b so s*xi realizes "<= -1"
    SignedCycle witness_cycle;     // nonempty iff !holds and a cycle witness exists
    Rat witness_pairing = 0;
};

// (A): xi restricted to R_xi vanishes. Checked on the cycle space of each
// R_xi zero component; the witness potential integrates xi over a spanning
// forest of the components.
ConditionA check_condition_a(const TransitionGraph& g, const Cochain1& xi,
                             const RecurrenceReport& rep, const Rat& eta_zero);

// (B): every closed walk through a C_xi vertex has weight <= -b < 0.
// Equivalent at graph level to: no C_xi-containing SCC has a cycle of mean
// beyond eta_tight on the positive side, and the longest-closed-walk value
// through C_xi vertices is negative. Exact closure for SCCs up to 64
// vertices; a sound reduced-weight bound beyond that.
ConditionB check_condition_b(const TransitionGraph& g, const Cochain1& xi,
                             const RecurrenceReport& rep, const ZeroTol& tol);

// Graph proxy for "C_xi is closed": no SCC mixes R_xi and C_xi vertices.
bool check_c_xi_closed(const RecurrenceReport& rep);

struct DriftCertificate {
    Rat mu;        // empirical: -(max cycle mean over the C_xi subgraph)
    Rat nu;        // empirical: max prefix weight of (w + mu)-walks, >= 0
    long k = 0;    // cover elements = C_xi vertex count
    long T = 0;    // paper's T = floor((1+eta)/c) + 2
    Rat M;         // max |weight| over C_xi-internal edges
    Rat eta;       // jump bound (1/2, the Lemma 5.2 normalization)
    Rat c;         // per-step descent bound (= mu)
    Rat mu_paper;  // 1/(2kT)
    Rat nu_paper;  // (2k-1)M + 1/2
};

Rat paper_mu(long k, long T);
Rat paper_nu(long k, const Rat& M);
long paper_T(const Rat& eta, const Rat& c);

// Requires (B); constants are exact, so the -mu*n + nu bound holds for every
// walk in the C_xi-induced subgraph, not just the sampled ones.
DriftCertificate drift_certificate(const TransitionGraph& g, const Cochain1& xi,
                                   const RecurrenceReport& rep, const ConditionB& b);

// Every prefix of `walks` random walks satisfies cumulative <= -mu*n + nu.
bool validate_drift(const TransitionGraph& g, const Cochain1& xi, const RecurrenceReport& rep,
                    const DriftCertificate& cert, int walks, unsigned seed);

struct FriedReport {
    bool verdict = false;  // all examined homology directions pair < 0
    Rat max_normalized = 0;
    bool any_direction = false;
    // informational: per C_xi SCC, max over that SCC's cycle-space basis of
    // pairing / ||z||_1 (basis cycles need not be directed)
    std::vector<std::pair<int, Rat>> basis_max_per_scc;
};

// Homology directions sampled from directed cycles and long closed walks
// through C_xi (closing-sequence analog), normalized by the cycle-space L1
// norm. Exhaustive over simple cycles for SCCs up to 12 vertices.
FriedReport fried_check(const TransitionGraph& g, const Cochain1& xi,
                        const RecurrenceReport& rep, const ZeroTol& tol,
                        int random_walks = 500, unsigned seed = 20240811);

struct ConditionsReport {
    ConditionA a;
    ConditionB b;
    bool c_xi_closed = false;
    std::optional<DriftCertificate> drift;  // present iff b.holds
    FriedReport fried;
};

ConditionsReport evaluate_conditions(const TransitionGraph& g, const Cochain1& xi,
                                     const RecurrenceReport& rep, const ZeroTol& tol);

}  // namespace flowcert
