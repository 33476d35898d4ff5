#include "flowcert/synthesis.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace flowcert {

std::vector<std::string> decompose_word(const std::string& word, int alphabet_size) {
    if (word.empty()) throw EmptyInput("decompose_word: empty word");
    {
        std::string distinct;
        for (char c : word)
            if (distinct.find(c) == std::string::npos) distinct.push_back(c);
        if (int(distinct.size()) > alphabet_size)
            throw EmptyInput("decompose_word: more distinct letters than alphabet size");
    }
    std::vector<std::string> blocks;
    std::string rest = word;
    while (!rest.empty()) {
        char a = rest.front();
        size_t last = rest.find_last_of(a);
        blocks.push_back(rest.substr(0, last + 1));
        rest = rest.substr(last + 1);  // contains no `a`
    }
    return blocks;
}

namespace {

Cochain1 coboundary_of(const TransitionGraph& g, const Potential0& p) {
    Cochain1 c;
    c.w.reserve(static_cast<size_t>(g.edge_count()));
    for (const auto& e : g.edges) c.w.push_back(p.v[size_t(e.to)] - p.v[size_t(e.from)]);
    return c;
}

// Potential over a set of edges via forest integration; nullopt when some
// cycle of those edges pairs beyond eta.
std::optional<Potential0> solve_potential(const TransitionGraph& g, const Cochain1& w,
                                          const std::vector<int>& edge_ids, const Rat& eta) {
    Potential0 p = Potential0::zeros(g);
    std::vector<std::vector<std::pair<int, int>>> und(static_cast<size_t>(g.vertex_count));  // (edge id, other)
    for (int e : edge_ids) {
        und[size_t(g.edges[size_t(e)].from)].push_back({e, g.edges[size_t(e)].to});
        und[size_t(g.edges[size_t(e)].to)].push_back({e, g.edges[size_t(e)].from});
    }
    std::vector<char> seen(size_t(g.vertex_count), 0);
    for (int root = 0; root < g.vertex_count; ++root) {
        if (seen[size_t(root)] || und[size_t(root)].empty()) continue;
        seen[size_t(root)] = 1;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (auto [e, other] : und[size_t(v)]) {
                const auto& ed = g.edges[size_t(e)];
                if (!seen[size_t(other)]) {
                    seen[size_t(other)] = 1;
                    p.v[size_t(other)] = ed.to == other ? Rat(p.v[size_t(v)] + w.w[size_t(e)])
                                                        : Rat(p.v[size_t(v)] - w.w[size_t(e)]);
                    q.push(other);
                }
            }
        }
    }
    for (int e : edge_ids) {
        const auto& ed = g.edges[size_t(e)];
        Rat residual = w.w[size_t(e)] - (p.v[size_t(ed.to)] - p.v[size_t(ed.from)]);
        if (rat_abs(residual) > eta) return std::nullopt;
    }
    return p;
}

}  // namespace

Potential0 sup_potential(const TransitionGraph& g, const Cochain1& xi,
                         const RecurrenceReport& rep) {
    Potential0 f = Potential0::zeros(g);
    std::vector<int> internal;  // C_xi-induced edges
    for (int e = 0; e < g.edge_count(); ++e) {
        if (rep.in_c_xi[size_t(g.edges[size_t(e)].from)] && rep.in_c_xi[size_t(g.edges[size_t(e)].to)])
            internal.push_back(e);
    }
    int rounds = g.vertex_count + 1;
    bool changed = true;
    for (int r = 0; r < rounds && changed; ++r) {
        changed = false;
        for (int e : internal) {
            const auto& ed = g.edges[size_t(e)];
            Rat cand = xi.w[size_t(e)] + f.v[size_t(ed.to)];
            if (cand > f.v[size_t(ed.from)]) {
                f.v[size_t(ed.from)] = cand;
                changed = true;
            }
        }
    }
    if (changed) throw NotApplicable("sup_potential: nonnegative cycle inside C_xi subgraph");
    return f;
}

Cochain1 zero_on_r_xi(const TransitionGraph& g, const Cochain1& omega, const RecurrenceReport& rep,
                      const Rat& eta_zero) {
    std::vector<int> interior;
    for (int e = 0; e < g.edge_count(); ++e)
        if (rep.edge_in_r_xi_interior(g, e)) interior.push_back(e);
    auto p = solve_potential(g, omega, interior, eta_zero);
    if (!p) throw NotApplicable("zero_on_r_xi: condition (A) does not hold");
    Cochain1 out = omega;
    Cochain1 d = coboundary_of(g, *p);
    for (int e = 0; e < g.edge_count(); ++e) out.w[size_t(e)] -= d.w[size_t(e)];
    return out;
}

DescentResult descent_potential(const TransitionGraph& g, const Cochain1& omega,
                                const RecurrenceReport& rep, const Rat& eta_tight) {
    // Quotient: R_xi zero components collapse to one node each.
    int n = g.vertex_count;
    std::vector<int> qid(size_t(n), -1);
    int next = 0;
    std::map<int, int> comp_node;
    for (int v = 0; v < n; ++v) {
        int c = rep.r_xi_component[size_t(v)];
        if (c >= 0) {
            auto it = comp_node.find(c);
            if (it == comp_node.end()) it = comp_node.emplace(c, next++).first;
            qid[size_t(v)] = it->second;
        } else {
            qid[size_t(v)] = next++;
        }
    }
    TransitionGraph q;
    q.vertex_count = next;
    std::vector<int> qedge_ids;
    Cochain1 qw;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges[size_t(e)];
        if (rep.scc_id[size_t(ed.from)] != rep.scc_id[size_t(ed.to)]) continue;  // handled by L1
        if (rep.edge_in_r_xi_interior(g, e)) continue;
        q.add_edge(qid[size_t(ed.from)], qid[size_t(ed.to)]);
        qw.w.push_back(omega.w[size_t(e)]);
        qedge_ids.push_back(e);
    }
    q.finalize();

    Rat epsilon = 1;
    auto qrep = scc_decompose(q);
    bool any_cycle = false;
    for (const auto& comp : qrep.transitive_components) {
        auto [mn, mx] = cycle_mean_range(q, qw, comp);
        (void)mn;
        any_cycle = true;
        if (-mx < epsilon) epsilon = -mx;
    }
    if (any_cycle && epsilon <= eta_tight)
        throw SynthesisContractViolated(
            "descent_potential: nonnegative cycle escapes the R_xi interior");

    // Longest-walk potentials for shifted weights w + epsilon (cycles <= 0).
    std::vector<Rat> d(size_t(q.vertex_count), Rat(0));
    bool changed = true;
    for (int r = 0; r < q.vertex_count + 1 && changed; ++r) {
        changed = false;
        for (int i = 0; i < q.edge_count(); ++i) {
            const auto& ed = q.edges[size_t(i)];
            Rat cand = d[size_t(ed.from)] + qw.w[size_t(i)] + epsilon;
            if (cand > d[size_t(ed.to)]) {
                d[size_t(ed.to)] = cand;
                changed = true;
            }
        }
    }
    if (changed) throw SynthesisContractViolated("descent_potential: relaxation did not settle");

    // w + h(u) - h(v) <= -epsilon; realized as omega + coboundary(-h).
    Potential0 minus_h = Potential0::zeros(g);
    for (int v = 0; v < n; ++v) minus_h.v[size_t(v)] = -d[size_t(qid[size_t(v)])];
    Cochain1 out = omega;
    Cochain1 db = coboundary_of(g, minus_h);
    for (int e = 0; e < g.edge_count(); ++e) out.w[size_t(e)] += db.w[size_t(e)];
    return DescentResult{std::move(out), epsilon};
}

Potential0 conley_potential(const TransitionGraph& g, const RecurrenceReport& rep) {
    // Tarjan ids are reverse-topological: condensation edges go to smaller ids.
    int k = rep.scc_count();
    std::vector<long> level(size_t(k), 0);
    long max_level = 0;
    for (int s = 0; s < k; ++s) {
        for (int t : rep.condensation_out[size_t(s)])
            level[size_t(s)] = std::max(level[size_t(s)], level[size_t(t)] + 1);
        max_level = std::max(max_level, level[size_t(s)]);
    }
    Potential0 L1 = Potential0::zeros(g);
    if (max_level == 0) return L1;
    for (int v = 0; v < g.vertex_count; ++v)
        L1.v[size_t(v)] = Rat(level[size_t(rep.scc_id[size_t(v)])], max_level);
    return L1;
}

LyapunovCertificate combine(const TransitionGraph& g, const Cochain1& xi, const Cochain1& omega2,
                            const Potential0& f, const Potential0& L1,
                            const RecurrenceReport& rep, const ZeroTol& tol) {
    LyapunovCertificate cert;
    cert.xi = xi;
    cert.f = f;
    cert.L1 = L1;
    cert.in_r_xi = rep.in_r_xi;
    cert.r_xi_component = rep.r_xi_component;
    cert.zero_tol = tol.eta_tight;
    cert.edge_interior.assign(size_t(g.edge_count()), 0);
    for (int e = 0; e < g.edge_count(); ++e)
        cert.edge_interior[size_t(e)] = rep.edge_in_r_xi_interior(g, e) ? 1 : 0;

    // contract: omega2 vanishes on interiors and is <= 0 on C_xi-internal edges
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges[size_t(e)];
        if (cert.edge_interior[size_t(e)]) {
            if (rat_abs(omega2.w[size_t(e)]) > tol.eta_tight)
                throw SynthesisContractViolated("combine: omega2 not zero on an R_xi interior edge");
        } else if (rep.in_c_xi[size_t(ed.from)] && rep.in_c_xi[size_t(ed.to)] &&
                   rep.scc_id[size_t(ed.from)] == rep.scc_id[size_t(ed.to)]) {
            if (omega2.w[size_t(e)] > tol.eta_tight)
                throw SynthesisContractViolated("combine: positive omega2 on a C_xi internal edge");
        }
    }

    cert.lambda = 1;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges[size_t(e)];
        Rat drop = L1.v[size_t(ed.to)] - L1.v[size_t(ed.from)];
        if (drop < 0 && omega2.w[size_t(e)] > 0) {
            Rat cand = 1 + omega2.w[size_t(e)] / Rat(-drop);
            if (cand > cert.lambda) cert.lambda = cand;
        }
    }

    cert.omega3 = omega2;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges[size_t(e)];
        cert.omega3.w[size_t(e)] += cert.lambda * (L1.v[size_t(ed.to)] - L1.v[size_t(ed.from)]);
    }

    cert.l1_ok = true;
    cert.l2_ok = true;
    bool first_margin = true;
    for (int e = 0; e < g.edge_count(); ++e) {
        const Rat& w3 = cert.omega3.w[size_t(e)];
        if (cert.edge_interior[size_t(e)]) {
            if (rat_abs(w3) > tol.eta_tight) cert.l2_ok = false;
        } else {
            if (w3 > -tol.eta_tight) cert.l1_ok = false;
            Rat margin = -w3;
            if (first_margin || margin < cert.epsilon0) {
                cert.epsilon0 = margin;
                first_margin = false;
            }
        }
    }
    if (first_margin) cert.epsilon0 = 0;  // no (L1) edges at all

    CycleBasis basis(g);
    auto p3 = basis.pair_all(cert.omega3.w);
    auto pxi = basis.pair_all(xi.w);
    cert.class_ok = p3 == pxi;  // exact rational equality
    return cert;
}

PipelineResult pipeline(const TransitionGraph& g, const Cochain1& xi, const RecurrenceReport& rep,
                        const ZeroTol& tol) {
    ConditionA a = check_condition_a(g, xi, rep, tol.eta_tight);
    if (!a.holds) return Refusal{"A", a.violating_cycle, a.violation_pairing};
    ConditionB b = check_condition_b(g, xi, rep, tol);
    if (!b.holds) return Refusal{"B", b.witness_cycle, b.witness_pairing};

    Potential0 f = sup_potential(g, xi, rep);
    Cochain1 omega1 = xi;
    {
        Cochain1 df = coboundary_of(g, f);
        for (int e = 0; e < g.edge_count(); ++e) omega1.w[size_t(e)] += df.w[size_t(e)];
    }
    Cochain1 omega2 = zero_on_r_xi(g, omega1, rep, tol.eta_tight);
    DescentResult strict = descent_potential(g, omega2, rep, tol.eta_tight);
    Potential0 L1 = conley_potential(g, rep);
    return combine(g, xi, strict.omega, f, L1, rep, tol);
}

PipelineResult pipeline(const TransitionGraph& g, const Cochain1& xi, const ZeroTol& tol) {
    RecurrenceReport rep = scc_decompose(g);
    compute_r_xi(g, xi, rep, tol);
    return pipeline(g, xi, rep, tol);
}

}  // namespace flowcert
