#include "flowcert/section.hpp"

#include <queue>

namespace flowcert {

bool is_integral(const TransitionGraph& g, const Cochain1& xi, const Rat& eta_zero) {
    CycleBasis basis(g);
    for (const Rat& p : basis.pair_all(xi.w)) {
        Rat frac = p - Rat(rat_round(p));
        if (rat_abs(frac) > eta_zero) return false;
    }
    return true;
}

CircleMap build_circle_map(const TransitionGraph& g, const LyapunovCertificate& cert,
                           const Rat& eta_zero) {
    for (bool b : cert.in_r_xi)
        if (b) throw NotASection("build_circle_map: R_xi is nonempty");
    if (!cert.l1_ok || !cert.class_ok)
        throw NotASection("build_circle_map: certificate not valid");
    if (!is_integral(g, cert.omega3, eta_zero))
        throw NotIntegral("build_circle_map: class is not integral");

    CircleMap m;
    m.lift.assign(size_t(g.vertex_count), Rat(0));
    m.angle.assign(size_t(g.vertex_count), Rat(0));

    // Forward-first tree search per weakly-connected component: lifts
    // integrate along trajectories wherever a forward route from the base
    // exists; backward tree edges only pick up the rest of the component.
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(g.vertex_count));
    for (int e = 0; e < g.edge_count(); ++e)
        adj[size_t(g.edges[size_t(e)].from)].push_back({e, g.edges[size_t(e)].to});
    for (int e = 0; e < g.edge_count(); ++e)
        adj[size_t(g.edges[size_t(e)].to)].push_back({e, g.edges[size_t(e)].from});
    std::vector<char> seen(size_t(g.vertex_count), 0);
    for (int root = 0; root < g.vertex_count; ++root) {
        if (seen[size_t(root)]) continue;
        seen[size_t(root)] = 1;
        m.base.push_back(root);
        std::vector<std::pair<int, size_t>> frames{{root, 0}};
        while (!frames.empty()) {
            auto& [v, idx] = frames.back();
            if (idx >= adj[size_t(v)].size()) {
                frames.pop_back();
                continue;
            }
            auto [e, other] = adj[size_t(v)][idx++];
            if (seen[size_t(other)]) continue;
            seen[size_t(other)] = 1;
            const auto& ed = g.edges[size_t(e)];
            m.lift[size_t(other)] = ed.to == other
                                        ? Rat(m.lift[size_t(v)] + cert.omega3.w[size_t(e)])
                                        : Rat(m.lift[size_t(v)] - cert.omega3.w[size_t(e)]);
            int next = other;
            frames.push_back({next, 0});
        }
    }
    for (int v = 0; v < g.vertex_count; ++v) {
        Rat fl = Rat(rat_floor(m.lift[size_t(v)]));
        m.angle[size_t(v)] = m.lift[size_t(v)] - fl;
    }
    return m;
}

long edge_crossing_count(const Rat& lift_from, const Rat& w3, const Rat& theta) {
    // levels theta + k in [lift_from + w3, lift_from); count of integers in
    // [lo - theta, hi - theta) = ceil(hi - theta) - ceil(lo - theta)
    Rat hi = lift_from, lo = lift_from + w3;
    mpz_class c = rat_ceil(Rat(hi - theta)) - rat_ceil(Rat(lo - theta));
    return c.get_si();
}

CrossSection extract_cross_section(const TransitionGraph& g, const LyapunovCertificate& cert,
                                   const CircleMap& map, const Rat& theta) {
    CrossSection K;
    Rat t = theta - Rat(rat_floor(theta));  // canonical representative in [0,1)
    K.theta = t;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges[size_t(e)];
        const Rat& from_lift = map.lift[size_t(ed.from)];
        const Rat& w3 = cert.omega3.w[size_t(e)];
        long c = edge_crossing_count(from_lift, w3, t);
        if (c > 0) {
            K.edges.push_back(e);
            // first crossed level, descending from from_lift
            mpz_class k = rat_ceil(Rat(from_lift - t)) - 1;
            K.crossing_at.push_back(t + Rat(k));
        }
    }
    return K;
}

long cycle_crossing_count(const TransitionGraph& g, const LyapunovCertificate& cert,
                          const CircleMap& map, const SignedCycle& cycle, const Rat& theta) {
    // Traverse the cycle in the universal cover, counting signed level hits.
    long total = 0;
    if (cycle.empty()) return 0;
    Rat lift = map.lift[size_t(cycle.front().second > 0 ? g.edges[size_t(cycle.front().first)].from
                                                        : g.edges[size_t(cycle.front().first)].to)];
    for (auto [e, sgn] : cycle) {
        const Rat& w3 = cert.omega3.w[size_t(e)];
        if (sgn > 0) {
            total += edge_crossing_count(lift, w3, theta);
            lift += w3;
        } else {
            lift -= w3;
            total -= edge_crossing_count(lift, w3, theta);
        }
    }
    return total;
}

}  // namespace flowcert
