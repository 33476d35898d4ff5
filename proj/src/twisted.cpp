#include "flowcert/twisted.hpp"

#include <algorithm>
#include <limits>

/*
 * xi-twisted recurrence on the transition graph.
 *
 * The quantitative core is the exact min/max cycle mean per SCC (Karp's
 * dynamic program, two-pass streaming so memory stays O(V)). Sign classes
 * drive the zero-walk decision:
 *
 *   - genuinely mixed signs: positive and negative cycles combine to reach
 *     total weight zero (semigroup argument), so the whole SCC carries
 *     zero walks;
 *   - one-sided with the boundary mean at zero: zero-mean cycles are
 *     exactly the cycles of tight edges under a Bellman-Ford potential;
 *   - one-sided bounded away from zero: no zero walks.
 *
 * All arithmetic is exact rational. Per-SCC weights are rescaled to int64
 * numerators over a common denominator when they fit (always true for the
 * quantized cochains the box pipeline emits), with __int128 accumulators;
 * otherwise the same algorithms run on mpq.
 */

namespace flowcert {

const char* scc_sign_class_name(SccSignClass c) {
    switch (c) {
        case SccSignClass::AllZero: return "AllZero";
        case SccSignClass::AllNegative: return "AllNegative";
        case SccSignClass::AllPositive: return "AllPositive";
        case SccSignClass::MixedSigns: return "MixedSigns";
        case SccSignClass::NonNegWithZero: return "NonNegWithZero";
        case SccSignClass::NonPosWithZero: return "NonPosWithZero";
    }
    return "?";
}

namespace {

using i128 = __int128;

mpz_class mpz_from_i128(i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
    mpz_class hi{static_cast<unsigned long>(u >> 64)};
    mpz_class lo{static_cast<unsigned long>(u & 0xffffffffffffffffULL)};
    mpz_class out = (hi << 64) + lo;
    return neg ? mpz_class(-out) : out;
}

Rat rat_from_i128_frac(i128 num, long den_small, const mpz_class& den_scale) {
    Rat r(mpz_from_i128(num), mpz_class(den_small) * den_scale);
    r.canonicalize();
    return r;
}

// SCC-induced subgraph with dense local ids.
struct SubView {
    std::vector<int> verts;      // local -> global vertex
    std::vector<int> local_of;   // global -> local or -1
    struct E {
        int u, v;      // local
        int global_id;
    };
    std::vector<E> edges;
    int n() const { return int(verts.size()); }
};

SubView make_sub(const TransitionGraph& g, const std::vector<int>& vs) {
    SubView s;
    s.verts = vs;
    std::sort(s.verts.begin(), s.verts.end());
    s.local_of.assign(size_t(g.vertex_count), -1);
    for (int i = 0; i < int(s.verts.size()); ++i) s.local_of[size_t(s.verts[size_t(i)])] = i;
    for (int e = 0; e < g.edge_count(); ++e) {
        int u = s.local_of[size_t(g.edges[size_t(e)].from)];
        int v = s.local_of[size_t(g.edges[size_t(e)].to)];
        if (u >= 0 && v >= 0) s.edges.push_back({u, v, e});
    }
    return s;
}

// Common-denominator int64 rescaling of sub-edge weights. `headroom` bounds
// the largest intermediate sum: max|num| * headroom must fit below 2^126.
struct ScaledWeights {
    bool ok = false;
    mpz_class den = 1;
    std::vector<long long> num;
};

ScaledWeights try_scale(const SubView& sub, const std::vector<Rat>& w, long headroom) {
    ScaledWeights s;
    mpz_class l = 1;
    for (const auto& e : sub.edges)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), w[size_t(e.global_id)].get_den().get_mpz_t());
    s.den = l;
    s.num.reserve(sub.edges.size());
    for (const auto& e : sub.edges) {
        const Rat& q = w[size_t(e.global_id)];
        mpz_class n = q.get_num() * (l / q.get_den());
        if (!n.fits_slong_p()) return s;
        long v = n.get_si();
        if (std::abs(v) > (std::numeric_limits<long long>::max() / (headroom + 1))) return s;
        s.num.push_back(v);
    }
    s.ok = true;
    return s;
}

// ---- Karp maximum cycle mean -------------------------------------------

// Streaming Karp: pass 1 computes D_n, pass 2 re-runs the DP maintaining
// max over v of min over k of (D_n(v) - D_k(v)) / (n - k).
template <typename Val, typename Minus, typename Better>
std::pair<bool, std::pair<Val, long>> karp_core(const SubView& sub, const std::vector<Val>& wt,
                                                const Val& neg_inf, Minus minus, Better better_frac) {
    int n = sub.n();
    std::vector<Val> cur(size_t(n), neg_inf), nxt;
    cur[0] = Val(0);  // source = local vertex 0; SCC, so all reachable
    nxt.assign(size_t(n), neg_inf);
    for (int k = 1; k <= n; ++k) {
        std::fill(nxt.begin(), nxt.end(), neg_inf);
        for (size_t i = 0; i < sub.edges.size(); ++i) {
            const auto& e = sub.edges[i];
            if (cur[size_t(e.u)] == neg_inf) continue;
            Val cand = cur[size_t(e.u)] + wt[i];
            if (nxt[size_t(e.v)] == neg_inf || cand > nxt[size_t(e.v)]) nxt[size_t(e.v)] = cand;
        }
        std::swap(cur, nxt);
    }
    std::vector<Val> dn = cur;

    // second pass: k = 0 .. n-1
    bool found = false;
    Val best_num = Val(0);
    long best_den = 1;
    std::vector<char> min_done;  // per v: whether v has any finite k yet
    std::vector<Val> min_num(size_t(n), Val(0));
    std::vector<long> min_den(size_t(n), 1);
    min_done.assign(size_t(n), 0);

    std::fill(cur.begin(), cur.end(), neg_inf);
    cur[0] = Val(0);
    for (int k = 0; k <= n - 1; ++k) {
        for (int v = 0; v < n; ++v) {
            if (dn[size_t(v)] == neg_inf || cur[size_t(v)] == neg_inf) continue;
            Val num = minus(dn[size_t(v)], cur[size_t(v)]);
            long den = n - k;
            if (!min_done[size_t(v)] || better_frac(num, den, min_num[size_t(v)], min_den[size_t(v)])) {
                min_num[size_t(v)] = num;
                min_den[size_t(v)] = den;
                min_done[size_t(v)] = 1;
            }
        }
        if (k == n - 1) break;
        std::fill(nxt.begin(), nxt.end(), neg_inf);
        for (size_t i = 0; i < sub.edges.size(); ++i) {
            const auto& e = sub.edges[i];
            if (cur[size_t(e.u)] == neg_inf) continue;
            Val cand = cur[size_t(e.u)] + wt[i];
            if (nxt[size_t(e.v)] == neg_inf || cand > nxt[size_t(e.v)]) nxt[size_t(e.v)] = cand;
        }
        std::swap(cur, nxt);
    }
    for (int v = 0; v < n; ++v) {
        if (dn[size_t(v)] == neg_inf || !min_done[size_t(v)]) continue;
        // maximize min_num[v]/min_den[v]
        if (!found || better_frac(best_num, best_den, min_num[size_t(v)], min_den[size_t(v)])) {
            best_num = min_num[size_t(v)];
            best_den = min_den[size_t(v)];
            found = true;
        }
    }
    return {found, {best_num, best_den}};
}

// Maximum cycle mean via Karp; requires the sub to contain a cycle.
Rat karp_max_mean(const SubView& sub, const std::vector<Rat>& weights, bool negate) {
    int n = sub.n();
    ScaledWeights sc = try_scale(sub, weights, n + 1);
    if (sc.ok) {
        std::vector<i128> wt;
        wt.reserve(sub.edges.size());
        for (long long v : sc.num) wt.push_back(negate ? -i128(v) : i128(v));
        const i128 neg_inf = std::numeric_limits<i128>::min() / 4;
        auto minus = [](i128 a, i128 b) { return a - b; };
        // is a/b < c/d  (b, d > 0)
        auto less_frac = [](i128 a, long b, i128 c, long d) { return a * d < c * b; };
        auto [found, frac] =
            karp_core<i128>(sub, wt, neg_inf, minus, less_frac);
        if (!found) throw NoCycle("cycle_mean_range: no cycle in SCC");
        Rat m = rat_from_i128_frac(frac.first, frac.second, sc.den);
        return negate ? Rat(-m) : m;
    }
    // mpq fallback; neg_inf is a sentinel handled via a parallel flag encoded
    // as an out-of-band value: reuse the template with a boxed optional.
    struct Box {
        Rat v;
        bool inf = true;
        Box() = default;
        explicit Box(int x) : v(x), inf(false) {}
        bool operator==(const Box& o) const { return inf == o.inf && (inf || v == o.v); }
        bool operator>(const Box& o) const { return !inf && (o.inf || v > o.v); }
        Box operator+(const Box& o) const {
            Box r(0);
            r.inf = inf || o.inf;
            if (!r.inf) r.v = v + o.v;
            return r;
        }
    };
    std::vector<Box> wt(sub.edges.size());
    for (size_t i = 0; i < sub.edges.size(); ++i) {
        wt[i] = Box(0);
        wt[i].v = negate ? Rat(-weights[size_t(sub.edges[i].global_id)])
                         : weights[size_t(sub.edges[i].global_id)];
    }
    Box neg_inf;
    auto minus = [](const Box& a, const Box& b) {
        Box r(0);
        r.v = a.v - b.v;
        return r;
    };
    auto less_frac = [](const Box& a, long b, const Box& c, long d) {
        return a.v * d < c.v * b;
    };
    auto [found, frac] = karp_core<Box>(sub, wt, neg_inf, minus, less_frac);
    if (!found) throw NoCycle("cycle_mean_range: no cycle in SCC");
    Rat m = frac.first.v / frac.second;
    return negate ? Rat(-m) : m;
}

// ---- Bellman-Ford longest-walk potentials ------------------------------

// pi(v) = max over walks into v (from an implicit all-zero super source) of
// the shifted weight w(e) - shift. Requires no positive shifted cycle, which
// the caller guarantees exactly; V rounds then suffice.
std::vector<Rat> longest_walk_potentials(const SubView& sub, const std::vector<Rat>& weights,
                                         const Rat& shift, bool negate) {
    int n = sub.n();
    std::vector<Rat> wt(sub.edges.size());
    for (size_t i = 0; i < sub.edges.size(); ++i) {
        Rat w = weights[size_t(sub.edges[i].global_id)];
        if (negate) w = -w;
        wt[i] = w - shift;
    }
    std::vector<Rat> d(size_t(n), Rat(0));
    for (int round = 0; round < n; ++round) {
        bool changed = false;
        for (size_t i = 0; i < sub.edges.size(); ++i) {
            const auto& e = sub.edges[i];
            Rat cand = d[size_t(e.u)] + wt[i];
            if (cand > d[size_t(e.v)]) {
                d[size_t(e.v)] = cand;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return d;
}

// Non-trivial SCC vertices of the tight-edge subgraph; tight edges have
// reduced weight within eta of zero under the shifted potential.
std::vector<int> tight_cycle_vertices(const SubView& sub,
                                      const std::vector<Rat>& weights, const Rat& shift,
                                      bool negate, const Rat& eta_tight,
                                      std::vector<int>* tight_edge_ids) {
    auto pi = longest_walk_potentials(sub, weights, shift, negate);
    TransitionGraph tight;
    tight.vertex_count = sub.n();
    std::vector<int> tight_global;
    for (size_t i = 0; i < sub.edges.size(); ++i) {
        const auto& e = sub.edges[i];
        Rat w = weights[size_t(e.global_id)];
        if (negate) w = -w;
        Rat reduced = w - shift + pi[size_t(e.u)] - pi[size_t(e.v)];
        if (rat_abs(reduced) <= eta_tight) {
            tight.add_edge(e.u, e.v);
            tight_global.push_back(e.global_id);
        }
    }
    tight.finalize();
    auto rep = scc_decompose(tight);
    std::vector<int> out;
    for (int v = 0; v < tight.vertex_count; ++v)
        if (rep.in_r[size_t(v)]) out.push_back(sub.verts[size_t(v)]);
    if (tight_edge_ids) {
        tight_edge_ids->clear();
        for (size_t i = 0; i < tight_global.size(); ++i) {
            int u = tight.edges[i].from, v = tight.edges[i].to;
            if (rep.scc_id[size_t(u)] == rep.scc_id[size_t(v)] && rep.in_r[size_t(u)])
                tight_edge_ids->push_back(tight_global[i]);
        }
    }
    return out;
}

bool sub_has_cycle(const SubView& sub) {
    TransitionGraph t;
    t.vertex_count = sub.n();
    for (const auto& e : sub.edges) t.add_edge(e.u, e.v);
    t.finalize();
    auto rep = scc_decompose(t);
    for (bool b : rep.scc_nontrivial)
        if (b) return true;
    return false;
}

}  // namespace

std::pair<Rat, Rat> cycle_mean_range(const TransitionGraph& g, const Cochain1& xi,
                                     const std::vector<int>& scc_vertices) {
    SubView sub = make_sub(g, scc_vertices);
    if (sub.edges.empty() || !sub_has_cycle(sub)) throw NoCycle("cycle_mean_range: trivial SCC");
    Rat mx = karp_max_mean(sub, xi.w, false);
    Rat mn = karp_max_mean(sub, xi.w, true);
    return {mn, mx};
}

SccSignClass classify_scc(const Rat& min_mean, const Rat& max_mean, const ZeroTol& tol) {
    bool min_zero = rat_abs(min_mean) <= tol.eta_class;
    bool max_zero = rat_abs(max_mean) <= tol.eta_class;
    if (min_zero && max_zero) return SccSignClass::AllZero;
    if (max_zero) return SccSignClass::NonPosWithZero;
    if (min_zero) return SccSignClass::NonNegWithZero;
    if (min_mean > 0) return SccSignClass::AllPositive;
    if (max_mean < 0) return SccSignClass::AllNegative;
    return SccSignClass::MixedSigns;
}

std::vector<int> zero_walk_vertices(const TransitionGraph& g, const Cochain1& xi,
                                    const std::vector<int>& scc_vertices, const ZeroTol& tol) {
    SubView sub = make_sub(g, scc_vertices);
    if (sub.edges.empty() || !sub_has_cycle(sub)) return {};
    Rat mx = karp_max_mean(sub, xi.w, false);
    Rat mn = karp_max_mean(sub, xi.w, true);
    SccSignClass cls = classify_scc(mn, mx, tol);
    std::vector<int> out;
    switch (cls) {
        case SccSignClass::MixedSigns: {
            // positive and negative cycles combine to weight zero
            out = scc_vertices;
            std::sort(out.begin(), out.end());
            return out;
        }
        case SccSignClass::AllNegative:
        case SccSignClass::AllPositive:
            return {};
        default:
            break;
    }
    // Boundary class: exact attainment decided at the tight scale. A boundary
    // mean beyond eta_tight is jump noise at this resolution, not a zero walk.
    if (rat_abs(mx) <= tol.eta_tight)
        return tight_cycle_vertices(sub, xi.w, mx, false, tol.eta_tight, nullptr);
    if (rat_abs(mn) <= tol.eta_tight)
        return tight_cycle_vertices(sub, xi.w, -mn, true, tol.eta_tight, nullptr);
    return {};
}

void compute_r_xi(const TransitionGraph& g, const Cochain1& xi, RecurrenceReport& rep,
                  const ZeroTol& tol, const std::vector<char>* edge_local) {
    rep.has_xi = true;
    rep.edge_local = edge_local ? *edge_local : std::vector<char>{};
    rep.in_r_xi.assign(size_t(g.vertex_count), false);
    rep.in_c_xi.assign(size_t(g.vertex_count), false);
    rep.r_xi_component.assign(size_t(g.vertex_count), -1);
    rep.scc_class.assign(size_t(rep.scc_count()), int(SccSignClass::AllZero));
    rep.scc_min_mean.assign(size_t(rep.scc_count()), Rat(0));
    rep.scc_max_mean.assign(size_t(rep.scc_count()), Rat(0));

    int next_comp = 0;
    for (int s = 0; s < rep.scc_count(); ++s) {
        if (!rep.scc_nontrivial[size_t(s)]) continue;
        const auto& vs = rep.scc_vertices[size_t(s)];
        SubView sub = make_sub(g, vs);
        Rat mx = karp_max_mean(sub, xi.w, false);
        Rat mn = karp_max_mean(sub, xi.w, true);
        SccSignClass cls = classify_scc(mn, mx, tol);
        rep.scc_class[size_t(s)] = int(cls);
        rep.scc_min_mean[size_t(s)] = mn;
        rep.scc_max_mean[size_t(s)] = mx;

        if (cls == SccSignClass::MixedSigns) {
            for (int v : vs) {
                rep.in_r_xi[size_t(v)] = true;
                rep.r_xi_component[size_t(v)] = next_comp;
            }
            ++next_comp;
            continue;
        }
        if (cls == SccSignClass::AllNegative || cls == SccSignClass::AllPositive) {
            for (int v : vs) rep.in_c_xi[size_t(v)] = true;
            continue;
        }
        std::vector<int> tight_edges;
        std::vector<int> zero_vs;
        if (rat_abs(mx) <= tol.eta_tight)
            zero_vs = tight_cycle_vertices(sub, xi.w, mx, false, tol.eta_tight, &tight_edges);
        else if (rat_abs(mn) <= tol.eta_tight)
            zero_vs = tight_cycle_vertices(sub, xi.w, -mn, true, tol.eta_tight, &tight_edges);
        for (int v : zero_vs) rep.in_r_xi[size_t(v)] = true;
        for (int v : vs)
            if (!rep.in_r_xi[size_t(v)]) rep.in_c_xi[size_t(v)] = true;

        // Zero components: connected pieces of the local tight subgraph.
        if (!zero_vs.empty()) {
            TransitionGraph tg;
            tg.vertex_count = g.vertex_count;
            for (int e : tight_edges) {
                if (edge_local && !(*edge_local)[size_t(e)]) continue;
                tg.add_edge(g.edges[size_t(e)].from, g.edges[size_t(e)].to);
            }
            tg.finalize();
            CycleBasis cb(tg);
            std::vector<int> comp_map;  // tight component -> global id
            std::vector<int> seen_comp;
            for (int v : zero_vs) {
                int c = cb.component_of(v);
                auto it = std::find(seen_comp.begin(), seen_comp.end(), c);
                int id;
                if (it == seen_comp.end()) {
                    seen_comp.push_back(c);
                    comp_map.push_back(next_comp++);
                    id = comp_map.back();
                } else {
                    id = comp_map[size_t(it - seen_comp.begin())];
                }
                rep.r_xi_component[size_t(v)] = id;
            }
        }
    }
}

PeriodLattice period_lattice(const TransitionGraph& g, const Cochain1& xi,
                             const std::vector<int>& scc_vertices, const Rat& eta_zero) {
    SubView sub = make_sub(g, scc_vertices);
    if (sub.edges.empty() || !sub_has_cycle(sub)) throw NoCycle("period_lattice: trivial SCC");
    TransitionGraph t;
    t.vertex_count = sub.n();
    std::vector<Rat> wt;
    for (const auto& e : sub.edges) {
        t.add_edge(e.u, e.v);
        wt.push_back(xi.w[size_t(e.global_id)]);
    }
    t.finalize();
    CycleBasis cb(t);
    PeriodLattice lat;
    lat.cycle_pairings = cb.pair_all(wt);
    Rat gcd = 0;
    Rat max_abs = 0;
    for (const Rat& p : lat.cycle_pairings) {
        if (rat_abs(p) <= eta_zero) continue;
        gcd = rat_gcd(gcd, p);
        max_abs = std::max(max_abs, rat_abs(p));
    }
    if (max_abs == 0) {
        lat.generator = 0;  // trivial group
        lat.dense = false;
    } else if (gcd <= eta_zero) {
        lat.generator = 0;
        lat.dense = true;  // incommensurable pairings at this tolerance
    } else {
        lat.generator = gcd;
        lat.dense = false;
    }
    return lat;
}

namespace {

std::vector<bool> lift_projection(const TransitionGraph& g, const Cochain1& xi, long levels,
                                  const Rat& quantum) {
    // vertices (v, s), s in [-levels, levels]; edge (u,s)->(v, s + round(w/q))
    long width = 2 * levels + 1;
    if (double(width) * g.vertex_count > 5e7) throw GraphError("lift_graph: window too large");
    TransitionGraph lift;
    lift.vertex_count = int(width) * g.vertex_count;
    auto id = [&](int v, long s) { return int((s + levels) * g.vertex_count + v); };
    for (int e = 0; e < g.edge_count(); ++e) {
        mpz_class st = rat_round(Rat(xi.w[size_t(e)] / quantum));
        if (!st.fits_slong_p()) throw GraphError("lift_graph: weight/quantum overflow");
        long step = st.get_si();
        for (long s = -levels; s <= levels; ++s) {
            long s2 = s + step;
            if (s2 < -levels || s2 > levels) continue;
            lift.add_edge(id(g.edges[size_t(e)].from, s), id(g.edges[size_t(e)].to, s2));
        }
    }
    lift.finalize();
    auto rep = scc_decompose(lift);
    std::vector<bool> projected(size_t(g.vertex_count), false);
    for (int v = 0; v < g.vertex_count; ++v)
        for (long s = -levels; s <= levels; ++s)
            if (rep.in_r[size_t(id(v, s))]) {
                projected[size_t(v)] = true;
                break;
            }
    return projected;
}

}  // namespace

LiftResult lift_graph(const TransitionGraph& g, const Cochain1& xi, const Rat& window,
                      const Rat& quantum) {
    if (quantum <= 0) throw GraphError("lift_graph: quantum must be positive");
    mpz_class lv = rat_floor(Rat(window / quantum));
    if (!lv.fits_slong_p()) throw GraphError("lift_graph: window overflow");
    long levels = lv.get_si();
    if (levels < 1) levels = 1;
    auto p1 = lift_projection(g, xi, levels, quantum);
    auto p2 = lift_projection(g, xi, 2 * levels, quantum);
    LiftResult res;
    res.projected_recurrent.assign(size_t(g.vertex_count), false);
    res.stable = true;
    for (int v = 0; v < g.vertex_count; ++v) {
        res.projected_recurrent[size_t(v)] = p1[size_t(v)] && p2[size_t(v)];
        if (p1[size_t(v)] != p2[size_t(v)]) res.stable = false;
    }
    return res;
}

}  // namespace flowcert
