#include "flowcert/forms.hpp"

#include <algorithm>
#include <cmath>

namespace flowcert {

namespace {

// Lift p by integer periods so it lands inside [lo, hi] per axis; nullopt if
// no lift fits.
std::optional<Pt> lift_into(const PhaseSpace& sp, const Chart& ch, const Pt& p) {
    Pt q = p;
    for (int d = 0; d < sp.dim; ++d) {
        const auto& ax = sp.axis[size_t(d)];
        if (!ax.periodic) {
            if (p[d] < ch.lo[size_t(d)] || p[d] > ch.hi[size_t(d)]) return std::nullopt;
            continue;
        }
        double per = ax.extent();
        // candidate shift: place near the middle of the chart interval
        double mid = 0.5 * (ch.lo[size_t(d)] + ch.hi[size_t(d)]);
        double k = std::round((mid - p[d]) / per);
        double x = p[d] + k * per;
        if (x < ch.lo[size_t(d)]) x += per;
        if (x > ch.hi[size_t(d)]) x -= per;
        if (x < ch.lo[size_t(d)] || x > ch.hi[size_t(d)]) return std::nullopt;
        q[d] = x;
    }
    return q;
}

// Lift both segment endpoints with one common shift.
std::optional<std::pair<Pt, Pt>> lift_segment(const PhaseSpace& sp, const Chart& ch, const Pt& a,
                                              const Pt& b) {
    auto la = lift_into(sp, ch, a);
    if (!la) return std::nullopt;
    Pt lb = b;
    for (int d = 0; d < sp.dim; ++d) {
        lb[d] = b[d] + ((*la)[d] - a[d]);  // same lift as a
        if (lb[d] < ch.lo[size_t(d)] - 1e-12 || lb[d] > ch.hi[size_t(d)] + 1e-12)
            return std::nullopt;
    }
    return std::make_pair(*la, lb);
}

double segment_integral(const ClosedOneForm& form, const Pt& a, const Pt& b, int depth) {
    for (const auto& ch : form.charts) {
        auto seg = lift_segment(form.space, ch, a, b);
        if (seg) return ch.potential(seg->second) - ch.potential(seg->first);
    }
    if (depth >= 24) throw ChartCoverageError("line_integral: segment not contained in any chart");
    Pt mid;
    for (int d = 0; d < form.space.dim; ++d) mid[d] = 0.5 * (a[d] + b[d]);
    return segment_integral(form, a, mid, depth + 1) + segment_integral(form, mid, b, depth + 1);
}

}  // namespace

ClosedOneForm ClosedOneForm::linear(const PhaseSpace& space, const std::vector<double>& coeffs) {
    ClosedOneForm f;
    f.space = space;
    f.label = "linear";
    // Two overlapping interval charts per periodic axis with nonzero
    // coefficient; a single full interval otherwise.
    std::array<std::vector<std::pair<double, double>>, 3> axis_charts;
    for (int d = 0; d < space.dim; ++d) {
        const auto& ax = space.axis[size_t(d)];
        double c = d < int(coeffs.size()) ? coeffs[size_t(d)] : 0.0;
        if (ax.periodic && c != 0.0) {
            double per = ax.extent();
            axis_charts[size_t(d)] = {
                {ax.lo - per / 8.0, ax.lo + per * 5.0 / 8.0},
                {ax.lo + per * 3.0 / 8.0, ax.lo + per * 9.0 / 8.0},
            };
        } else {
            // exact directions can use one full-width chart (plus margin on
            // periodic axes so any short lifted segment fits)
            double margin = ax.periodic ? ax.extent() * 0.55 : 0.0;
            axis_charts[size_t(d)] = {{ax.lo - margin, ax.hi + margin}};
        }
    }
    std::vector<double> cs(coeffs);
    cs.resize(3, 0.0);
    std::array<int, 3> counts{1, 1, 1};
    for (int d = 0; d < space.dim; ++d) counts[size_t(d)] = int(axis_charts[size_t(d)].size());
    for (int i = 0; i < counts[0]; ++i)
        for (int j = 0; j < counts[1]; ++j)
            for (int k = 0; k < (space.dim > 2 ? counts[2] : 1); ++k) {
                Chart ch;
                std::array<int, 3> pick{i, j, k};
                for (int d = 0; d < space.dim; ++d) {
                    ch.lo[size_t(d)] = axis_charts[size_t(d)][size_t(pick[size_t(d)])].first;
                    ch.hi[size_t(d)] = axis_charts[size_t(d)][size_t(pick[size_t(d)])].second;
                }
                ch.potential = [cs, dim = space.dim](const Pt& p) {
                    double s = 0;
                    for (int d = 0; d < dim; ++d) s += cs[size_t(d)] * p[d];
                    return s;
                };
                f.charts.push_back(std::move(ch));
            }
    return f;
}

ClosedOneForm ClosedOneForm::tabulated(const PhaseSpace& space,
                                       const std::vector<std::array<double, 6>>& regions,
                                       const std::vector<std::vector<double>>& tables,
                                       const std::array<int, 3>& table_res) {
    ClosedOneForm f;
    f.space = space;
    f.label = "tabulated";
    for (size_t i = 0; i < regions.size(); ++i) {
        Chart ch;
        for (int d = 0; d < space.dim; ++d) {
            ch.lo[size_t(d)] = regions[i][size_t(d)];
            ch.hi[size_t(d)] = regions[i][size_t(d) + 3];
        }
        ch.potential = [table = tables[i], res = table_res, lo = ch.lo, hi = ch.hi,
                        dim = space.dim](const Pt& p) {
            // bilinear over the chart box
            std::array<double, 3> t{0, 0, 0};
            std::array<int, 3> i0{0, 0, 0};
            for (int d = 0; d < dim; ++d) {
                double u = (p[d] - lo[size_t(d)]) / (hi[size_t(d)] - lo[size_t(d)]);
                u = std::clamp(u, 0.0, 1.0) * (res[size_t(d)] - 1);
                int i = std::min(int(u), res[size_t(d)] - 2);
                i0[size_t(d)] = std::max(i, 0);
                t[size_t(d)] = u - i0[size_t(d)];
            }
            double acc = 0;
            for (int mask = 0; mask < (1 << dim); ++mask) {
                double w = 1;
                int flat = 0;
                for (int d = 0; d < dim; ++d) {
                    int bit = (mask >> d) & 1;
                    w *= bit ? t[size_t(d)] : 1 - t[size_t(d)];
                    flat = flat * res[size_t(d)] + std::min(i0[size_t(d)] + bit, res[size_t(d)] - 1);
                }
                acc += w * table[size_t(flat)];
            }
            return acc;
        };
        f.charts.push_back(std::move(ch));
    }
    return f;
}

bool ClosedOneForm::overlaps_consistent(int samples_per_axis, double tol) const {
    for (size_t i = 0; i < charts.size(); ++i)
        for (size_t j = i + 1; j < charts.size(); ++j) {
            // sample the overlap in chart-i lifted coordinates
            std::optional<double> diff;
            for (int si = 0; si < samples_per_axis; ++si)
                for (int sj = 0; sj < samples_per_axis; ++sj) {
                    Pt p;
                    p[0] = charts[i].lo[0] +
                           (charts[i].hi[0] - charts[i].lo[0]) * (si + 0.5) / samples_per_axis;
                    p[1] = charts[i].lo[1] +
                           (charts[i].hi[1] - charts[i].lo[1]) * (sj + 0.5) / samples_per_axis;
                    auto q = lift_into(space, charts[j], space.wrap(p));
                    if (!q) continue;
                    double d = charts[i].potential(p) - charts[j].potential(*q);
                    if (!diff) diff = d;
                    // differences may jump between overlap components; only
                    // demand local constancy: nearby samples agree
                    Pt p2 = p;
                    p2[0] += (charts[i].hi[0] - charts[i].lo[0]) * 0.01;
                    auto q2 = lift_into(space, charts[j], space.wrap(p2));
                    if (q2 && lift_into(space, charts[i], space.wrap(p2))) {
                        double d2 = charts[i].potential(p2) - charts[j].potential(*q2);
                        if (std::abs(d2 - d) > tol) return false;
                    }
                }
        }
    return true;
}

double line_integral(const ClosedOneForm& form, const Polyline& path) {
    if (path.size() < 2) return 0.0;
    double total = 0;
    for (size_t i = 0; i + 1 < path.size(); ++i)
        total += segment_integral(form, path[i], path[i + 1], 0);
    return total;
}

Cochain1 pull_back(const ClosedOneForm& form, const TransitionGraph& g) {
    Cochain1 c;
    c.w.reserve(static_cast<size_t>(g.edge_count()));
    for (const auto& e : g.edges) {
        if (e.path.size() < 2) throw ChartCoverageError("pull_back: edge carries no trajectory");
        c.w.push_back(rat_quantize(line_integral(form, e.path)));
    }
    return c;
}

Rat pairing(const CycleBasis& basis, const Cochain1& xi, const CycleVector& z) {
    if (int(z.coeff.size()) != basis.basis_size())
        throw GraphMismatch("pairing: cycle vector over a different basis");
    auto per_basis = basis.pair_all(xi.w);
    Rat s = 0;
    for (size_t i = 0; i < z.coeff.size(); ++i)
        if (z.coeff[i] != 0) s += Rat(z.coeff[i]) * per_basis[i];
    return s;
}

Cochain1 coboundary(const TransitionGraph& g, const Potential0& p) {
    Cochain1 c;
    c.w.reserve(static_cast<size_t>(g.edge_count()));
    for (const auto& e : g.edges) c.w.push_back(p.v[size_t(e.to)] - p.v[size_t(e.from)]);
    return c;
}

Cochain1 extend_form(const TransitionGraph& g, const std::vector<int>& sub_vertices,
                     const Cochain1& omega_sub, const Cochain1& xi, const Rat& eta_zero) {
    std::vector<char> in_sub(size_t(g.vertex_count), 0);
    for (int v : sub_vertices) in_sub[size_t(v)] = 1;
    // difference xi - omega_sub on the sub-induced subgraph must be exact
    std::vector<int> sub_edges;
    for (int e = 0; e < g.edge_count(); ++e)
        if (in_sub[size_t(g.edges[size_t(e)].from)] && in_sub[size_t(g.edges[size_t(e)].to)])
            sub_edges.push_back(e);

    // forest integration of the difference
    Potential0 h = Potential0::zeros(g);
    std::vector<std::vector<std::pair<int, int>>> und(static_cast<size_t>(g.vertex_count));
    for (int e : sub_edges) {
        und[size_t(g.edges[size_t(e)].from)].push_back({e, g.edges[size_t(e)].to});
        und[size_t(g.edges[size_t(e)].to)].push_back({e, g.edges[size_t(e)].from});
    }
    std::vector<char> seen(size_t(g.vertex_count), 0);
    for (int root : sub_vertices) {
        if (seen[size_t(root)]) continue;
        seen[size_t(root)] = 1;
        std::vector<int> queue{root};
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (auto [e, other] : und[size_t(v)]) {
                if (seen[size_t(other)]) continue;
                seen[size_t(other)] = 1;
                Rat diff = xi.w[size_t(e)] - omega_sub.w[size_t(e)];
                h.v[size_t(other)] = g.edges[size_t(e)].to == other ? Rat(h.v[size_t(v)] + diff)
                                                                    : Rat(h.v[size_t(v)] - diff);
                queue.push_back(other);
            }
        }
    }
    for (int e : sub_edges) {
        const auto& ed = g.edges[size_t(e)];
        Rat diff = xi.w[size_t(e)] - omega_sub.w[size_t(e)];
        Rat residual = diff - (h.v[size_t(ed.to)] - h.v[size_t(ed.from)]);
        if (rat_abs(residual) > eta_zero)
            throw NotCohomologous("extend_form: xi and omega_sub disagree on a sub cycle");
    }
    Cochain1 out = xi;
    Cochain1 dh = coboundary(g, h);  // h is zero off sub
    for (int e = 0; e < g.edge_count(); ++e) out.w[size_t(e)] -= dh.w[size_t(e)];
    return out;
}

Scale compute_scale(const ClosedOneForm& form, const BoxGrid& grid) {
    const PhaseSpace& sp = form.space;
    double diameter = sp.diameter();
    double min_max_r = diameter;  // capped inscribed radius
    for (int b = 0; b < grid.box_count(); ++b) {
        Pt p = grid.center(b);
        double best = 0;
        for (const auto& ch : form.charts) {
            auto q = lift_into(sp, ch, p);
            if (!q) continue;
            double r = diameter;
            for (int d = 0; d < sp.dim; ++d) {
                r = std::min(r, (*q)[d] - ch.lo[size_t(d)]);
                r = std::min(r, ch.hi[size_t(d)] - (*q)[d]);
            }
            best = std::max(best, r);
        }
        if (best <= 0) throw ChartCoverageError("compute_scale: a grid sample is uncovered");
        min_max_r = std::min(min_max_r, best);
    }
    Scale s;
    s.eps = std::min(min_max_r, diameter / 2.0);
    s.delta = s.eps;  // convex cells: the path-connection radius equals eps
    return s;
}

CycleVector associated_cycle(const TransitionGraph& g, const CycleBasis& basis,
                             const std::vector<int>& walk_edges) {
    CycleVector z;
    z.coeff.assign(size_t(basis.basis_size()), 0);
    if (walk_edges.empty()) return z;
    for (size_t i = 0; i < walk_edges.size(); ++i) {
        const auto& e = g.edges[size_t(walk_edges[i])];
        const auto& next = g.edges[size_t(walk_edges[(i + 1) % walk_edges.size()])];
        if (e.to != next.from) throw NotClosed("associated_cycle: walk is not closed in the graph");
    }
    std::vector<int> nt_index(size_t(g.edge_count()), -1);
    for (int i = 0; i < basis.basis_size(); ++i)
        nt_index[size_t(basis.non_tree_edges()[size_t(i)])] = i;
    for (int e : walk_edges)
        if (nt_index[size_t(e)] >= 0) z.coeff[size_t(nt_index[size_t(e)])] += 1;
    return z;
}

}  // namespace flowcert
