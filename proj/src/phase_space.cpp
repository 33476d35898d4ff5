#include "flowcert/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace flowcert {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_into(double x, double lo, double extent) {
    double t = std::fmod(x - lo, extent);
    if (t < 0) t += extent;
    return lo + t;
}

// Smooth bump: 1 at d = 0, 0 for d >= r0, strictly inside (0,1) between.
double bump(double d, double r0) {
    if (d >= r0) return 0.0;
    double s = d / r0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace

PhaseSpace PhaseSpace::torus2() {
    PhaseSpace s;
    s.kind = SpaceKind::Torus2;
    s.dim = 2;
    s.axis[0] = {0.0, 1.0, true};
    s.axis[1] = {0.0, 1.0, true};
    return s;
}

PhaseSpace PhaseSpace::annulus(double r0, double r1) {
    if (!(r0 < r1)) throw InvalidField("annulus: requires r_min < r_max");
    PhaseSpace s;
    s.kind = SpaceKind::Annulus;
    s.dim = 2;
    s.axis[0] = {r0, r1, false};
    s.axis[1] = {0.0, 1.0, true};
    return s;
}

PhaseSpace PhaseSpace::product_circle() {
    PhaseSpace s;
    s.kind = SpaceKind::ProductWithCircle;
    s.dim = 2;
    s.axis[0] = {0.0, 1.0, true};
    s.axis[1] = {0.0, 1.0, true};
    return s;
}

PhaseSpace PhaseSpace::ring_torus() {
    PhaseSpace s;
    s.kind = SpaceKind::Torus2;
    s.dim = 2;
    s.axis[0] = {1.0, 5.0, true};  // r, circles r=1 and r=5 identified
    s.axis[1] = {0.0, 1.0, true};  // phi / 2pi
    return s;
}

Pt PhaseSpace::wrap(Pt p) const {
    for (int d = 0; d < dim; ++d)
        if (axis[size_t(d)].periodic)
            p[d] = wrap_into(p[d], axis[size_t(d)].lo, axis[size_t(d)].extent());
    return p;
}

bool PhaseSpace::contains(const Pt& p) const {
    for (int d = 0; d < dim; ++d) {
        if (axis[size_t(d)].periodic) continue;
        if (p[d] < axis[size_t(d)].lo - 1e-12 || p[d] > axis[size_t(d)].hi + 1e-12) return false;
    }
    return true;
}

double PhaseSpace::axis_dist(int d, double a, double b) const {
    double diff = std::abs(a - b);
    if (!axis[size_t(d)].periodic) return diff;
    double per = axis[size_t(d)].extent();
    diff = std::fmod(diff, per);
    return std::min(diff, per - diff);
}

double PhaseSpace::dist(const Pt& a, const Pt& b) const {
    double s = 0;
    for (int d = 0; d < dim; ++d) {
        double dd = axis_dist(d, a[d], b[d]);
        s += dd * dd;
    }
    return std::sqrt(s);
}

double PhaseSpace::diameter() const {
    double s = 0;
    for (int d = 0; d < dim; ++d) {
        double e = axis[size_t(d)].extent();
        if (axis[size_t(d)].periodic) e /= 2;
        s += e * e;
    }
    return std::sqrt(s);
}

bool is_nearly_rational(double x, long qmax, double tol) {
    x = std::abs(x);
    long p0 = 1, q0 = 0;  // convergents
    long p1 = long(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x);
    for (int i = 0; i < 64; ++i) {
        if (std::abs(x - double(p1) / double(q1)) <= tol) return q1 <= qmax;
        if (q1 > qmax) return false;
        if (frac < 1e-15) return q1 <= qmax;
        double inv = 1.0 / frac;
        long a = long(std::floor(inv));
        frac = inv - std::floor(inv);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return false;
}

Pt VectorFieldSpec::eval(const Pt& p0) const {
    Pt p = space.wrap(p0);
    Pt v;
    switch (kind) {
        case FieldKind::Example2Torus: {
            double a = params.at(0), b = params.at(1);
            double px = params.at(2), py = params.at(3), r0 = params.at(4);
            double d = space.dist(p, Pt{{px, py, 0}});
            double f = 1.0 - bump(d, r0);
            v[0] = f * a;
            v[1] = f * b;
            break;
        }
        case FieldKind::Example3Irrational: {
            v[0] = params.at(0);
            v[1] = params.at(1);
            break;
        }
        case FieldKind::Example1Product: {
            // coords (m, s); rest points of the base field at m = 1/4, 3/4
            double cm = params.at(0), cs = params.at(1), r0 = params.at(2);
            double m = p[0], s = p[1];
            double f1 = bump(space.axis_dist(0, m, 0.25), r0);
            double f2 = bump(space.axis_dist(0, m, 0.75), r0);
            v[0] = cm * std::cos(kTwoPi * m);
            v[1] = cs * (f1 * std::cos(kTwoPi * s) + f2 * 1.0);
            break;
        }
        case FieldKind::PlanarRingTorus: {
            double r = p[0];
            double dr = (r - 1) * (r - 1) * (r - 3) * (r - 3) * (r - 5) * (r - 5);
            v[0] = dr;
            v[1] = std::sin(r * M_PI / 2.0) / kTwoPi;  // unit-period angle
            break;
        }
        case FieldKind::TabulatedGrid: {
            // multilinear interpolation, periodic-aware
            for (int c = 0; c < space.dim; ++c) {
                double acc = 0;
                // gather 2^dim corner samples
                std::array<double, 3> t{0, 0, 0};
                std::array<int, 3> i0{0, 0, 0};
                for (int d = 0; d < space.dim; ++d) {
                    const auto& ax = space.axis[size_t(d)];
                    double u = (p[d] - ax.lo) / ax.extent() * table_res[size_t(d)];
                    int i = int(std::floor(u));
                    t[size_t(d)] = u - i;
                    i0[size_t(d)] = i;
                }
                int corners = 1 << space.dim;
                for (int mask = 0; mask < corners; ++mask) {
                    double wgt = 1;
                    std::array<int, 3> idx{0, 0, 0};
                    for (int d = 0; d < space.dim; ++d) {
                        int bit = (mask >> d) & 1;
                        wgt *= bit ? t[size_t(d)] : 1 - t[size_t(d)];
                        int i = i0[size_t(d)] + bit;
                        int n = table_res[size_t(d)];
                        if (space.axis[size_t(d)].periodic)
                            i = ((i % n) + n) % n;
                        else
                            i = std::clamp(i, 0, n - 1);
                        idx[size_t(d)] = i;
                    }
                    int flat = idx[0];
                    for (int d = 1; d < space.dim; ++d) flat = flat * table_res[size_t(d)] + idx[size_t(d)];
                    acc += wgt * table[size_t(flat * space.dim + c)];
                }
                v[c] = acc;
            }
            break;
        }
    }
    return v;
}

void VectorFieldSpec::validate() const {
    switch (kind) {
        case FieldKind::Example3Irrational: {
            double a = params.at(0), b = params.at(1);
            if (b == 0) throw InvalidField("Example3 requires b != 0");
            if (is_nearly_rational(a / b, 64, 1e-9))
                throw InvalidField("Example3 requires a/b irrational");
            break;
        }
        case FieldKind::Example2Torus: {
            double a = params.at(0), b = params.at(1);
            if (b == 0) throw InvalidField("Example2 requires b != 0");
            if (!is_nearly_rational(a / b, 64, 1e-9))
                throw InvalidField("Example2 requires a/b rational");
            if (params.at(4) <= 0) throw InvalidField("Example2 requires bump radius > 0");
            break;
        }
        default:
            break;
    }
}

int BoxGrid::box_count() const {
    int n = 1;
    for (int d = 0; d < space.dim; ++d) n *= res[size_t(d)];
    return n;
}

int BoxGrid::index_of(const std::array<int, 3>& cell) const {
    int idx = 0;
    for (int d = 0; d < space.dim; ++d) idx = idx * res[size_t(d)] + cell[size_t(d)];
    return idx;
}

std::array<int, 3> BoxGrid::cell_of(int index) const {
    std::array<int, 3> cell{0, 0, 0};
    for (int d = space.dim - 1; d >= 0; --d) {
        cell[size_t(d)] = index % res[size_t(d)];
        index /= res[size_t(d)];
    }
    return cell;
}

double BoxGrid::cell_width(int d) const { return space.axis[size_t(d)].extent() / res[size_t(d)]; }

Pt BoxGrid::center(int index) const {
    auto cell = cell_of(index);
    Pt p;
    for (int d = 0; d < space.dim; ++d)
        p[d] = space.axis[size_t(d)].lo + (cell[size_t(d)] + 0.5) * cell_width(d);
    return p;
}

Pt BoxGrid::corner(int index, int which) const {
    auto cell = cell_of(index);
    Pt p;
    for (int d = 0; d < space.dim; ++d) {
        int bit = (which >> d) & 1;
        p[d] = space.axis[size_t(d)].lo + (cell[size_t(d)] + bit) * cell_width(d);
    }
    return p;
}

int BoxGrid::locate(const Pt& p0) const {
    Pt p = space.wrap(p0);
    std::array<int, 3> cell{0, 0, 0};
    for (int d = 0; d < space.dim; ++d) {
        int i = int(std::floor((p[d] - space.axis[size_t(d)].lo) / cell_width(d)));
        cell[size_t(d)] = std::clamp(i, 0, res[size_t(d)] - 1);
    }
    return index_of(cell);
}

double BoxGrid::delta() const {
    double s = 0;
    for (int d = 0; d < space.dim; ++d) s += cell_width(d) * cell_width(d);
    return std::sqrt(s);
}

Pt integrate(const VectorFieldSpec& field, Pt x, double tau, double h, Polyline* trajectory) {
    if (tau < 0) throw IntegrationDiverged("integrate: tau must be >= 0");
    if (h <= 0) throw IntegrationDiverged("integrate: step must be > 0");
    if (trajectory) trajectory->push_back(x);
    if (tau == 0) return x;
    int steps = std::max(1, int(std::lround(tau / h)));
    double hh = tau / steps;
    auto add = [&](const Pt& a, const Pt& b, double c) {
        Pt r = a;
        for (int d = 0; d < field.space.dim; ++d) r[d] += c * b[d];
        return r;
    };
    for (int i = 0; i < steps; ++i) {
        Pt k1 = field.eval(x);
        Pt k2 = field.eval(add(x, k1, hh / 2));
        Pt k3 = field.eval(add(x, k2, hh / 2));
        Pt k4 = field.eval(add(x, k3, hh));
        for (int d = 0; d < field.space.dim; ++d)
            x[d] += hh / 6 * (k1[d] + 2 * k2[d] + 2 * k3[d] + k4[d]);
        for (int d = 0; d < field.space.dim; ++d)
            if (!std::isfinite(x[d])) throw IntegrationDiverged("integrate: state not finite");
        if (trajectory) trajectory->push_back(x);
    }
    return x;
}

namespace {

// Boxes overlapping the L-inf ball of radius pad around (wrapped) point p.
void boxes_near(const BoxGrid& grid, const Pt& p0, double pad, std::set<int>& out) {
    const PhaseSpace& sp = grid.space;
    Pt p = sp.wrap(p0);
    std::array<std::vector<int>, 3> ranges;
    for (int d = 0; d < sp.dim; ++d) {
        double wd = grid.cell_width(d);
        double lo = (p[d] - pad - sp.axis[size_t(d)].lo) / wd;
        double hi = (p[d] + pad - sp.axis[size_t(d)].lo) / wd;
        int a = int(std::floor(lo));
        int b = int(std::floor(hi));
        int n = grid.res[size_t(d)];
        if (b - a + 1 >= n) {
            for (int i = 0; i < n; ++i) ranges[size_t(d)].push_back(i);
        } else {
            for (int i = a; i <= b; ++i) {
                int j = i;
                if (sp.axis[size_t(d)].periodic)
                    j = ((i % n) + n) % n;
                else
                    j = std::clamp(i, 0, n - 1);
                ranges[size_t(d)].push_back(j);
            }
            std::sort(ranges[size_t(d)].begin(), ranges[size_t(d)].end());
            ranges[size_t(d)].erase(std::unique(ranges[size_t(d)].begin(), ranges[size_t(d)].end()),
                                    ranges[size_t(d)].end());
        }
    }
    // keep cells whose rectangle meets the metric ball of radius pad
    auto cell_gap = [&](int d, int i) {
        double lo = sp.axis[size_t(d)].lo + i * grid.cell_width(d);
        double hi = lo + grid.cell_width(d);
        double direct = p[d] < lo ? lo - p[d] : (p[d] > hi ? p[d] - hi : 0.0);
        if (!sp.axis[size_t(d)].periodic) return direct;
        double per = sp.axis[size_t(d)].extent();
        double wrapped = std::min(std::abs(p[d] - per - hi), std::abs(p[d] + per - lo));
        return std::min(direct, wrapped);
    };
    auto keep = [&](const std::array<int, 3>& cell) {
        double s2 = 0;
        for (int d = 0; d < sp.dim; ++d) {
            double gdist = cell_gap(d, cell[size_t(d)]);
            s2 += gdist * gdist;
        }
        if (s2 <= pad * pad) out.insert(grid.index_of(cell));
    };
    std::array<int, 3> cell{0, 0, 0};
    if (sp.dim == 2) {
        for (int i : ranges[0])
            for (int j : ranges[1]) {
                cell[0] = i;
                cell[1] = j;
                keep(cell);
            }
    } else {
        for (int i : ranges[0])
            for (int j : ranges[1])
                for (int k : ranges[2]) {
                    cell = {i, j, k};
                    keep(cell);
                }
    }
}

Polyline thin_polyline(const Polyline& in, size_t max_points) {
    if (in.size() <= max_points) return in;
    Polyline out;
    size_t stride = (in.size() + max_points - 2) / (max_points - 1);
    for (size_t i = 0; i < in.size(); i += stride) out.push_back(in[i]);
    if (out.back().x != in.back().x) out.push_back(in.back());
    return out;
}

}  // namespace

TransitionGraph box_map(const VectorFieldSpec& field, const BoxGrid& grid, double tau, double pad) {
    if (tau < 1.0) throw MapConstructionFailed("box_map: tau must be >= 1");
    if (pad < 0.0) throw MapConstructionFailed("box_map: pad must be >= 0");
    field.validate();
    double h = tau / 64.0;

    TransitionGraph g;
    g.vertex_count = grid.box_count();
    int corners = 1 << field.space.dim;
    for (int b = 0; b < grid.box_count(); ++b) {
        // center first, then corners; per-sample trajectories and images
        std::vector<Polyline> trajs;
        std::set<int> targets;
        try {
            trajs.emplace_back();
            integrate(field, grid.center(b), tau, h, &trajs.back());
            for (int which = 0; which < corners; ++which) {
                trajs.emplace_back();
                integrate(field, grid.corner(b, which), tau, h, &trajs.back());
            }
            for (const auto& tr : trajs) boxes_near(grid, tr.back(), pad, targets);
        } catch (const IntegrationDiverged& e) {
            throw MapConstructionFailed(std::string("box_map: ") + e.what());
        }
        if (targets.empty()) throw MapConstructionFailed("box_map: box image is empty");
        for (int to : targets) {
            // Weigh the edge by the sample landing nearest the target, so the
            // closing jump stays short: a box whose image smears across
            // homotopically distinct regions must not mix their routes.
            size_t best = 0;
            double best_d = -1;
            for (size_t s = 0; s < trajs.size(); ++s) {
                double d = field.space.dist(field.space.wrap(trajs[s].back()), grid.center(to));
                if (best_d < 0 || d < best_d) {
                    best_d = d;
                    best = s;
                }
            }
            Polyline path;
            path.reserve(19);
            // initial jump from the box anchor to the sample start (inside
            // the box), then the trajectory, then the jump to the target
            // anchor lifted next to the trajectory end
            Pt start_anchor = grid.center(b);
            const Polyline& traj = trajs[best];
            for (int d = 0; d < field.space.dim; ++d) {
                const auto& ax = field.space.axis[size_t(d)];
                if (!ax.periodic) continue;
                double per = ax.extent();
                start_anchor[d] += std::round((traj.front()[d] - start_anchor[d]) / per) * per;
            }
            path.push_back(start_anchor);
            Polyline thin = thin_polyline(traj, 17);
            path.insert(path.end(), thin.begin(), thin.end());
            Pt traj_end = thin.back();
            Pt anchor = grid.center(to);
            for (int d = 0; d < field.space.dim; ++d) {
                const auto& ax = field.space.axis[size_t(d)];
                if (!ax.periodic) continue;
                double per = ax.extent();
                anchor[d] += std::round((traj_end[d] - anchor[d]) / per) * per;
            }
            path.push_back(anchor);
            g.add_edge(b, to, tau, std::move(path));
        }
    }
    g.finalize();
    return g;
}

}  // namespace flowcert
