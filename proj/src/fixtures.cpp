#include "flowcert/fixtures.hpp"

#include <cmath>

namespace flowcert {
namespace fixtures {

namespace {

GraphFixture make(int n, std::vector<std::tuple<int, int, const char*>> edges) {
    GraphFixture f;
    f.graph.vertex_count = n;
    for (auto& [u, v, w] : edges) {
        f.graph.add_edge(u, v);
        f.xi.w.push_back(rat_parse(w));
    }
    f.graph.finalize();
    return f;
}

}  // namespace

GraphFixture g1() { return make(3, {{0, 1, "-1"}, {1, 0, "-1"}, {1, 2, "0"}, {2, 2, "0"}}); }

GraphFixture g3() { return make(1, {{0, 0, "1"}}); }

GraphFixture g4() { return make(3, {{0, 1, "0"}, {1, 0, "0"}, {1, 2, "1"}, {2, 1, "0"}}); }

GraphFixture g5() { return make(2, {{0, 1, "1"}, {1, 0, "-1"}, {0, 1, "0"}}); }

GraphFixture cycle3() {
    return make(3, {{0, 1, "-1/3"}, {1, 2, "-1/3"}, {2, 0, "-1/3"}});
}

FlowFixture example1() {
    FlowFixture f;
    f.field.kind = FieldKind::Example1Product;
    f.field.space = PhaseSpace::product_circle();
    // speeds, step and pad balance two constraints: one-step image spread
    // below the pad (sampling enclosure) against stall zones inside one
    // pad radius of the rest points
    f.field.params = {0.16, 0.16, 0.25};
    f.xi_coeffs = {0.0, -1.0};
    f.tau = 2.0;
    f.pad_factor = 2.0;
    return f;
}

FlowFixture example2(double mu, double nu, double a, double b) {
    FlowFixture f;
    f.field.kind = FieldKind::Example2Torus;
    f.field.space = PhaseSpace::torus2();
    f.field.params = {a, b, 0.5, 0.5, 2.5 / 32.0};  // rest point p, stall radius
    f.xi_coeffs = {mu, nu};
    return f;
}

FlowFixture example3(double mu, double nu) {
    FlowFixture f;
    f.field.kind = FieldKind::Example3Irrational;
    f.field.space = PhaseSpace::torus2();
    f.field.params = {1.0, std::sqrt(2.0)};
    f.xi_coeffs = {mu, nu};
    return f;
}

FlowFixture ring() {
    FlowFixture f;
    f.field.kind = FieldKind::PlanarRingTorus;
    f.field.space = PhaseSpace::ring_torus();
    f.xi_coeffs = {0.0, 1.0};  // pullback of the angular class of the ring
    return f;
}

FlowFixture rigid(double a, double b) {
    FlowFixture f;
    f.field.kind = FieldKind::Example2Torus;
    f.field.space = PhaseSpace::torus2();
    // f == 1 everywhere samples can look: vanishing point off every dyadic
    // lattice, with a radius no sample ever enters
    f.field.params = {a, b, 0.3711, 0.2117, 1e-9};
    f.xi_coeffs = {0.0, -1.0};
    return f;
}

}  // namespace fixtures
}  // namespace flowcert
