#pragma once

#include "flowcert/forms.hpp"

namespace flowcert {
namespace fixtures {

struct GraphFixture {
    TransitionGraph graph;
    Cochain1 xi;
};

// Small weighted digraphs used across the test and acceptance suites.
GraphFixture g1();      // edges 0->1:-1, 1->0:-1, 1->2:0, 2->2:0
GraphFixture g3();      // one vertex, self-loop +1
GraphFixture g4();      // 0->1:0, 1->0:0, 1->2:1, 2->1:0
GraphFixture g5();      // 0->1:+1, 1->0:-1, 0->1:0 (parallel)
GraphFixture cycle3();  // directed 3-cycle, -1/3 per edge

struct FlowFixture {
    VectorFieldSpec field;
    std::vector<double> xi_coeffs;  // default class coefficients
    double tau = 1.0;
    double pad_factor = 1.0;  // default pad = pad_factor * grid diameter
};

FlowFixture example1();                              // product M x S^1
FlowFixture example2(double mu, double nu, double a, double b);  // stalled torus translation
FlowFixture example3(double mu, double nu);          // irrational slope (1, sqrt 2)
FlowFixture ring();                                  // planar ring glued to a torus
FlowFixture rigid(double a, double b);               // f == 1, rational slope

}  // namespace fixtures
}  // namespace flowcert
