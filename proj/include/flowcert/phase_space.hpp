#pragma once

#include <functional>

#include "flowcert/transition.hpp"

namespace flowcert {

struct IntegrationDiverged : GraphError {
    using GraphError::GraphError;
};
struct MapConstructionFailed : GraphError {
    using GraphError::GraphError;
};
struct InvalidField : GraphError {
    using GraphError::GraphError;
};

struct AxisSpec {
    double lo = 0.0, hi = 1.0;
    bool periodic = true;
    double extent() const { return hi - lo; }
};

enum class SpaceKind { Torus2, Annulus, ProductWithCircle };

struct PhaseSpace {
    SpaceKind kind = SpaceKind::Torus2;
    int dim = 2;
    std::array<AxisSpec, 3> axis;

    static PhaseSpace torus2();                       // [0,1)^2, both periodic
    static PhaseSpace annulus(double r0, double r1);  // r in [r0,r1], phi in [0,1)
    static PhaseSpace product_circle();               // M = S^1 times S^1, unit periods
    static PhaseSpace ring_torus();                   // r in [1,5) glued, phi in [0,1)

    Pt wrap(Pt p) const;                // periodic axes reduced to [lo, hi)
    bool contains(const Pt& p) const;   // bounds on non-periodic axes
    double axis_dist(int d, double a, double b) const;
    double dist(const Pt& a, const Pt& b) const;
    double diameter() const;
};

enum class FieldKind { Example1Product, Example2Torus, Example3Irrational, PlanarRingTorus, TabulatedGrid };

// Vector field specification; parameters depend on the kind:
//   Example2Torus: a, b, px, py, bump radius r0  (V = f * (a, b), f = 1 - bump at p)
//   Example3Irrational: a, b                      (V = (a, b), a/b irrational)
//   Example1Product: m-speed scale c_m            (see fixtures)
//   PlanarRingTorus: none
//   TabulatedGrid: per-axis resolution + row-major samples of each component
struct VectorFieldSpec {
    FieldKind kind = FieldKind::Example3Irrational;
    PhaseSpace space;
    std::vector<double> params;
    std::array<int, 3> table_res{0, 0, 0};
    std::vector<double> table;  // table_res cells x dim components

    Pt eval(const Pt& p) const;
    void validate() const;  // rationality constraints checked by continued fractions
};

struct BoxGrid {
    PhaseSpace space;
    std::array<int, 3> res{1, 1, 1};

    int box_count() const;
    int index_of(const std::array<int, 3>& cell) const;
    std::array<int, 3> cell_of(int index) const;
    Pt center(int index) const;
    Pt corner(int index, int which) const;  // which in [0, 2^dim)
    int locate(const Pt& p) const;          // containing box (wrap-aware)
    double cell_width(int d) const;
    double delta() const;  // max cell diagonal = the grid-scale delta
};

// Fourth-order fixed-step integration of the time-tau flow; records the
// unwrapped trajectory when `trajectory` is non-null.
Pt integrate(const VectorFieldSpec& field, Pt x, double tau, double h,
             Polyline* trajectory = nullptr);

// Sampling enclosure of the time-tau map: corner + center samples per box,
// images inflated by pad. Every edge carries the center trajectory followed
// by the closing jump to the target box center.
TransitionGraph box_map(const VectorFieldSpec& field, const BoxGrid& grid, double tau, double pad);

// True continued-fraction test: is x within tol of a rational p/q, q <= qmax?
bool is_nearly_rational(double x, long qmax, double tol);

}  // namespace flowcert
