#pragma once

#include <functional>
#include <string>

#include "flowcert/cochain.hpp"
#include "flowcert/phase_space.hpp"

namespace flowcert {

struct ChartCoverageError : GraphError {
    using GraphError::GraphError;
};
struct NotCohomologous : GraphError {
    using GraphError::GraphError;
};
struct NotClosed : GraphError {
    using GraphError::GraphError;
};
struct GraphMismatch : GraphError {
    using GraphError::GraphError;
};

// One chart: an open axis box in lifted coordinates (may straddle a periodic
// seam) carrying a potential in that lift.
struct Chart {
    std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
    std::function<double(const Pt&)> potential;  // evaluated at lifted points
};

// Continuous closed 1-form as a finite chart family; on overlaps the
// potential differences are locally constant (checked statistically).
struct ClosedOneForm {
    PhaseSpace space;
    std::vector<Chart> charts;
    std::string label;

    // mu_d dx_d in unit-period coordinates: 2 overlapping interval charts per
    // periodic axis, one global chart if the form is exact.
    static ClosedOneForm linear(const PhaseSpace& space, const std::vector<double>& coeffs);

    // Chart potentials from a sampled scalar table per chart (bilinear).
    static ClosedOneForm tabulated(const PhaseSpace& space,
                                   const std::vector<std::array<double, 6>>& regions,
                                   const std::vector<std::vector<double>>& tables,
                                   const std::array<int, 3>& table_res);

    // Checks the locally-constant-difference invariant on sampled overlaps.
    bool overlaps_consistent(int samples_per_axis = 12, double tol = 1e-9) const;
};

struct Scale {
    double eps = 0;
    double delta = 0;
};

// Line integral along a polyline (unwrapped coordinates). Each segment must
// fit inside one chart, recursively bisecting when needed.
double line_integral(const ClosedOneForm& form, const Polyline& path);

// Edge weights = line integral over the stored trajectory-plus-jump
// polylines, quantized once so downstream arithmetic is exact.
Cochain1 pull_back(const ClosedOneForm& form, const TransitionGraph& g);

// <xi, z> over the fixed cycle basis; bilinear.
Rat pairing(const CycleBasis& basis, const Cochain1& xi, const CycleVector& z);

Cochain1 coboundary(const TransitionGraph& g, const Potential0& p);

// Tietze-style extension: returns a cochain equal to omega_sub on the
// sub-induced subgraph and cohomologous to xi globally.
Cochain1 extend_form(const TransitionGraph& g, const std::vector<int>& sub_vertices,
                     const Cochain1& omega_sub, const Cochain1& xi, const Rat& eta_zero);

// eps = half the Lebesgue number (diameter convention) of the chart cover
// over grid sample points; delta = eps for convex-cell spaces.
Scale compute_scale(const ClosedOneForm& form, const BoxGrid& grid);

// Closed graph walk -> coordinates in the fixed cycle basis (signed counts
// of non-tree edges).
CycleVector associated_cycle(const TransitionGraph& g, const CycleBasis& basis,
                             const std::vector<int>& walk_edges);

}  // namespace flowcert
